"""Exact integer linear algebra and symmetric-function helpers.

Everything here works over Python integers and ``fractions.Fraction``;
no floating point is used anywhere.  Matrices act on row vectors unless a
docstring says otherwise.

Echelon pivot rule (shared by :func:`kernel_basis`, :func:`hermite_rows` and
the solvers): columns are processed left to right; within a column the row
with the smallest nonzero absolute value wins, ties broken by the lowest row
index; the other rows are reduced by floor division against it until the
column is cleared below the pivot.  Pivots are made positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


class LinearAlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise LinearAlgebraError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise LinearAlgebraError(
                f"entry count {len(self.entries)} != {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise LinearAlgebraError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows,
                         tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise LinearAlgebraError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for j in range(other.cols):
                out.append(sum(r[k] * other.entries[k * other.cols + j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def __add__(self, other: IntMatrix) -> IntMatrix:
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def _same_shape(self, other: IntMatrix):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise LinearAlgebraError("shape mismatch")

    def __pow__(self, k: int) -> IntMatrix:
        if self.rows != self.cols:
            raise LinearAlgebraError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result, base = IntMatrix.identity(self.rows), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def trace(self) -> int:
        if self.rows != self.cols:
            raise LinearAlgebraError("trace of a non-square matrix")
        return sum(self[i, i] for i in range(self.rows))

    def det(self) -> int:
        """Bareiss fraction-free determinant."""
        if self.rows != self.cols:
            raise LinearAlgebraError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def inverse(self) -> IntMatrix:
        """Inverse of a unimodular matrix; raises if it is not integral."""
        n = self.rows
        if n != self.cols:
            raise LinearAlgebraError("inverse of a non-square matrix")
        aug = [[Fraction(x) for x in self.row(i)] + [Fraction(int(i == j)) for j in range(n)]
               for i in range(n)]
        for c in range(n):
            piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
            if piv is None:
                raise LinearAlgebraError("singular matrix")
            aug[c], aug[piv] = aug[piv], aug[c]
            inv = 1 / aug[c][c]
            aug[c] = [x * inv for x in aug[c]]
            for r in range(n):
                if r != c and aug[r][c] != 0:
                    f = aug[r][c]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
        out = []
        for r in range(n):
            for x in aug[r][n:]:
                if x.denominator != 1:
                    raise LinearAlgebraError("matrix is not invertible over the integers")
                out.append(int(x))
        return IntMatrix(n, n, tuple(out))

    def is_identity(self) -> bool:
        return self == IntMatrix.identity(self.rows) if self.rows == self.cols else False


def hstack(mats: Sequence[IntMatrix], rows: int) -> IntMatrix:
    """Concatenate matrices side by side; ``rows`` fixes the height when the list is empty."""
    for m in mats:
        if m.rows != rows:
            raise LinearAlgebraError("row count mismatch in hstack")
    out = [sum((list(m.row(i)) for m in mats), []) for i in range(rows)]
    return IntMatrix.from_rows(out, cols=sum(m.cols for m in mats))


def permutation_matrix(images: Sequence[int]) -> IntMatrix:
    """Row-vector permutation matrix: ``e_k @ P == e_{images[k]}``."""
    n = len(images)
    if sorted(images) != list(range(n)):
        raise LinearAlgebraError("not a permutation")
    ent = [0] * (n * n)
    for k, t in enumerate(images):
        ent[k * n + t] = 1
    return IntMatrix(n, n, tuple(ent))


# -- echelon machinery -------------------------------------------------------

def _echelon(rows: list[list[int]], ncols: int) -> int:
    """Row-reduce ``rows`` in place on their first ``ncols`` entries.

    Uses only unimodular row operations, so any trailing columns record the
    transform.  Returns the number of pivot rows, which end up on top.
    """
    r0 = 0
    nrows = len(rows)
    for c in range(ncols):
        if r0 == nrows:
            break
        while True:
            live = [i for i in range(r0, nrows) if rows[i][c] != 0]
            if not live:
                break
            piv = min(live, key=lambda i: (abs(rows[i][c]), i))
            if len(live) == 1:
                break
            pv = rows[piv][c]
            for i in live:
                if i != piv:
                    f = rows[i][c] // pv
                    if f:
                        rows[i] = [a - f * b for a, b in zip(rows[i], rows[piv])]
        if not live:
            continue
        rows[r0], rows[piv] = rows[piv], rows[r0]
        if rows[r0][c] < 0:
            rows[r0] = [-a for a in rows[r0]]
        r0 += 1
    return r0


def _pivot_columns(rows: Sequence[Sequence[int]]) -> list[int]:
    cols = []
    for r in rows:
        cols.append(next(j for j, x in enumerate(r) if x != 0))
    return cols


def hermite_rows(vectors: Iterable[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Zero rows are dropped; pivots are positive and entries above each pivot
    are reduced into ``[0, pivot)``.  The result depends only on the lattice.
    """
    rows = [list(v) for v in vectors]
    if not rows:
        return []
    width = len(rows[0])
    rank = _echelon(rows, width)
    rows = rows[:rank]
    for i, c in enumerate(_pivot_columns(rows)):
        pv = rows[i][c]
        for k in range(i):
            f = rows[k][c] // pv
            if f:
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[i])]
    return rows


def rank(m: IntMatrix) -> int:
    rows = m.to_rows()
    return _echelon(rows, m.cols) if rows else 0


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Saturated basis of the left kernel ``{v in Z^rows : v m = 0}``.

    The basis rows come from a unimodular transform (hence saturation) and
    are then put in Hermite normal form, so the output is canonical.
    """
    n = m.rows
    aug = [list(m.row(i)) + [int(i == j) for j in range(n)] for i in range(n)]
    r = _echelon(aug, m.cols) if n else 0
    kernel = [row[m.cols:] for row in aug[r:]]
    return IntMatrix.from_rows(hermite_rows(kernel), cols=n)


@lru_cache(maxsize=512)
def _left_echelon(basis: IntMatrix) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...], tuple[int, ...]]:
    k = basis.rows
    aug = [list(basis.row(i)) + [int(i == j) for j in range(k)] for i in range(k)]
    r = _echelon(aug, basis.cols)
    if r != k:
        raise LinearAlgebraError("basis rows are linearly dependent")
    ech = [row[:basis.cols] for row in aug]
    return (tuple(map(tuple, ech)), tuple(tuple(row[basis.cols:]) for row in aug), tuple(_pivot_columns(ech)))


def solve_left(basis: IntMatrix, v: Sequence[int]) -> list[int] | None:
    """Integer ``x`` with ``x @ basis == v``, or ``None`` if there is none.

    ``basis`` must have full row rank.  The echelon form of ``basis`` is cached.
    """
    k = basis.rows
    ech, transform, pivots = _left_echelon(basis)
    rest = list(v)
    y = []
    for row, c in zip(ech, pivots):
        q, rem = divmod(rest[c], row[c])
        if rem:
            return None
        y.append(q)
        if q:
            rest = [a - q * b for a, b in zip(rest, row)]
    if any(rest):
        return None
    return [sum(y[i] * transform[i][j] for i in range(k)) for j in range(k)]


def restrict_action(p: IntMatrix, basis: IntMatrix) -> IntMatrix:
    """The matrix ``R`` with ``basis @ p == R @ basis``."""
    image = basis @ p
    out = []
    for i in range(image.rows):
        x = solve_left(basis, image.row(i))
        if x is None:
            raise LinearAlgebraError("action does not preserve lattice")
        out.append(x)
    return IntMatrix.from_rows(out, cols=basis.rows)


# -- polynomials -------------------------------------------------------------

@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial in ``T``, constant term first, no trailing zeros."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        while c and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other: IntPoly) -> IntPoly:
        if not self.coeffs or not other.coeffs:
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(tuple(out))

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            mono = "" if k == 0 else ("T" if k == 1 else f"T^{k}")
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def elementary_from_power_sums(power_sums: Sequence, count: int) -> list[Fraction]:
    """Newton's identities: e_0..e_count from p_1..p_count (exact rationals)."""
    p = [Fraction(x) for x in power_sums]
    e = [Fraction(1)]
    for k in range(1, count + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * p[i - 1]
        e.append(acc / k)
    return e


def newton_char_poly(power_sums: Sequence, r: int) -> IntPoly:
    """``det(1 - T*Op)`` of a rank-``r`` operator from traces of its powers.

    Power sums beyond the ``r``-th are used as a consistency check: the
    elementary symmetric functions of index above ``r`` must vanish.
    """
    if r < 0 or len(power_sums) < r:
        raise LinearAlgebraError(f"need at least {r} power sums, got {len(power_sums)}")
    e = elementary_from_power_sums(power_sums, len(power_sums))
    if any(x != 0 for x in e[r + 1:]):
        raise LinearAlgebraError("inconsistent trace data: power sums exceed the stated rank")
    coeffs = []
    for k in range(r + 1):
        c = (-1) ** k * e[k]
        if c.denominator != 1:
            raise LinearAlgebraError("non-integral characteristic polynomial")
        coeffs.append(int(c))
    return IntPoly(tuple(coeffs))
