"""Small finite fields F_{p^n} for point enumeration and twist formulas.

Elements are stored as coefficient vectors in the basis 1, x, ..., x^{n-1}
modulo a fixed irreducible polynomial.  Each element also has an integer
index ``sum(c_i * p**i)``; exhaustive loops work on numpy arrays of indices
through discrete-log tables that are built once per field.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

MAX_DEGREE = 12
ENUMERATION_LIMIT = 10**6


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p (constant term first) ------------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    inv_lead = pow(m[-1], -1, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        f = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - f * c) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _xpow_mod(e: int, m: Sequence[int], p: int) -> list[int]:
    result, base = [1], _pmod([0, 1], m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    n = len(poly) - 1
    if n < 1:
        return False
    if n == 1:
        return True

    def sub_x(a):
        a = list(a) + [0] * max(0, 2 - len(a))
        a[1] = (a[1] - 1) % p
        return _trim(a)

    if sub_x(_xpow_mod(p**n, poly, p)):
        return False
    for r in prime_factors(n):
        g = _pgcd(poly, sub_x(_xpow_mod(p ** (n // r), poly, p)), p)
        if len(g) > 1:
            return False
    return True


# -- fields -------------------------------------------------------------------

@dataclass(frozen=True)
class FqField:
    p: int
    n: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.n

    def __call__(self, value) -> FqElem:
        if isinstance(value, FqElem):
            if value.field != self:
                raise FieldError("element belongs to another field")
            return value
        if isinstance(value, int):
            return FqElem(self, (value % self.p,) + (0,) * (self.n - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.n:
            raise FieldError(f"coefficient vector longer than degree {self.n}")
        return FqElem(self, tuple(coeffs) + (0,) * (self.n - len(coeffs)))

    def from_index(self, idx: int) -> FqElem:
        coeffs = []
        for _ in range(self.n):
            idx, c = divmod(idx, self.p)
            coeffs.append(c)
        return FqElem(self, tuple(coeffs))

    @property
    def zero(self) -> FqElem:
        return self(0)

    @property
    def one(self) -> FqElem:
        return self(1)

    def elements(self) -> Iterator[FqElem]:
        for i in range(self.q):
            yield self.from_index(i)

    def __repr__(self):
        return f"F_{self.p}^{self.n}"


@lru_cache(maxsize=None)
def make_field(p: int, n: int) -> FqField:
    """F_{p^n} modulo the lexicographically least monic irreducible polynomial.

    Candidates are ordered by the index of their non-leading coefficients,
    i.e. lexicographically on (c_{n-1}, ..., c_0).
    """
    if not is_prime(p):
        raise FieldError("not prime")
    if p == 2:
        raise FieldError("characteristic 2 is not supported")
    if not 1 <= n <= MAX_DEGREE:
        raise FieldError("degree out of range")
    for idx in range(p**n):
        low, k = [], idx
        for _ in range(n):
            k, c = divmod(k, p)
            low.append(c)
        poly = low + [1]
        if is_irreducible(poly, p):
            return FqField(p, n, tuple(poly))
    raise FieldError("no irreducible polynomial found")  # unreachable


@dataclass(frozen=True)
class FqElem:
    field: FqField
    coeffs: tuple[int, ...]

    @property
    def index(self) -> int:
        p = self.field.p
        return sum(c * p**i for i, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _coerce(self, other) -> FqElem:
        if isinstance(other, FqElem):
            if other.field != self.field:
                raise FieldError("elements of different fields")
            return other
        return self.field(other)

    def __add__(self, other):
        o = self._coerce(other)
        p = self.field.p
        return FqElem(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FqElem(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        f = self.field
        prod = _pmod(_pmul(_trim(list(self.coeffs)), _trim(list(o.coeffs)), f.p), f.modulus, f.p)
        return f(prod)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> FqElem:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise FieldError("zero has no multiplicative order")
        order = self.field.q - 1
        for r in prime_factors(order):
            while order % r == 0 and (self ** (order // r)) == self.field.one:
                order //= r
        return order

    def __repr__(self):
        if self.field.n == 1:
            return str(self.coeffs[0])
        return "[" + ",".join(map(str, self.coeffs)) + "]"


def frobenius(field: FqField, a: FqElem, m: int) -> FqElem:
    """``a ** (p ** m)``."""
    if m < 0:
        raise FieldError("negative Frobenius power")
    return field(a) ** (field.p ** (m % field.n)) if m else field(a)


@lru_cache(maxsize=None)
def primitive_element(field: FqField) -> FqElem:
    """Least multiplicative generator in index order."""
    order = field.q - 1
    rs = prime_factors(order)
    for idx in range(1, field.q):
        g = field.from_index(idx)
        if all(g ** (order // r) != field.one for r in rs):
            return g
    raise FieldError("no generator found")  # unreachable


def root_of_unity(field: FqField, e: int) -> FqElem:
    """The primitive ``e``-th root of unity ``g^((q-1)/e)`` for the least generator ``g``."""
    if e < 1 or (field.q - 1) % e:
        raise FieldError(f"no {e}-th root of unity in this field")
    if e == 1:
        return field.one
    return primitive_element(field) ** ((field.q - 1) // e)


def is_square(a: FqElem) -> bool:
    if a.is_zero():
        return True
    return a ** ((a.field.q - 1) // 2) == a.field.one


# -- subfield embeddings --------------------------------------------------------

@lru_cache(maxsize=None)
def _embedding_root(small: FqField, big: FqField) -> FqElem:
    if big.p != small.p or big.n % small.n:
        raise FieldError(f"{small} is not a subfield of {big}")
    if small.n == 1:
        return big.zero
    if big.n == small.n:
        if big.modulus == small.modulus:
            return big([0, 1])
    # least root (by index) of the small modulus inside the big field
    t = tables(big)
    xs = np.arange(big.q, dtype=np.int64)
    acc = np.zeros_like(xs)
    for c in reversed(small.modulus):
        acc = t.add(t.mul(acc, xs), np.full_like(xs, big(c).index))
    roots = np.flatnonzero(acc == 0)
    if not len(roots):
        raise FieldError("modulus has no root in the larger field")
    return big.from_index(int(roots[0]))


def embed(a: FqElem, big: FqField) -> FqElem:
    """Image of ``a`` under the fixed embedding of its field into ``big``."""
    small = a.field
    if small == big:
        return a
    if small.n == 1:
        return big(a.coeffs[0])
    theta = _embedding_root(small, big)
    acc = big.zero
    for c in reversed(a.coeffs):
        acc = acc * theta + c
    return acc


# -- vectorised tables ------------------------------------------------------------

class FieldTables:
    """Discrete-log tables and vectorised arithmetic on element indices."""

    def __init__(self, field: FqField):
        if field.q > ENUMERATION_LIMIT:
            raise FieldError("field too large for enumeration")
        self.field = field
        q, p, n = field.q, field.p, field.n
        self.q = q
        self.powers = np.array([p**i for i in range(n)], dtype=np.int64)
        g = primitive_element(field)
        exp = np.empty(q - 1, dtype=np.int64)
        exp[0] = 1
        filled = 1
        while filled < q - 1:
            take = min(filled, q - 1 - filled)
            exp[filled:filled + take] = self._mul_scalar(exp[:take], g**filled)
            filled += take
        self.exp = exp
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1, dtype=np.int64)
        self.log = log

    def _digits(self, a: np.ndarray) -> np.ndarray:
        p = self.field.p
        return (a[:, None] // self.powers[None, :]) % p

    def _mul_scalar(self, a: np.ndarray, c: FqElem) -> np.ndarray:
        f = self.field
        p, n = f.p, f.n
        if n == 1:
            return (a * c.coeffs[0]) % p
        da = self._digits(a)
        prod = np.zeros((len(a), 2 * n - 1), dtype=np.int64)
        for j, cj in enumerate(c.coeffs):
            if cj:
                prod[:, j:j + n] += da * cj
        prod %= p
        mod = f.modulus
        for d in range(2 * n - 2, n - 1, -1):
            top = prod[:, d].copy()
            for k in range(n):
                prod[:, d - n + k] -= top * mod[k]
            prod[:, d] = 0
            prod %= p
        return prod[:, :n] @ self.powers

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p = self.field.p
        if self.field.n == 1:
            return (a + b) % p
        return ((self._digits(a) + self._digits(b)) % p) @ self.powers

    def neg(self, a: np.ndarray) -> np.ndarray:
        p = self.field.p
        if self.field.n == 1:
            return (-a) % p
        return ((-self._digits(a)) % p) @ self.powers

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        nz = (a != 0) & (b != 0)
        la = self.log[a]
        lb = self.log[b]
        out = self.exp[(la + lb) % (self.q - 1)]
        return np.where(nz, out, 0)

    def frobenius(self, a: np.ndarray, m: int) -> np.ndarray:
        shift = pow(self.field.p, m, self.q - 1)
        out = self.exp[(self.log[a] * shift) % (self.q - 1)]
        return np.where(a != 0, out, 0)

    def scalar(self, c: FqElem) -> np.int64:
        return np.int64(c.index)

    def quadratic_character(self, a: np.ndarray) -> np.ndarray:
        """1 on nonzero squares, -1 on non-squares, 0 on zero."""
        la = self.log[a]
        chi = np.where(la % 2 == 0, 1, -1)
        return np.where(a == 0, 0, chi)

    def sqrt_index(self, a: int) -> list[int]:
        """Indices of the square roots of the element with index ``a``."""
        if a == 0:
            return [0]
        la = int(self.log[a])
        if la % 2:
            return []
        half = (self.q - 1) // 2
        return sorted({int(self.exp[la // 2]), int(self.exp[la // 2 + half])})


@lru_cache(maxsize=32)
def tables(field: FqField) -> FieldTables:
    return FieldTables(field)
