"""Brute-force reference computations that share no code with the package."""

from __future__ import annotations

import itertools
from functools import lru_cache

from sympy import ZZ
from sympy.polys import galoistools as gt


def squares_mod(p: int) -> set[int]:
    return {(y * y) % p for y in range(p)}


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if a in squares_mod(p) else -1


def count_affine_naive(p: int, a1, a2, a3, a4, a6) -> int:
    """Solutions of the long Weierstrass equation over F_p by double loop."""
    n = 0
    for x in range(p):
        rhs = (x ** 3 + a2 * x * x + a4 * x + a6) % p
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - rhs) % p == 0:
                n += 1
    return n


def ap_naive(p: int, coeffs) -> int:
    return p + 1 - (count_affine_naive(p, *coeffs) + 1)


# -- polynomials in T as coefficient lists, constant term first ---------------------------

def _padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def det_cofactor(m):
    """Laplace expansion along the first row; entries are polynomials."""
    n = len(m)
    if n == 0:
        return [1]
    total = [0]
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = _pmul(m[0][j], det_cofactor(minor))
        if j % 2:
            term = [-c for c in term]
        total = _padd(total, term)
    return total


def det_one_minus_TA(a) -> list[int]:
    n = len(a)
    m = [[[int(i == j), -a[i][j]] for j in range(n)] for i in range(n)]
    return _trim(det_cofactor(m)) or [0]


# -- extension fields through sympy's dense GF(p)[x] routines ----------------------------------

class GF:
    """F_{p^k} as GF(p)[x]/(f) with any irreducible f; elements are tuples (high degree first)."""

    def __init__(self, p: int, k: int):
        self.p, self.k = p, k
        self.f = self._modulus()

    def _modulus(self):
        for tail in itertools.product(range(self.p), repeat=self.k):
            f = [1] + list(tail)
            if gt.gf_irreducible_p([ZZ(c) for c in f], self.p, ZZ):
                return [ZZ(c) for c in f]
        raise AssertionError("no irreducible polynomial")

    def norm(self, a):
        return tuple(gt.gf_strip(gt.gf_rem([ZZ(c) for c in a], self.f, self.p, ZZ)))

    def elements(self):
        for coeffs in itertools.product(range(self.p), repeat=self.k):
            yield self.norm(list(coeffs))

    def add(self, a, b):
        return self.norm(gt.gf_add(list(a), list(b), self.p, ZZ))

    def mul(self, a, b):
        return self.norm(gt.gf_mul(list(a), list(b), self.p, ZZ))

    def pow(self, a, e):
        return self.norm(gt.gf_pow_mod(list(a), e, self.f, self.p, ZZ))

    def sqrt_table(self) -> dict:
        if not hasattr(self, "_sq"):
            self._sq = {}
            for y in self.elements():
                self._sq.setdefault(self.mul(y, y), []).append(y)
        return self._sq

    def const(self, c):
        return self.norm([c % self.p])


@lru_cache(maxsize=None)
def gf(p: int, k: int) -> GF:
    return GF(p, k)


def fixed_points_oracle(p: int, k: int, a2: int, a4: int, a6: int, c2: int, c3: int, n: int) -> int:
    """Points of y^2 = x^3 + a2 x^2 + a4 x + a6 over F_{p^k} (infinity included)
    fixed by (x, y) -> (c2 x^(p^n), c3 y^(p^n)); c2, c3 lie in F_p."""
    F = gf(p, k)
    A2, A4, A6, C2, C3 = (F.const(v) for v in (a2, a4, a6, c2, c3))
    e = p ** n
    sq_roots = F.sqrt_table()
    count = 1
    for x in F.elements():
        if F.mul(C2, F.pow(x, e)) != x:
            continue
        x2 = F.mul(x, x)
        rhs = F.add(F.add(F.add(F.mul(x2, x), F.mul(A2, x2)), F.mul(A4, x)), A6)
        for y in sq_roots.get(rhs, []):
            if F.mul(C3, F.pow(y, e)) == y:
                count += 1
    return count


# -- elliptic curves at p >= 5 from valuations alone -------------------------------------

def _v(x, p):
    from fractions import Fraction
    x = Fraction(x)
    if x == 0:
        return 10 ** 9
    v, n, d = 0, x.numerator, x.denominator
    while n % p == 0:
        n, v = n // p, v + 1
    while d % p == 0:
        d, v = d // p, v - 1
    return v


def kodaira_oracle(p: int, coeffs) -> tuple[str, int, int]:
    """(Kodaira symbol, component count, minimal v(disc)) from the table of valuations for p >= 5."""
    from fractions import Fraction
    a1, a2, a3, a4, a6 = (Fraction(c) for c in coeffs)
    b2, b4, b6 = a1 * a1 + 4 * a2, 2 * a4 + a1 * a3, a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    v4, v6, vd = _v(c4, p), _v(c6, p), _v(disc, p)
    # bring to an integral model, then strip twelves while it stays integral
    while v4 < 0 or v6 < 0:
        v4, v6, vd = v4 + 4, v6 + 6, vd + 12
    while v4 >= 4 and v6 >= 6:
        v4, v6, vd = v4 - 4, v6 - 6, vd - 12
    if vd == 0:
        return "I0", 1, 0
    if v4 == 0:
        return f"I{vd}", vd, vd
    if 3 * v4 < vd:  # v(j) < 0 with v(c4) > 0: additive, quadratic twist of I_n
        n = vd - 6
        return f"I{n}*", n + 5, vd
    return {2: ("II", 1), 3: ("III", 2), 4: ("IV", 3), 6: ("I0*", 5), 8: ("IV*", 7), 9: ("III*", 8),
            10: ("II*", 9)}[vd] + (vd,)


def node_is_split(p: int, a2: int, a4: int, a6: int) -> bool:
    """For y^2 = f(x) with a double root r of f mod p: tangents y = +-sqrt(f''(r)/2) (x - r)."""
    f = lambda x: (x ** 3 + a2 * x * x + a4 * x + a6) % p  # noqa: E731
    df = lambda x: (3 * x * x + 2 * a2 * x + a4) % p  # noqa: E731
    r = next(x for x in range(p) if f(x) == 0 and df(x) == 0)
    half_second = (3 * r + a2) % p
    assert half_second != 0, "cusp, not a node"
    return legendre(half_second, p) == 1
