"""Elliptic curves over Q_p (p >= 5): minimal model, reduction type, semistable fibre.

Coefficients are rationals.  After minimisation every model is the short form
``y^2 = x^3 + A x + B`` with ``A, B`` p-integral; Tate's algorithm runs on that
model using only x-translations (``a1 = a3 = 0`` is preserved).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd
from typing import Optional

from . import ff
from .dualgraph import DualGraph, GraphAut, ngon, ngon_reflection
from .fibre import Component, CoordTwist, FibreDescriptor, ProjectiveLine, SemilinearElt, WeierstrassModel, require_valid

KINDS = ("good", "mult_split", "mult_nonsplit", "pot_good", "pot_mult")


class EllipticError(ValueError):
    pass


def val(x: Fraction, p: int) -> Optional[int]:
    """p-adic valuation; ``None`` for zero."""
    x = Fraction(x)
    if x == 0:
        return None
    v, num, den = 0, x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _ge(x: Fraction, p: int, k: int) -> bool:
    """``v(x) >= k`` (zero has infinite valuation)."""
    v = val(x, p)
    return v is None or v >= k


def residue(x: Fraction, p: int) -> int:
    x = Fraction(x)
    if x.denominator % p == 0:
        raise EllipticError("value is not p-integral")
    return x.numerator * pow(x.denominator, -1, p) % p


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def least_nonresidue(p: int) -> int:
    return next(u for u in range(2, p) if legendre(u, p) == -1)


@dataclass(frozen=True)
class WeierstrassCurve:
    p: int
    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction

    @classmethod
    def from_coeffs(cls, p: int, coeffs) -> WeierstrassCurve:
        a = [Fraction(c) for c in coeffs]
        if len(a) != 5:
            raise EllipticError("expected five coefficients a1,a2,a3,a4,a6")
        return cls(p, *a)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def invariants(self) -> tuple[Fraction, Fraction, Fraction]:
        """``(c4, c6, discriminant)``."""
        a1, a2, a3, a4, a6 = self.coeffs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
        disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        return c4, c6, disc


@dataclass(frozen=True)
class ReductionClass:
    p: int
    A: Fraction  # minimal short model y^2 = x^3 + A x + B
    B: Fraction
    v_disc: int
    v_c4: Optional[int]  # None when c4 = 0
    v_j: Optional[int]  # None when j = 0
    kind: Optional[str] = None
    e: int = 1
    twist_class: Optional[str] = None  # pot_mult only: "p" or "up"
    kodaira: Optional[str] = None
    m: Optional[int] = None

    @property
    def minimal_model(self) -> tuple[Fraction, ...]:
        return (Fraction(0), Fraction(0), Fraction(0), self.A, self.B)


def minimal_data(E: WeierstrassCurve) -> ReductionClass:
    p = E.p
    if p < 5:
        raise EllipticError("residue characteristic too small")
    if not ff.is_prime(p):
        raise EllipticError(f"{p} is not prime")
    c4, c6, disc = E.invariants()
    if disc == 0:
        raise EllipticError("singular curve")
    A, B = -c4 / 48, -c6 / 864
    # x = p^(2k) x', y = p^(3k) y' multiplies A by p^(-4k), B by p^(-6k)
    k = 0
    while not (_ge(A * Fraction(p) ** (4 * k), p, 0) and _ge(B * Fraction(p) ** (6 * k), p, 0)):
        k += 1
    while _ge(A * Fraction(p) ** (4 * k), p, 4) and _ge(B * Fraction(p) ** (6 * k), p, 6):
        k -= 1
    A, B = A * Fraction(p) ** (4 * k), B * Fraction(p) ** (6 * k)
    c4m, dm = -48 * A, -16 * (4 * A ** 3 + 27 * B ** 2)
    vd, vc4 = val(dm, p), val(c4m, p)
    vj = None if vc4 is None else 3 * vc4 - vd
    return ReductionClass(p, A, B, vd, vc4, vj)


# -- Tate's algorithm -----------------------------------------------------------------

def _translate(a2, a4, a6, r):
    """``x -> x + r`` on ``y^2 = x^3 + a2 x^2 + a4 x + a6``."""
    return a2 + 3 * r, a4 + 2 * r * a2 + 3 * r * r, a6 + r * a4 + r * r * a2 + r ** 3


def _cubic_multiple_root(b: int, c: int, d: int, p: int) -> tuple[int, int]:
    """Multiple root of ``T^3 + b T^2 + c T + d`` mod p and its multiplicity."""
    h = (b * b - 3 * c) % p
    if h == 0:
        return (-b * pow(3, -1, p)) % p, 3
    return (9 * d - b * c) * pow(2 * h, -1, p) % p, 2


def _cubic_disc(b: int, c: int, d: int) -> int:
    return b * b * c * c - 4 * c ** 3 - 4 * b ** 3 * d - 27 * d * d + 18 * b * c * d


def tate_algorithm(p: int, A: Fraction, B: Fraction) -> tuple[str, int, Optional[bool]]:
    """Kodaira symbol, geometric component count and (multiplicative only) splitness."""
    a2, a4, a6 = Fraction(0), Fraction(A), Fraction(B)
    pf = Fraction(p)

    def rd(x, k=0):
        return residue(x / pf ** k, p)

    while True:
        disc = -16 * (-a2 * a2 * a4 * a4 + 4 * a4 ** 3 + 4 * a2 ** 3 * a6 - 18 * a2 * a4 * a6 + 27 * a6 * a6)
        n = val(disc, p)
        if n == 0:
            return "I0", 1, None
        # move the singular point of the reduction to (0, 0)
        x0, _ = _cubic_multiple_root(rd(a2), rd(a4), rd(a6), p)
        a2, a4, a6 = _translate(a2, a4, a6, Fraction(x0))
        if not _ge(a2, p, 1):
            return f"I{n}", n, legendre(rd(a2), p) == 1
        if not _ge(a6, p, 2):
            return "II", 1, None
        if not _ge(4 * a2 * a6 - a4 * a4, p, 3):
            return "III", 2, None
        if not _ge(a6, p, 3):
            return "IV", 3, None
        # now p | a2, p^2 | a4, p^3 | a6
        b, c, d = rd(a2, 1), rd(a4, 2), rd(a6, 3)
        if _cubic_disc(b, c, d) % p:
            return "I0*", 5, None
        root, mult = _cubic_multiple_root(b, c, d, p)
        a2, a4, a6 = _translate(a2, a4, a6, Fraction(root * p))
        if mult == 2:
            k = 1
            while True:
                if k % 2:
                    # Y^2 - a6/p^(k+3): a3 = 0 keeps the double root at Y = 0
                    if rd(a6, k + 3):
                        return f"I{k}*", k + 5, None
                else:
                    j = (k + 2) // 2
                    qa, qb, qc = rd(a2, 1), rd(a4, j + 1), rd(a6, k + 3)
                    if (qb * qb - 4 * qa * qc) % p:
                        return f"I{k}*", k + 5, None
                    x1 = -qb * pow(2 * qa, -1, p) % p
                    a2, a4, a6 = _translate(a2, a4, a6, Fraction(x1 * p ** j))
                k += 1
        if rd(a6, 4):
            return "IV*", 7, None
        if not _ge(a4, p, 4):
            return "III*", 8, None
        if not _ge(a6, p, 6):
            return "II*", 9, None
        # non-minimal: rescale and start over
        a2, a4, a6 = a2 / pf ** 2, a4 / pf ** 4, a6 / pf ** 6


def classify(rc: ReductionClass) -> ReductionClass:
    p = rc.p
    kodaira, m, split = tate_algorithm(p, rc.A, rc.B)
    if rc.v_disc == 0:
        return replace(rc, kind="good", kodaira=kodaira, m=m)
    if split is not None:
        return replace(rc, kind="mult_split" if split else "mult_nonsplit", kodaira=kodaira, m=m)
    if rc.v_j is not None and rc.v_j < 0:
        return replace(rc, kind="pot_mult", e=2, twist_class=_split_twist_class(rc), kodaira=kodaira, m=m)
    e = 12 // gcd(rc.v_disc, 12)
    return replace(rc, kind="pot_good", e=e, kodaira=kodaira, m=m)


def _split_twist_class(rc: ReductionClass) -> str:
    """The ramified square class ``d`` whose quadratic twist ``E^d`` is split multiplicative."""
    p = rc.p
    # E^p: y^2 = x^3 + (A/p^2) x + B/p^3 has a node; tangents rational iff -2 A' B' is a square
    a, b = rc.A / p ** 2, rc.B / p ** 3
    return "p" if legendre(-2 * residue(a, p) * residue(b, p), p) == 1 else "up"


def ogg_conductor(rc: ReductionClass) -> int:
    if rc.m is None:
        raise EllipticError("classification not complete")
    return rc.v_disc - rc.m + 1


# -- semistable descriptors ------------------------------------------------------------------

def _single_vertex() -> DualGraph:
    return DualGraph.build(["v0"], {}, {})


def _residue_order_degree(p: int, e: int) -> int:
    n = 1
    while (p ** n - 1) % e:
        n += 1
    return n


def _table_for(ids, mult) -> dict:
    out = {}
    for a in ids:
        for b in ids:
            c = mult(a, b)
            if c is not None:
                out[(a, b)] = c
    return out


def _unit_table(ids) -> dict:
    return _table_for(ids, lambda a, b: b if a == "id" else a if b == "id" else None)


def semistable_descriptor(rc: ReductionClass) -> FibreDescriptor:
    """Fibre over a tame extension where the curve is semistable, with the Galois action.

    Elements are the identity, inertia generators and a designated Frobenius
    lift with ``frob_power`` 1.  The composition table lists every product of
    two listed elements that is itself listed.
    """
    if rc.kind is None:
        raise EllipticError("classification not complete")
    p = rc.p
    if rc.kind == "good":
        return _good_descriptor(rc)
    if rc.kind == "pot_good":
        return _pot_good_descriptor(rc)
    if rc.kind in ("mult_split", "mult_nonsplit"):
        return _gon_descriptor(p, rc.v_disc, frob_flip=rc.kind == "mult_nonsplit", tau=False)
    return _gon_descriptor(p, 2 * -rc.v_j, frob_flip=rc.twist_class == "up", tau=True)


def _good_descriptor(rc: ReductionClass) -> FibreDescriptor:
    p = rc.p
    fld = ff.make_field(p, 1)
    model = WeierstrassModel(fld, fld.zero, fld(residue(rc.A, p)), fld(residue(rc.B, p)))
    g = _single_vertex()
    ident = GraphAut.identity(g)
    elements = {"id": SemilinearElt("id", 0, True, ident), "frob": SemilinearElt("frob", 1, False, ident)}
    d = FibreDescriptor(p, 1, {"v0": Component("v0", 1, model)}, g, elements, "frob",
                        _unit_table(list(elements)), tame=True)
    require_valid(d)
    return d


def _pot_good_descriptor(rc: ReductionClass) -> FibreDescriptor:
    p, e, delta = rc.p, rc.e, rc.v_disc
    n0 = _residue_order_degree(p, e)
    fld = ff.make_field(p, n0)
    # u = p^(delta/12) = (p^(1/e))^s and tau(u)/u = zeta^s
    s = delta * e // 12
    zeta = ff.root_of_unity(fld, e)
    names = ["id"] + [f"tau{i}" if i > 1 else "tau" for i in range(1, e)]
    tw = {names[i]: CoordTwist(zeta ** (2 * s * i), zeta ** (3 * s * i)) for i in range(1, e)}

    def scaled(c, w):
        # reduction of c / u^w with u^w = p^(delta w / 12)
        if c == 0 or (delta * w) % 12 or val(c, p) * 12 != delta * w:
            return Fraction(0)
        return c / Fraction(p) ** (delta * w // 12)

    model = WeierstrassModel(fld, fld.zero, fld(residue(scaled(rc.A, 4), p)), fld(residue(scaled(rc.B, 6), p)))
    g = _single_vertex()
    ident = GraphAut.identity(g)
    elements = {"id": SemilinearElt("id", 0, True, ident)}
    for i in range(1, e):
        elements[names[i]] = SemilinearElt(names[i], 0, True, ident, {"v0": tw[names[i]]})
    elements["frob"] = SemilinearElt("frob", 1, False, ident)
    index = {name: i for i, name in enumerate(names)}
    comp = _table_for(list(elements), lambda a, b: names[(index[a] + index[b]) % e]
                      if a in index and b in index else None)
    comp.update(_unit_table(list(elements)))
    d = FibreDescriptor(p, n0, {"v0": Component("v0", 1, model)}, g, elements, "frob", comp, tame=True)
    require_valid(d)
    return d


def _gon_descriptor(p: int, n: int, frob_flip: bool, tau: bool) -> FibreDescriptor:
    g = ngon(n)
    ident = GraphAut.identity(g)
    refl = ngon_reflection(g, n)
    fld = ff.make_field(p, 1)
    comps = {v: Component(v, 0, ProjectiveLine(fld)) for v in g.J}
    elements = {"id": SemilinearElt("id", 0, True, ident)}
    if tau:
        elements["tau"] = SemilinearElt("tau", 0, True, refl)
    elements["frob"] = SemilinearElt("frob", 1, False, refl if frob_flip else ident)
    comp = _unit_table(list(elements))
    if tau:
        comp[("tau", "tau")] = "id"
    d = FibreDescriptor(p, 1, comps, g, elements, "frob", comp, tame=True)
    require_valid(d)
    return d


def analyse(p: int, coeffs) -> tuple[ReductionClass, FibreDescriptor]:
    rc = classify(minimal_data(WeierstrassCurve.from_coeffs(p, coeffs)))
    return rc, semistable_descriptor(rc)
