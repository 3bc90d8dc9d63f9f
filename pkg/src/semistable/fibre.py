"""Components of a semistable special fibre and the semilinear element actions.

An element acts on the residue field as ``x -> x^(p^n)`` (``n`` is its
``frob_power``).  On a genus-one component ``y^2 = x^3 + a2 x^2 + a4 x + a6``
it acts through a :class:`CoordTwist` ``(x, y) -> (c2 x^(p^n), c3 y^(p^n))``,
which is the action of a residue-field morphism, so its trace on H^1 comes
from a fixed-point count and the Lefschetz formula
``Tr = 1 + deg - #fixed`` with ``deg = p^n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence, Union

import numpy as np

from . import ff
from .dualgraph import DualGraph, GraphAut, validate, validate_aut
from .ff import FqElem, FqField


class FibreError(ValueError):
    pass


# -- component models ------------------------------------------------------------

@dataclass(frozen=True)
class ProjectiveLine:
    field: FqField
    kind = "proj_line"


@dataclass(frozen=True)
class WeierstrassModel:
    """``y^2 = x^3 + a2 x^2 + a4 x + a6`` over ``field``."""

    field: FqField
    a2: FqElem
    a4: FqElem
    a6: FqElem
    kind = "weierstrass"

    def __post_init__(self):
        if self.discriminant().is_zero():
            raise FibreError("singular Weierstrass model")

    def discriminant(self) -> FqElem:
        a2, a4, a6 = self.a2, self.a4, self.a6
        return (a2 * a2 * a4 * a4 - 4 * a4 * a4 * a4 - 4 * a2 * a2 * a2 * a6
                + 18 * a2 * a4 * a6 - 27 * a6 * a6)

    def cubic(self) -> tuple[FqElem, ...]:
        return (self.a6, self.a4, self.a2, self.field.one)


@dataclass(frozen=True)
class TraceTable:
    """Traces on H^1 supplied by hand: ``traces[elem][m-1] = Tr(elem^m)``."""

    traces: Mapping[str, tuple[int, ...]]
    kind = "trace_table"


Model = Union[ProjectiveLine, WeierstrassModel, TraceTable]


@dataclass(frozen=True)
class Component:
    id: str
    genus: int
    model: Model

    def __post_init__(self):
        if self.genus < 0:
            raise FibreError(f"component {self.id}: negative genus")
        expected = {"proj_line": 0, "weierstrass": 1}.get(self.model.kind)
        if expected is not None and expected != self.genus:
            raise FibreError(f"component {self.id}: genus {self.genus} inconsistent with {self.model.kind}")


@dataclass(frozen=True)
class CoordTwist:
    c2: FqElem
    c3: FqElem

    @classmethod
    def identity(cls, field: FqField) -> CoordTwist:
        return cls(field.one, field.one)

    def is_identity(self) -> bool:
        return self.c2 == self.c2.field.one and self.c3 == self.c3.field.one

    def then(self, later: CoordTwist, later_power: int) -> CoordTwist:
        """Twist of ``later o self`` where ``later`` carries Frobenius power ``later_power``."""
        f = self.c2.field
        return CoordTwist(later.c2 * ff.frobenius(f, self.c2, later_power),
                          later.c3 * ff.frobenius(f, self.c3, later_power))


def twist_preserves(model: WeierstrassModel, t: CoordTwist, n: int) -> bool:
    """Whether ``(x, y) -> (c2 x^(p^n), c3 y^(p^n))`` maps the model to itself."""
    f = model.field
    s = t.c3 * t.c3
    fr = lambda a: ff.frobenius(f, a, n)  # noqa: E731
    return (s == t.c2 ** 3 and s * fr(model.a2) == model.a2 * t.c2 ** 2
            and s * fr(model.a4) == model.a4 * t.c2 and s * fr(model.a6) == model.a6)


# -- counting -----------------------------------------------------------------------

def _vector_cubic(t: ff.FieldTables, model: WeierstrassModel, big: FqField, xs: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(xs)
    for c in reversed(model.cubic()):
        acc = t.add(t.mul(acc, xs), np.full_like(xs, ff.embed(c, big).index))
    return acc


def _field_of(c: Component) -> FqField:
    if isinstance(c.model, TraceTable):
        raise FibreError(f"component {c.id} has no equation (trace table)")
    return c.model.field


def count_points(c: Component, m: int = 1) -> int:
    """Points over the degree-``m`` extension of the component's field, infinity included."""
    base = _field_of(c)
    if m < 1:
        raise FibreError("extension degree must be positive")
    q = base.q ** m
    if isinstance(c.model, ProjectiveLine):
        return q + 1
    if q > ff.ENUMERATION_LIMIT:
        raise FibreError("field too large for enumeration")
    big = ff.make_field(base.p, base.n * m)
    t = ff.tables(big)
    xs = np.arange(big.q, dtype=np.int64)
    chi = t.quadratic_character(_vector_cubic(t, c.model, big, xs))
    return int(big.q + 1 + chi.sum())


def twist_return_exponent(t: CoordTwist, n: int) -> int:
    """Least ``r >= 1`` such that the ``r``-fold composite of the twisted map is untwisted."""
    f = t.c2.field
    ident = CoordTwist.identity(f)
    acc = t
    for r in range(1, (f.q - 1) * f.n + 1):
        if acc == ident:
            return r
        acc = acc.then(t, n)
    raise FibreError("twist has no finite return exponent")  # unreachable


def _fixed_geometric(model: WeierstrassModel, t: CoordTwist) -> int:
    # n = 0: the fixed locus is cut out by x = 0 (if c2 != 1) and/or y = 0 (if c3 != 1);
    # counts are over the algebraic closure.
    one = model.field.one
    mx, my = t.c2 != one, t.c3 != one
    if mx and my:
        return 1 + int(model.a6.is_zero())
    if mx:
        return 1 + (1 if model.a6.is_zero() else 2)
    return 1 + 3  # y = 0: the three distinct roots of a separable cubic


def count_fixed(c: Component, t: CoordTwist, n: int) -> int:
    """Fixed points over the algebraic closure of ``(x, y) -> (c2 x^(p^n), c3 y^(p^n))``.

    For ``n >= 1`` the count descends to a point count of a twisted model over
    F_{p^n} when the component's field lies in it.  Otherwise all fixed points
    lie in F_{p^(n r)} with ``r`` the return exponent of the twist; that field
    (joined with the component's field) is enumerated and ``t(P) == P`` tested
    directly.  For ``n == 0`` the twist is a
    geometric automorphism of order prime to ``p`` and its fixed locus is read
    off from the equations.  The point at infinity is always fixed.
    """
    model = c.model
    if not isinstance(model, WeierstrassModel):
        raise FibreError(f"component {c.id}: fixed points need a Weierstrass model")
    if not twist_preserves(model, t, n):
        raise FibreError(f"component {c.id}: twist does not preserve the model")
    base = model.field
    if n == 0:
        if t.is_identity():
            raise FibreError("identity element has no isolated fixed points")
        return _fixed_geometric(model, t)
    if n % base.n == 0 and base.p ** n <= ff.ENUMERATION_LIMIT and not t.c2.is_zero():
        return _fixed_by_descent(model, t, n)
    return _fixed_by_enumeration(model, t, n)


def _fixed_by_descent(model: WeierstrassModel, t: CoordTwist, n: int) -> int:
    """Fixed points of ``(x, y) -> (l^2 x^q, l^3 y^q)`` with ``l = c3 / c2`` in F_q.

    With ``d^(q-1) = 1/l`` the substitution ``x = d^2 X, y = d^3 Y`` identifies
    the fixed points with the F_q-points of ``Y^2 = X^3 + a2 d^-2 X^2 + a4 d^-4 X
    + a6 d^-6``.  Writing ``1/l = g^(k (q-1) / r)`` for a generator ``g`` and
    ``r`` the order of ``l``, ``d`` is an ``r``-th root of ``g^k`` and every
    power ``d^-2i`` attached to a nonzero coefficient lies in F_q.
    """
    small = ff.make_field(model.field.p, n)
    lam = ff.embed(t.c3, small) / ff.embed(t.c2, small)
    r = lam.multiplicative_order()
    g = ff.primitive_element(small)
    step = g ** ((small.q - 1) // r)
    target, k, acc = lam.inverse(), 0, small.one
    while acc != target:
        acc, k = acc * step, k + 1
    coeffs = []
    for i, a in ((1, model.a2), (2, model.a4), (3, model.a6)):
        a = ff.embed(a, small)
        # a nonzero coefficient forces r | 2i, since the twist preserves the model
        coeffs.append(a * g ** (-(2 * i * k // r) % (small.q - 1)) if not a.is_zero() else a)
    twisted = WeierstrassModel(small, *coeffs)
    return count_points(Component("twisted", 1, twisted), 1)


def _fixed_by_enumeration(model: WeierstrassModel, t: CoordTwist, n: int) -> int:
    """Enumerate the field holding every fixed point and test ``t(P) == P``."""
    base = model.field
    r = twist_return_exponent(t, n)
    deg = n * r * base.n // gcd(n * r, base.n)
    if deg > ff.MAX_DEGREE or base.p**deg > ff.ENUMERATION_LIMIT:
        raise FibreError("search field too large")
    big = ff.make_field(base.p, deg)
    tb = ff.tables(big)
    c2 = ff.embed(t.c2, big)
    c3 = ff.embed(t.c3, big)
    xs = np.arange(big.q, dtype=np.int64)
    moved = tb.mul(np.full_like(xs, c2.index), tb.frobenius(xs, n))
    candidates = xs[moved == xs]
    fx = _vector_cubic(tb, model, big, candidates)
    count = 1
    for x, v in zip(candidates.tolist(), fx.tolist()):
        for y in tb.sqrt_index(v):
            ye = big.from_index(y)
            if c3 * ff.frobenius(big, ye, n) == ye:
                count += 1
    return count


def lefschetz_trace(c: Component, t: CoordTwist, n: int) -> int:
    """Trace on H^1 of the component of the map twisted by ``t`` with Frobenius power ``n``."""
    if isinstance(c.model, ProjectiveLine):
        return 0
    if n == 0 and t.is_identity():
        return 2 * c.genus
    base = c.model.field
    if t.is_identity() and n > base.n and n % base.n == 0:
        # untwisted power of the q-Frobenius: s_k = a s_{k-1} - q s_{k-2}
        q, a = base.q, lefschetz_trace(c, t, base.n)
        prev, cur = 2, a
        for _ in range(n // base.n - 1):
            prev, cur = cur, a * cur - q * prev
        return cur
    deg = base.p ** n if n else 1
    return 1 + deg - count_fixed(c, t, n)


def weil_bound_ok(trace: int, genus: int, p: int, n: int) -> bool:
    """``|trace| <= 2 g sqrt(p^n)`` in integer arithmetic."""
    return trace * trace <= 4 * genus * genus * p**n


# -- elements and descriptors ------------------------------------------------------------

@dataclass(frozen=True)
class SemilinearElt:
    id: str
    frob_power: int
    inertial: bool
    graph_aut: GraphAut
    twists: Mapping[str, CoordTwist] = field(default_factory=dict)

    def twist_on(self, comp: str, fld: FqField) -> CoordTwist:
        return self.twists.get(comp) or CoordTwist.identity(fld)


def trace_on_h1(c: Component, e: SemilinearElt) -> int:
    """Trace of ``e`` on H^1 of a component it fixes."""
    if e.graph_aut.piJ.get(c.id) != c.id:
        raise FibreError(f"element {e.id} does not fix component {c.id}")
    if isinstance(c.model, TraceTable):
        row = c.model.traces.get(e.id)
        if not row:
            raise FibreError(f"trace table of {c.id} has no entry for {e.id}")
        return row[0]
    if isinstance(c.model, ProjectiveLine):
        return 0
    return lefschetz_trace(c, e.twist_on(c.id, c.model.field), e.frob_power)


@dataclass(frozen=True)
class FibreDescriptor:
    p: int
    n0: int
    components: Mapping[str, Component]
    graph: DualGraph
    elements: Mapping[str, SemilinearElt]
    frobenius: str
    composition: Mapping[tuple[str, str], str]
    tame: bool = False

    @property
    def field(self) -> FqField:
        return ff.make_field(self.p, self.n0)

    @property
    def inertia(self) -> tuple[str, ...]:
        return tuple(k for k, e in self.elements.items() if e.inertial)

    def element(self, eid: str) -> SemilinearElt:
        try:
            return self.elements[eid]
        except KeyError:
            raise FibreError(f"unknown element {eid}") from None

    def product(self, a: str, b: str) -> str | None:
        return self.composition.get((a, b))

    def resolve(self, word: Sequence[str]) -> str | None:
        """Name of the composite of ``word`` (rightmost applied first) via the table."""
        if not word:
            return None
        cur = word[-1]
        for eid in reversed(word[:-1]):
            cur = self.product(eid, cur)
            if cur is None:
                return None
        return cur

    def word_aut(self, word: Sequence[str]) -> GraphAut:
        aut = GraphAut.identity(self.graph)
        for eid in word:
            aut = aut.compose(self.element(eid).graph_aut)
        return aut

    def word_frob_power(self, word: Sequence[str]) -> int:
        return sum(self.element(e).frob_power for e in word)


def validate_descriptor(d: FibreDescriptor) -> list[str]:
    """All violated constraints of a descriptor (empty when it is consistent)."""
    errors = [f"graph: {m}" for m in validate(d.graph)]
    if set(d.graph.J) != set(d.components):
        errors.append("graph vertices do not match component ids")
    try:
        base = d.field
    except ff.FieldError as exc:
        return errors + [f"residue field: {exc}"]
    for c in d.components.values():
        m = c.model
        if isinstance(m, (WeierstrassModel, ProjectiveLine)) and m.field != base:
            errors.append(f"component {c.id}: model not over the residue field")
        if isinstance(m, TraceTable):
            for eid, row in m.traces.items():
                if eid not in d.elements:
                    errors.append(f"component {c.id}: trace table names unknown element {eid}")
                    continue
                n = d.elements[eid].frob_power
                for k, tr in enumerate(row, start=1):
                    if not weil_bound_ok(tr, c.genus, d.p, n * k):
                        errors.append(f"component {c.id}: trace {tr} of {eid}^{k} violates the Weil bound")
    for e in d.elements.values():
        if e.frob_power < 0:
            errors.append(f"element {e.id}: negative frob_power")
        if e.inertial and e.frob_power != 0:
            errors.append(f"element {e.id}: inertial elements must have frob_power 0")
        aut_errs = validate_aut(d.graph, e.graph_aut)
        errors += [f"element {e.id}: {m}" for m in aut_errs]
        if aut_errs:
            continue
        for cid, tw in e.twists.items():
            comp = d.components.get(cid)
            if comp is None:
                errors.append(f"element {e.id}: twist for unknown component {cid}")
            elif e.graph_aut.piJ[cid] != cid:
                errors.append(f"element {e.id}: twist given for component {cid} it does not fix")
            elif not isinstance(comp.model, WeierstrassModel):
                errors.append(f"element {e.id}: twist given for non-Weierstrass component {cid}")
            elif not twist_preserves(comp.model, tw, e.frob_power):
                errors.append(f"element {e.id}: twist does not preserve component {cid}")
    fr = d.elements.get(d.frobenius)
    if fr is None:
        errors.append(f"designated Frobenius {d.frobenius} is not an element")
    elif fr.frob_power < 1 or fr.inertial:
        errors.append("designated Frobenius must be non-inertial with frob_power >= 1")
    for (a, b), c in d.composition.items():
        if not {a, b, c} <= set(d.elements):
            errors.append(f"composition {a}*{b}={c} names unknown elements")
            continue
        ea, eb, ec = d.elements[a], d.elements[b], d.elements[c]
        if ea.frob_power + eb.frob_power != ec.frob_power:
            errors.append(f"composition {a}*{b}={c} is not additive in frob_power")
        try:
            if ea.graph_aut.compose(eb.graph_aut) != ec.graph_aut:
                errors.append(f"composition {a}*{b}={c} disagrees with the graph action")
        except KeyError:
            continue
        for cid, comp in d.components.items():
            if not isinstance(comp.model, WeierstrassModel):
                continue
            if ea.graph_aut.piJ.get(cid) == cid and eb.graph_aut.piJ.get(cid) == cid:
                fld = comp.model.field
                composed = eb.twist_on(cid, fld).then(ea.twist_on(cid, fld), ea.frob_power)
                if composed != ec.twist_on(cid, fld):
                    errors.append(f"composition {a}*{b}={c} disagrees with the twist on {cid}")
    errors += inertia_group_errors(d)
    return errors


def inertia_group_errors(d: FibreDescriptor) -> list[str]:
    inertia = d.inertia
    if not inertia:
        return ["inertia set not a group: it is empty"]
    members = set(inertia)
    for a in inertia:
        for b in inertia:
            c = d.product(a, b)
            if c is None or c not in members:
                return [f"inertia set not a group: {a}*{b} missing or outside inertia"]
    ident = [x for x in inertia if all(d.product(x, a) == a == d.product(a, x) for a in inertia)]
    if not ident:
        return ["inertia set not a group: no identity"]
    for a in inertia:
        if not any(d.product(a, b) == ident[0] for b in inertia):
            return [f"inertia set not a group: {a} has no inverse"]
    return []


def require_valid(d: FibreDescriptor):
    errs = validate_descriptor(d)
    if errs:
        raise FibreError("; ".join(errs))


# -- traces of words -------------------------------------------------------------------------

def _intrinsic_twist(d: FibreDescriptor, word: Sequence[str], cid: str) -> CoordTwist | None:
    fld = d.field
    acc = CoordTwist.identity(fld)
    for eid in reversed(word):
        e = d.element(eid)
        if e.graph_aut.piJ[cid] != cid:
            return None
        acc = acc.then(e.twist_on(cid, fld), e.frob_power)
    return acc


def _is_trivial(e: SemilinearElt) -> bool:
    return e.frob_power == 0 and e.graph_aut.is_identity() and all(t.is_identity() for t in e.twists.values())


def word_trace_on_component(d: FibreDescriptor, word: Sequence[str], comp: Component) -> int:
    """Trace on H^1(comp) of the composite of ``word``; the composite must fix ``comp``."""
    model = comp.model
    if isinstance(model, ProjectiveLine):
        return 0
    if isinstance(model, TraceTable):
        word = [e for e in word if not _is_trivial(d.element(e))]
        if not word:
            return 2 * comp.genus
        if len(set(word)) == 1:
            row = model.traces.get(word[0], ())
            if len(row) >= len(word):
                return row[len(word) - 1]
        name = d.resolve(word)
        if name is not None and model.traces.get(name):
            return model.traces[name][0]
        raise FibreError(f"trace table of {comp.id} cannot resolve {'*'.join(word)}")
    tw = _intrinsic_twist(d, word, comp.id)
    if tw is None:
        name = d.resolve(word)
        if name is None:
            raise FibreError(f"composite {'*'.join(word)} not resolvable through the composition table")
        tw = d.element(name).twist_on(comp.id, model.field)
    return lefschetz_trace(comp, tw, d.word_frob_power(word))


def abelian_word_trace(d: FibreDescriptor, word: Sequence[str]) -> int:
    """Trace of a composite on the abelian part: only components it fixes contribute."""
    aut = d.word_aut(word)
    total = 0
    for cid in d.graph.J:
        if aut.piJ[cid] == cid:
            total += word_trace_on_component(d, word, d.components[cid])
    return total


def trace_power_sums(d: FibreDescriptor, e: str, r: int) -> list[Fraction]:
    """Traces of ``e, e^2, ..., e^r`` on the sum of H^1 of the components."""
    d.element(e)
    return [Fraction(abelian_word_trace(d, [e] * m)) for m in range(1, r + 1)]
