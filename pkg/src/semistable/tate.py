"""Graded pieces of H^1, element traces, inertia invariants, L-factor and conductor.

Everything is reported on H^1_et of the curve.  The graph part contributes
``H^1(Y, Z) (x) Sp_2``: an element with Frobenius power ``n`` has trace
``Tr(H^1(Y)) * (1 + p^n)`` there, while inertia invariants and the L-factor
only see the weight-0 copy ``H^1(Y, Z)`` (the weight-2 copy never lifts to
invariants because the monodromy pairing of a Jacobian is nondegenerate).
The abelian part is the sum of H^1 of the normalised components.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dualgraph import action_on_h1, coaction, h1_lattice
from .exactlin import IntMatrix, IntPoly, hstack, kernel_basis, newton_char_poly, restrict_action
from .fibre import FibreDescriptor, FibreError, abelian_word_trace, inertia_group_errors, require_valid


@dataclass(frozen=True)
class GradedPieces:
    toric_rank: int
    abelian_rank: int
    h1_rank: int
    h1_action: dict[str, IntMatrix]
    coh_action: dict[str, IntMatrix]
    cyclotomic: dict[str, int]

    @property
    def total_rank(self) -> int:
        return self.toric_rank + self.abelian_rank + self.h1_rank


@dataclass(frozen=True)
class InertiaInvariants:
    weight0_dim: int
    abelian_dim: int
    weight0_frobenius: IntMatrix  # designated Frobenius on the fixed sublattice, column convention
    abelian_power_sums: tuple[Fraction, ...]


@dataclass(frozen=True)
class LocalLFactor:
    poly: IntPoly
    invariant_dims: tuple[int, int]


def graded_ranks(d: FibreDescriptor) -> tuple[int, int, int]:
    require_valid(d)
    h1 = h1_lattice(d.graph).rank
    ab = 2 * sum(c.genus for c in d.components.values())
    return h1, ab, h1


def graded_pieces(d: FibreDescriptor) -> GradedPieces:
    toric, ab, h1 = graded_ranks(d)
    lattice = h1_lattice(d.graph)
    h1_action, coh_action, cyc = {}, {}, {}
    for eid, e in d.elements.items():
        m = action_on_h1(d.graph, e.graph_aut, lattice)
        h1_action[eid] = m
        coh_action[eid] = coaction(m)
        cyc[eid] = d.p ** e.frob_power
    return GradedPieces(toric, ab, h1, h1_action, coh_action, cyc)


def element_trace(d: FibreDescriptor, eid: str, pieces: GradedPieces | None = None) -> int:
    """Trace on H^1 of the curve: ``Tr(H^1(Y)) (1 + chi_cyc) + Tr(abelian part)``."""
    pieces = pieces or graded_pieces(d)
    e = d.element(eid)
    graph_part = pieces.coh_action[eid].trace() * (1 + d.p ** e.frob_power)
    return graph_part + abelian_word_trace(d, [eid])


def _fixed_sublattice(mats: list[IntMatrix], n: int) -> IntMatrix:
    """Rows ``v`` with ``M v = v`` for all ``M`` (column vectors written as rows)."""
    if not mats:
        return IntMatrix.identity(n)
    ident = IntMatrix.identity(n)
    return kernel_basis(hstack([(m - ident).T for m in mats], rows=n))


def inertia_invariants(d: FibreDescriptor, extra: int = 0,
                       pieces: GradedPieces | None = None) -> InertiaInvariants:
    """Invariant dimensions and Frobenius data on the inertia invariants.

    ``extra`` requests that many additional abelian power sums, used to
    over-determine the Newton reconstruction.
    """
    require_valid(d)
    errs = inertia_group_errors(d)
    if errs:
        raise FibreError(errs[0])
    pieces = pieces or graded_pieces(d)
    inertia = d.inertia
    order = len(inertia)
    n = pieces.h1_rank
    fixed = _fixed_sublattice([pieces.coh_action[s] for s in inertia], n)
    frob = pieces.coh_action[d.frobenius]
    # B F^T = R B  <=>  F acts on the fixed lattice by R^T in column convention
    frob_fixed = restrict_action(frob.T, fixed).T if fixed.rows else IntMatrix.identity(0)
    dim_ab = Fraction(sum(abelian_word_trace(d, [s]) for s in inertia), order)
    if dim_ab.denominator != 1 or dim_ab < 0:
        raise FibreError("non-integral invariant dimension")
    dim_ab = int(dim_ab)
    sums = []
    for m in range(1, dim_ab + extra + 1):
        total = sum(abelian_word_trace(d, [d.frobenius] * m + [s]) for s in inertia)
        sums.append(Fraction(total, order))
    return InertiaInvariants(fixed.rows, dim_ab, frob_fixed, tuple(sums))


def _char_poly(m: IntMatrix) -> IntPoly:
    """``det(1 - T m)`` through Newton's identities on traces of powers."""
    n = m.rows
    return newton_char_poly([(m ** k).trace() for k in range(1, n + 1)], n)


def l_factor(d: FibreDescriptor, extra: int = 0, inv: InertiaInvariants | None = None) -> LocalLFactor:
    """``det(1 - Frob T)`` on the inertia invariants of H^1."""
    inv = inv or inertia_invariants(d, extra=extra)
    weight0 = _char_poly(inv.weight0_frobenius)
    abelian = newton_char_poly(list(inv.abelian_power_sums), inv.abelian_dim)
    poly = weight0 * abelian
    return LocalLFactor(poly, (inv.weight0_dim, inv.abelian_dim))


def conductor_exponent(d: FibreDescriptor, inv: InertiaInvariants | None = None) -> int:
    """Tame conductor: total dimension minus the dimension of the inertia invariants."""
    if not d.tame:
        raise FibreError("descriptor not flagged tame")
    toric, ab, h1 = graded_ranks(d)
    inv = inv or inertia_invariants(d)
    return (toric + ab + h1) - (inv.weight0_dim + inv.abelian_dim)


def duality_check(d: FibreDescriptor, pieces: GradedPieces | None = None) -> list[str]:
    """Elements whose H^1(Y) action is not the inverse transpose of their H_1(Y) action."""
    pieces = pieces or graded_pieces(d)
    bad = []
    for eid in d.elements:
        h1, coh = pieces.h1_action[eid], pieces.coh_action[eid]
        if not (coh.T @ h1).is_identity():
            bad.append(f"element {eid}: H^1 action is not contragredient to the H_1 action")
    return bad
