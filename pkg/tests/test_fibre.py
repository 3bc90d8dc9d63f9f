import pytest

import builders
from oracles import count_affine_naive, fixed_points_oracle
from semistable import ff
from semistable.dualgraph import DualGraph, GraphAut
from semistable.fibre import (Component, CoordTwist, FibreError, ProjectiveLine, SemilinearElt, TraceTable,
                              WeierstrassModel, count_fixed, count_points, lefschetz_trace, trace_on_h1,
                              trace_power_sums, twist_preserves, validate_descriptor, weil_bound_ok)


def comp(p, a2, a4, a6, n0=1):
    return builders.elliptic_component(p, a2, a4, a6, n0)


def test_projective_line_count():
    f = ff.make_field(5, 2)
    assert count_points(Component("c", 0, ProjectiveLine(f)), 1) == 26
    assert count_points(Component("c", 0, ProjectiveLine(f)), 2) == 626


def test_count_matches_naive_enumeration():
    c = comp(7, 0, 0, 1)
    n = count_points(c, 1)
    assert n == count_affine_naive(7, 0, 0, 0, 0, 1) + 1 == 12
    assert abs(n - 8) <= 2 * 2


def test_degree_two_identity_over_f3():
    c = comp(3, 0, 1, 0)
    n1, n2 = count_points(c, 1), count_points(c, 2)
    t = 3 + 1 - n1
    assert n2 == 9 + 1 - (t * t - 6)
    assert n2 == fixed_points_oracle(3, 2, 0, 1, 0, 1, 1, 2)


def test_singular_model_rejected():
    f = ff.make_field(7, 1)
    with pytest.raises(FibreError, match="singular"):
        WeierstrassModel(f, f(0), f(0), f(0))


def test_field_cap():
    with pytest.raises(FibreError, match="field too large"):
        count_points(comp(1009, 0, 1, 1), 2)


def test_order_three_twist_fixed_points_and_trace():
    for p in (7, 13, 19):
        c = comp(p, 0, 0, 1)
        z = ff.root_of_unity(c.model.field, 3)
        t = CoordTwist(z, c.model.field.one)
        assert count_fixed(c, t, 0) == 3
        assert lefschetz_trace(c, t, 0) == -1
        # all fixed points have x = 0 and y^2 = 1, so F_{p^2} holds them
        assert fixed_points_oracle(p, 2, 0, 0, 1, int(z.coeffs[0]), 1, 0) == 3


def test_involution_on_full_two_torsion():
    # y^2 = x^3 - x: the cubic splits over F_p
    c = comp(11, 0, -1, 0)
    t = CoordTwist(c.model.field.one, c.model.field(-1))
    assert count_fixed(c, t, 0) == 4
    assert lefschetz_trace(c, t, 0) == -2


@pytest.mark.parametrize("a2,a4,a6,c2,c3", [
    (0, 1, 1, 1, 4),   # y -> -y, irreducible-or-not cubic
    (0, 1, 0, 4, 2),   # order-4 automorphism of y^2 = x^3 + x (2^2 = -1 in F_5)
    (0, 2, 0, 4, 3),
    (1, 1, 1, 1, 4),
])
def test_geometric_fixed_points_against_extension_enumeration(a2, a4, a6, c2, c3):
    p = 5
    c = comp(p, a2, a4, a6)
    f = c.model.field
    t = CoordTwist(f(c2), f(c3))
    assert twist_preserves(c.model, t, 0)
    # every fixed point over the algebraic closure is defined over F_{5^6}
    assert count_fixed(c, t, 0) == fixed_points_oracle(p, 6, a2, a4, a6, c2, c3, 0)


@pytest.mark.parametrize("p,a2,a4,a6,c2,c3,n,k", [
    (7, 0, 0, 1, 2, 1, 1, 3),   # cube twist composed with Frobenius; returns after 3 steps
    (7, 0, 0, 1, 4, 1, 1, 3),
    (7, 0, 0, 1, 1, 6, 1, 2),   # quadratic twist
    (7, 0, 3, 1, 1, 6, 1, 2),
    (5, 0, 1, 0, 4, 2, 1, 4),
    (5, 0, 2, 0, 1, 4, 2, 4),
    (11, 0, 3, 5, 1, 10, 1, 2),
    (13, 0, 0, 2, 3, 1, 1, 3),
])
def test_twisted_frobenius_fixed_points(p, a2, a4, a6, c2, c3, n, k):
    c = comp(p, a2, a4, a6)
    f = c.model.field
    t = CoordTwist(f(c2), f(c3))
    assert twist_preserves(c.model, t, n)
    got = count_fixed(c, t, n)
    assert got == fixed_points_oracle(p, k, a2, a4, a6, c2, c3, n)
    assert weil_bound_ok(lefschetz_trace(c, t, n), 1, p, n)


def test_untwisted_frobenius_is_point_count():
    c = comp(11, 0, 2, 7)
    ident = CoordTwist.identity(c.model.field)
    assert count_fixed(c, ident, 1) == count_points(c, 1)
    assert lefschetz_trace(c, ident, 1) == 12 - count_points(c, 1)


def test_frobenius_power_recurrence_matches_enumeration():
    c = comp(7, 0, 1, 3)
    ident = CoordTwist.identity(c.model.field)
    for m in (2, 3):
        assert lefschetz_trace(c, ident, m) == 7 ** m + 1 - count_points(c, m)


def test_identity_trace_is_dimension_and_projective_line_zero():
    c = comp(7, 0, 1, 3)
    assert lefschetz_trace(c, CoordTwist.identity(c.model.field), 0) == 2
    f = ff.make_field(7, 1)
    g = DualGraph.build(["c"], {}, {})
    e = SemilinearElt("e", 1, False, GraphAut.identity(g))
    assert trace_on_h1(Component("c", 0, ProjectiveLine(f)), e) == 0


def test_identity_twist_without_frobenius_has_no_count():
    c = comp(7, 0, 1, 3)
    with pytest.raises(FibreError, match="identity element has no isolated fixed points"):
        count_fixed(c, CoordTwist.identity(c.model.field), 0)


def test_non_preserving_twist_rejected():
    c = comp(7, 0, 1, 3)
    f = c.model.field
    with pytest.raises(FibreError, match="does not preserve"):
        count_fixed(c, CoordTwist(f(2), f(1)), 0)


def test_power_sums_on_rational_component_vanish():
    d = builders.loop_swap(7)
    assert trace_power_sums(d, "frob", 4) == [0, 0, 0, 0]


def test_power_sums_of_swapped_pair():
    p, a4, a6 = 7, 1, 3
    d = builders.swapped_pair(p, a4, a6)
    t = p + 1 - count_points(d.components["v0"], 1)
    # block model: s = [[0, A], [A, 0]] with A the Frobenius companion matrix (trace t, det p)
    a = [[0, -p], [1, t]]

    def mul(x, y):
        return [[sum(x[i][k] * y[k][j] for k in range(len(y))) for j in range(len(y[0]))]
                for i in range(len(x))]

    z = [[0, 0], [0, 0]]
    s = [r0 + r1 for r0, r1 in zip(z, a)] + [r0 + r1 for r0, r1 in zip(a, z)]
    acc, expected = s, []
    for _ in range(4):
        expected.append(sum(acc[i][i] for i in range(4)))
        acc = mul(acc, s)
    assert trace_power_sums(d, "s", 4) == expected
    assert expected[0] == expected[2] == 0


def test_power_sums_of_frobenius_are_point_counts():
    d = builders.good(11, 0, 2, 7)
    sums = trace_power_sums(d, "frob", 2)
    c = d.components["v0"]
    assert sums == [11 ** m + 1 - count_points(c, m) for m in (1, 2)]


def test_trace_table_interchangeable_with_equation():
    from semistable.tate import l_factor
    d = builders.good(7, 0, 1, 3)
    sums = [int(x) for x in trace_power_sums(d, "frob", 2)]
    assert l_factor(builders.good_as_trace_table(7, sums)) == l_factor(d)


def test_validation_catches_problems():
    d = builders.loop_swap(5)
    assert validate_descriptor(d) == []
    bad = builders.loop_swap(5)
    els = dict(bad.elements)
    els["frob"] = SemilinearElt("frob", 0, False, els["frob"].graph_aut)
    from dataclasses import replace
    errs = validate_descriptor(replace(bad, elements=els))
    assert any("frob_power >= 1" in e for e in errs)
    broken = replace(bad, composition={k: v for k, v in bad.composition.items() if k != ("tau", "tau")})
    assert any("inertia set not a group" in e for e in validate_descriptor(broken))


def test_weil_bound_enforced_on_trace_tables():
    g = DualGraph.build(["v0"], {}, {})
    ident = GraphAut.identity(g)
    els = {"id": SemilinearElt("id", 0, True, ident), "frob": SemilinearElt("frob", 1, False, ident)}
    d = builders.FibreDescriptor(7, 1, {"v0": Component("v0", 1, TraceTable({"frob": (6,)}))}, g, els, "frob",
                                 builders.unit_table(els))
    assert any("Weil bound" in e for e in validate_descriptor(d))


@pytest.mark.parametrize("p,a2,a4,a6,c2,c3", [
    (7, 0, 0, 1, 2, 1), (7, 0, 0, 1, 4, 1), (7, 0, 0, 3, 2, 6), (7, 0, 3, 1, 1, 6), (13, 0, 0, 2, 3, 1),
    (13, 0, 5, 0, 12, 5), (5, 0, 1, 0, 4, 2), (11, 4, 3, 5, 1, 10),
])
def test_descent_agrees_with_enumeration(p, a2, a4, a6, c2, c3):
    from semistable.fibre import _fixed_by_descent, _fixed_by_enumeration
    c = comp(p, a2, a4, a6)
    f = c.model.field
    t = CoordTwist(f(c2), f(c3))
    assert twist_preserves(c.model, t, 1)
    assert _fixed_by_descent(c.model, t, 1) == _fixed_by_enumeration(c.model, t, 1)
