from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import det_one_minus_TA
from semistable.exactlin import (IntMatrix, IntPoly, LinearAlgebraError, kernel_basis,
                                 newton_char_poly, permutation_matrix, rank, restrict_action)


def M(rows, cols=None):
    return IntMatrix.from_rows(rows, cols=cols)


def test_kernel_of_column_difference():
    assert kernel_basis(M([[1], [-1]])).to_rows() == [[1, 1]]


def test_kernel_of_identity_is_empty():
    assert kernel_basis(IntMatrix.identity(2)).rows == 0


def test_kernel_of_rank_one_square():
    k = kernel_basis(M([[1, 1], [1, 1]]))
    assert k.rows == 1
    assert k.to_rows()[0] in ([1, -1], [-1, 1])


def test_kernel_is_saturated_for_scaled_relation():
    # 2x - 4y = 0 on Z^2: the primitive generator is (2, 1)
    k = kernel_basis(M([[2], [-4]]))
    assert k.to_rows() in ([[2, 1]], [[-2, -1]])


def test_restrict_identity():
    b = M([[1, -1, 0], [0, 1, -1]])
    assert restrict_action(IntMatrix.identity(3), b).is_identity()


def test_restrict_swap_on_difference_vector():
    b = M([[1, -1]])
    assert restrict_action(permutation_matrix([1, 0]), b).to_rows() == [[-1]]


def test_restrict_rotation_on_all_ones():
    b = M([[1, 1, 1]])
    assert restrict_action(permutation_matrix([1, 2, 0]), b).to_rows() == [[1]]


def test_restrict_rejects_non_invariant_lattice():
    with pytest.raises(LinearAlgebraError, match="action does not preserve lattice"):
        restrict_action(permutation_matrix([1, 0]), M([[1, 0]]))


def test_newton_small_cases():
    assert newton_char_poly([], 0).coeffs == (1,)
    assert newton_char_poly([5], 1).coeffs == (1, -5)
    assert newton_char_poly([0, 2], 2).coeffs == (1, 0, -1)


def test_newton_rejects_non_integral():
    with pytest.raises(LinearAlgebraError, match="non-integral characteristic polynomial"):
        newton_char_poly([1, 0], 2)


def test_newton_overdetermined_consistency():
    a = M([[0, 1], [-7, 3]])
    sums = [(a ** k).trace() for k in range(1, 5)]
    assert newton_char_poly(sums, 2) == newton_char_poly(sums[:2], 2)
    bad = sums[:2] + [sums[2] + 1]
    with pytest.raises(LinearAlgebraError, match="inconsistent"):
        newton_char_poly(bad, 2)


def test_intpoly_formatting_and_product():
    assert str(IntPoly((1, -3, 7))) == "1 - 3*T + 7*T^2"
    assert (IntPoly((1, -1)) * IntPoly((1, 1))).coeffs == (1, 0, -1)
    assert IntPoly((1, 2, 0, 0)).degree == 1


def test_inverse_and_negative_powers():
    a = M([[2, 1], [1, 1]])
    assert (a @ a.inverse()).is_identity()
    assert (a ** -2 @ a ** 2).is_identity()
    with pytest.raises(LinearAlgebraError):
        M([[2, 0], [0, 1]]).inverse()


def test_det_matches_cofactor():
    a = M([[2, -1, 3], [0, 4, 1], [5, 2, -2]])
    assert a.det() == 2 * (4 * -2 - 1 * 2) + 1 * (0 * -2 - 1 * 5) + 3 * (0 * 2 - 4 * 5)


small = st.integers(-3, 3)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return M([[draw(small) for _ in range(c)] for _ in range(r)], cols=c)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_kernel_rows_annihilate_and_count(m):
    k = kernel_basis(m)
    assert k.rows == m.rows - rank(m)
    for row in k.to_rows():
        assert all(sum(row[i] * m[i, j] for i in range(m.rows)) == 0 for j in range(m.cols))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_kernel_is_saturated(m):
    k = kernel_basis(m)
    if k.rows == 0:
        return
    # saturated iff the maximal minors have gcd 1
    g = 0
    for cols in combinations(range(k.cols), k.rows):
        g = gcd(g, M([[row[c] for c in cols] for row in k.to_rows()]).det())
    assert g == 1


@settings(max_examples=100, deadline=None)
@given(st.permutations(range(4)), st.permutations(range(4)))
def test_restrict_action_is_functorial(p1, p2):
    b = M([[1, 1, 1, 1]])
    ones = kernel_basis(M([[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]]))
    for basis in (b, ones):
        a, c = permutation_matrix(p1), permutation_matrix(p2)
        lhs = restrict_action(a @ c, basis)
        rhs = restrict_action(a, basis) @ restrict_action(c, basis)
        assert lhs == rhs


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n),
                                                    min_size=n, max_size=n)))
def test_newton_round_trip_property(rows):
    a = M(rows)
    sums = [(a ** k).trace() for k in range(1, a.rows + 1)]
    assert list(newton_char_poly(sums, a.rows).coeffs) == det_one_minus_TA(rows)


def test_newton_detects_rational_spectrum():
    # eigenvalues 1/2 and 2
    with pytest.raises(LinearAlgebraError, match="non-integral"):
        newton_char_poly([Fraction(5, 2), Fraction(17, 4)], 2)
