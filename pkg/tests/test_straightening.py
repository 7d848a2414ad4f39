import itertools

import pytest
import sympy
from hypothesis import given, strategies as st

from detideals.errors import EntryOutOfBounds, ZeroPolynomial
from detideals.exact_poly import EpsScalar, Poly, VarId
from detideals.straightening import (
    brute_force_membership, expand_bideterminant, generic_matrix, infer_shape, is_in_det_ideal, min_width,
    minor, straighten, symbolic_det, vanishes_below_rank, width_at_least,
)
from detideals.tableaux import Bitableau, Tableau

from conftest import polys, to_sympy, xmat


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_symbolic_det_matches_sympy(n):
    m = xmat(n)
    expected = sympy.Matrix([[to_sympy(p) for p in row] for row in m]).det()
    assert to_sympy(symbolic_det(m)) == sympy.expand(expected)


def test_minor_and_bideterminant():
    assert minor((1, 2), (1, 2)) == symbolic_det(xmat(2))
    b = Bitableau(Tableau.of([[1, 2], [1]]), Tableau.of([[1, 3], [2]]))
    assert expand_bideterminant(b) == minor((1, 2), (1, 3)) * minor((1,), (2,))


@given(polys(n=3, m=3, max_degree=4))
def test_straighten_round_trip(f):
    res = straighten(f, 3, 3)
    assert res.expand() == f
    assert res.is_integral()
    assert all(b.left.is_standard(3) and b.right.is_standard(3) for b in res.support())


@given(polys(n=2, m=3, max_degree=3))
def test_straighten_round_trip_rectangular(f):
    assert straighten(f, 2, 3).expand() == f


def test_straighten_keeps_eps_coefficients():
    d = symbolic_det(xmat(2))
    f = d * EpsScalar({-1: 1, 2: 3}) + Poly.var(VarId("x", (1, 1))) ** 2
    res = straighten(f, 2, 2)
    assert res.expand() == f


def test_det_straightens_to_one_term():
    res = straighten(symbolic_det(xmat(3)), 3, 3)
    assert len(res.terms) == 1
    b, c = res.terms[0]
    assert b.shape == (3,) and c == EpsScalar.const(1)


def test_classic_relation():
    # x12 x21 = x11 x22 - (12|12); x11 x22 is the standard (1,1) bitableau
    x = lambda i, j: Poly.var(VarId("x", (i, j)))
    res = straighten(x(1, 2) * x(2, 1), 2, 2)
    assert {(b.shape, c.coeff(0)) for b, c in res.terms} == {((2,), -1), ((1, 1), 1)}
    assert res.min_width() == 1


def test_terms_are_sorted_with_wider_shapes_first():
    f = symbolic_det(xmat(2)) * Poly.var(VarId("x", (1, 1))) + Poly.var(VarId("x", (1, 2))) ** 3
    shapes = [b.shape for b in straighten(f, 2, 2).support()]
    assert shapes == sorted(shapes, key=lambda s: tuple(-p for p in s))


def test_min_width_of_zero():
    with pytest.raises(ZeroPolynomial):
        min_width(Poly.zero(), 2, 2)


def test_entry_out_of_bounds():
    with pytest.raises(EntryOutOfBounds):
        straighten(Poly.var(VarId("x", (3, 1))), 2, 2)


def test_infer_shape():
    assert infer_shape(Poly.var(VarId("x", (2, 5)))) == (2, 5)


def _all_minors(n):
    for k in range(1, n + 1):
        for rows in itertools.combinations(range(1, n + 1), k):
            for cols in itertools.combinations(range(1, n + 1), k):
                yield k, minor(rows, cols)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_minor_membership(n, r):
    for k, mnr in _all_minors(n):
        assert is_in_det_ideal(mnr, r, n, n) == (k >= r)
        assert brute_force_membership(mnr, r, n, n) == (k >= r)


@given(polys(n=3, m=3, max_degree=3, max_terms=3), st.integers(1, 3), st.sampled_from([(1, 2), (2, 3), (1, 3)]))
def test_membership_agrees_with_brute_force(g, r, rows):
    f = g * minor(rows, (1, 3)) if r <= 2 else g * symbolic_det(xmat(3))
    f = f + (Poly.var(VarId("x", (2, 2))) if r == 1 else Poly.zero())
    for rr in (1, 2, 3):
        assert is_in_det_ideal(f, rr, 3, 3) == brute_force_membership(f, rr, 3, 3)


@given(polys(n=3, m=3, max_degree=3, max_terms=3))
def test_rank_test_agrees_with_width(f):
    if f.is_zero():
        return
    w = min_width(f, 3, 3)
    for r in (1, 2, 3):
        assert vanishes_below_rank(f, r, 3, 3) == (w >= r)


def test_width_at_least_switches_method():
    d = symbolic_det(xmat(2))
    assert width_at_least(d, 2, 2, 2) == (True, "straightening")
    assert width_at_least(d, 2, 2, 2, max_block=1) == (True, "rank")
    assert width_at_least(Poly.var(VarId("x", (1, 1))), 2, 2, 2, max_block=0) == (False, "rank")
    assert width_at_least(Poly.zero(), 2, 2, 2) == (True, "trivial")


def test_generic_matrix():
    assert generic_matrix(1, 2) == [[Poly.var(VarId("x", (1, 1))), Poly.var(VarId("x", (1, 2)))]]
