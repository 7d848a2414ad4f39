from fractions import Fraction
from math import comb, factorial

import pytest
import sympy
from hypothesis import given, strategies as st

from detideals.errors import InputError, ZeroPolynomial
from detideals.exact_poly import EpsScalar, Poly, VarId
from detideals.hasse import (
    deriv_space_dim, derivatives, dim_under_substitution, first_row_derivatives, hasse, span_dim,
)
from detideals.straightening import symbolic_det
from detideals.tableaux import Bitableau, Tableau

from conftest import polys, sym, to_sympy, xmat

X = lambda i, j: Poly.var(VarId("x", (i, j)))


@given(polys(n=2, m=2, max_degree=4), st.integers(0, 2), st.integers(0, 2))
def test_hasse_is_scaled_derivative(f, a, b):
    u, v = VarId("x", (1, 1)), VarId("x", (1, 2))
    expected = sympy.diff(to_sympy(f), sym(u), a, sym(v), b) / (factorial(a) * factorial(b))
    assert to_sympy(hasse(f, {u: a, v: b})) == sympy.expand(expected)


def test_hasse_small():
    x = VarId("x", (1, 1))
    assert hasse(Poly.var(x) ** 3, {x: 2}) == Poly.var(x) * 3
    with pytest.raises(InputError):
        hasse(Poly.var(x), {x: -1})


@pytest.mark.parametrize("r", [1, 2, 3])
def test_determinant_derivative_space(r):
    assert deriv_space_dim(symbolic_det(xmat(r))) == comb(2 * r, r)


def test_bounded_orders_of_det3():
    d = symbolic_det(xmat(3))
    # sum over i <= k of binom(3, i)^2
    assert [deriv_space_dim(d, k) for k in range(4)] == [1, 10, 19, 20]
    assert deriv_space_dim(symbolic_det(xmat(2)), 1) == 5


def test_errors():
    with pytest.raises(ZeroPolynomial):
        deriv_space_dim(Poly.zero())
    with pytest.raises(InputError):
        deriv_space_dim(X(1, 1), -1)


def test_span_dim_over_eps():
    a = X(1, 1) + X(1, 2) * EpsScalar.eps(1)
    b = X(1, 1) * EpsScalar.eps(1) + X(1, 2) * EpsScalar.eps(2)
    assert span_dim([a, b]) == 1
    assert span_dim([a, X(1, 1)]) == 2


def test_derivatives_include_f_and_constants():
    f = X(1, 1) * X(2, 2)
    ds = derivatives(f)
    assert f in ds and Poly.const(1) in ds
    assert len(ds) == 4


def test_dimension_under_substitution():
    f = X(1, 1) ** 2 * X(1, 2) + X(1, 2) ** 3
    vs = [VarId("x", (1, 1)), VarId("x", (1, 2))]
    res = dim_under_substitution(f, [[1, 2], [Fraction(1, 3), -1]], vs)
    assert res["invertible"] and res["ok"]
    assert all(row["original"] == row["transformed"] for row in res["orders"])
    res = dim_under_substitution(f, [[1, 1], [1, 1]], vs)
    assert not res["invertible"] and res["ok"]
    assert any(row["transformed"] < row["original"] for row in res["orders"])


@pytest.mark.parametrize("left,right", [([[1, 2]], [[1, 2]]), ([[1, 2, 3], [1]], [[1, 2, 3], [2]])])
def test_first_row_derivatives_are_independent(left, right):
    b = Bitableau(Tableau.of(left), Tableau.of(right))
    ds = first_row_derivatives(b)
    w = len(left[0])
    assert len(ds) == comb(2 * w, w)
    assert all(not p.is_zero() for _, _, p in ds)
    assert span_dim([p for _, _, p in ds]) == comb(2 * w, w)
