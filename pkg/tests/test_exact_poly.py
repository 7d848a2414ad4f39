from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from detideals.errors import BudgetExceeded, InputError, ZeroPolynomial
from detideals.exact_poly import (
    EpsScalar, Poly, VarId, parse_poly, parse_var, poly_sum, rat, rat_str,
)

from conftest import EPS, polys, to_sympy

x11, x12, x21, x22 = (Poly.var(VarId("x", ij)) for ij in [(1, 1), (1, 2), (2, 1), (2, 2)])


@given(polys(), polys())
def test_ring_operations_match_sympy(f, g):
    assert to_sympy(f + g) == to_sympy(f) + to_sympy(g)
    assert to_sympy(f * g).expand() == (to_sympy(f) * to_sympy(g)).expand()
    assert to_sympy(f - g) == (to_sympy(f) - to_sympy(g)).expand()


@given(polys(max_degree=2, max_terms=3), st.integers(0, 4))
def test_power(f, k):
    assert to_sympy(f ** k) == (to_sympy(f) ** k).expand()


@given(polys())
def test_json_round_trip(f):
    assert Poly.from_json(f.dumps()) == f
    assert Poly.from_json(f.to_json()) == f


def test_dumps_is_canonical():
    a = x11 * x22 - x12 * x21
    b = -x12 * x21 + x22 * x11
    assert a.dumps() == b.dumps()


def test_rat_normalizes():
    assert rat("6/3") == 2 and type(rat("6/3")) is int
    assert rat(Fraction(1, 2)) == Fraction(1, 2)
    assert rat_str(3) == "3/1"
    with pytest.raises(InputError):
        rat("x")
    with pytest.raises(InputError):
        rat(True)


def test_parse_var():
    assert parse_var("x[1,2]") == VarId("x", (1, 2))
    assert parse_var("aux[3]") == VarId("aux", (3,))
    with pytest.raises(InputError):
        parse_var("q[1]")
    with pytest.raises(InputError):
        parse_var("x[1,")


def test_parse_poly_expression():
    f = parse_poly("x[1,1]*x[2,2] - x[1,2]*x[2,1] + 3/2*eps**-1*y[1] - (2*lam[1,2])**2")
    expected = x11 * x22 - x12 * x21 + Poly.var(VarId("y", (1,))) * Fraction(3, 2) / EpsScalar.eps(1) \
        - Poly.var(VarId("lam", (1, 2))) ** 2 * 4
    assert f == expected


@pytest.mark.parametrize("bad", ["x[1,1]**y[1]", "foo", "x[1,1]/x[1,2]", "x[1,1] +", "open('f')", "x[1,1]**-1"])
def test_parse_poly_rejects(bad):
    with pytest.raises(InputError):
        parse_poly(bad)


def test_from_json_rejects_garbage():
    with pytest.raises(InputError):
        Poly.from_json("{")
    with pytest.raises(InputError):
        Poly.from_json({"terms": [{"coef": 1, "mono": {"zz[1]": 1}}]})


def test_eps_slicing():
    f = x11 * EpsScalar({-1: 2, 0: 1}) + x22 * EpsScalar.eps(2)
    assert f.eps_order() == -1
    assert f.eps_top() == 2
    assert f.eps_slice(-1) == x11 * 2
    assert f.eps_slice(2) == x22
    assert f.eps_slice(1).is_zero()
    assert to_sympy(f) == ((2 / EPS + 1) * to_sympy(x11) + EPS ** 2 * to_sympy(x22)).expand()


def test_eps_order_of_zero():
    with pytest.raises(ZeroPolynomial):
        Poly.zero().eps_order()


@given(polys(n=2, m=2, max_degree=3), st.integers(-3, 3))
def test_truncated_substitution_is_exact_below_cutoff(f, cutoff):
    forms = {
        VarId("x", (1, 1)): x11 * EpsScalar({-1: 1, 1: 2}) + x12,
        VarId("x", (1, 2)): x21 + x22 * EpsScalar.eps(1),
    }
    full = f.substitute(forms)
    cut = f.substitute(forms, eps_cutoff=cutoff)
    assert cut == full.eps_truncate(cutoff)


def test_substitution_budget():
    f = (x11 + x12 + x21 + x22) ** 2
    with pytest.raises(BudgetExceeded):
        f.substitute({VarId("x", (1, 1)): x11 + x12 + x21}, budget=3)


def test_evaluate():
    f = x11 * x22 - x12 * x21 + Poly.eps(1)
    point = {VarId("x", ij): v for ij, v in zip([(1, 1), (1, 2), (2, 1), (2, 2)], [1, 2, 3, 4])}
    assert f.evaluate(point, eps=Fraction(1, 2)) == Fraction(-3, 2)
    assert f.evaluate(point) == EpsScalar({0: -2, 1: 1})


def test_eps_scalar_exact_division():
    a = EpsScalar({0: 1, 1: 2, 2: 1})
    b = EpsScalar({0: 1, 1: 1})
    assert a.exact_div(b) == b
    with pytest.raises(ArithmeticError):
        EpsScalar({0: 1, 1: 1}).exact_div(EpsScalar({0: 1, 2: 1}))


def test_poly_sum_and_variables():
    f = poly_sum([x11, x22, -x11])
    assert f == x22
    assert f.variables() == [VarId("x", (2, 2))]
    assert (x11 * x22).degree() == 2
    assert (x11 ** 3).degree_in(VarId("x", (1, 1))) == 3
