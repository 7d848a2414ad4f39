import itertools

import pytest
import sympy
from hypothesis import given, strategies as st

from detideals import linalg
from detideals.abp import eval_abp, path_abp
from detideals.errors import EntryOutOfBounds, NotInIdeal, NotSkew, OddOrder
from detideals.exact_poly import Poly, VarId
from detideals.pfaffian import (
    SkewContext, brute_force_pfaff_membership, is_in_pfaff_ideal, k_monomial, pfaff_compose, pfaff_reduce,
    pfaff_straighten, pfaffian, pfaffian_abp, skew_var, sub_pfaffian, subpfaff_embed,
)
from detideals.straightening import symbolic_det

from conftest import to_sympy

X = lambda i, j: Poly.var(skew_var(i, j))
y = lambda *i: Poly.var(VarId("y", i))


@pytest.mark.parametrize("size", [2, 4, 6])
def test_pfaffian_squared_is_determinant(size):
    mat = SkewContext(size).matrix()
    assert pfaffian(mat) ** 2 == symbolic_det(mat)


def test_pfaffian_4_formula():
    assert pfaffian(SkewContext(4).matrix()) == X(1, 2) * X(3, 4) - X(1, 3) * X(2, 4) + X(1, 4) * X(2, 3)


skew_entries = st.fractions(min_value=-5, max_value=5, max_denominator=3)


@given(st.sampled_from([2, 4, 6]).flatmap(
    lambda n: st.tuples(st.lists(skew_entries, min_size=n * n, max_size=n * n),
                        st.lists(skew_entries, min_size=n * n, max_size=n * n), st.just(n))))
def test_congruence(data):
    a_flat, b_flat, n = data
    a = [[a_flat[i * n + j] - a_flat[j * n + i] for j in range(n)] for i in range(n)]
    b = [[b_flat[i * n + j] for j in range(n)] for i in range(n)]
    bab = [[sum(b[i][p] * a[p][q] * b[j][q] for p in range(n) for q in range(n)) for j in range(n)] for i in range(n)]
    lhs = pfaffian([[Poly.const(v) for v in row] for row in bab]).as_rat()
    rhs = linalg.det(b) * pfaffian([[Poly.const(v) for v in row] for row in a]).as_rat()
    assert lhs == rhs


def test_pfaffian_errors():
    with pytest.raises(OddOrder):
        pfaffian([[Poly.zero()] * 3 for _ in range(3)])
    with pytest.raises(NotSkew):
        pfaffian([[Poly.const(1), Poly.zero()], [Poly.zero(), Poly.zero()]])
    with pytest.raises(NotSkew):
        pfaffian([[Poly.zero(), Poly.const(1)], [Poly.const(1), Poly.zero()]])
    with pytest.raises(OddOrder):
        SkewContext(5)


def test_sub_pfaffian():
    assert sub_pfaffian((1, 3)) == X(1, 3)
    assert sub_pfaffian((1, 2, 5, 6)) == X(1, 2) * X(5, 6) - X(1, 5) * X(2, 6) + X(1, 6) * X(2, 5)


@st.composite
def skew_polys(draw, size=6, max_degree=3):
    f = Poly.zero()
    for _ in range(draw(st.integers(1, 4))):
        term = Poly.const(draw(st.integers(-4, 4)))
        for _ in range(draw(st.integers(0, max_degree))):
            i, j = sorted(draw(st.lists(st.integers(1, size), min_size=2, max_size=2, unique=True)))
            term = term * X(i, j)
        f = f + term
    return f


@given(skew_polys())
def test_straighten_round_trip(f):
    res = pfaff_straighten(f, 6)
    assert res.expand() == f
    for t in res.support():
        assert t.is_standard(6) and all(len(r) % 2 == 0 for r in t.rows)


def test_pfaffian_is_one_standard_monomial():
    res = pfaff_straighten(pfaffian(SkewContext(6).matrix()), 6)
    assert [t.rows for t in res.support()] == [((1, 2, 3, 4, 5, 6),)]


def test_membership():
    pf4 = sub_pfaffian((1, 2, 3, 4))
    assert is_in_pfaff_ideal(X(1, 2) * pf4, 4, 6)
    assert not is_in_pfaff_ideal(X(1, 2) * X(3, 4), 4, 6)
    assert is_in_pfaff_ideal(X(5, 6) * sub_pfaffian((2, 3, 4, 6)) - pf4, 4, 6)


@given(skew_polys(max_degree=2), st.sampled_from(list(itertools.combinations(range(1, 7), 4))))
def test_membership_agrees_with_span_test(g, idx):
    f = g * sub_pfaffian(idx) + (X(1, 2) if g.degree() == 1 else Poly.zero())
    for order in (2, 4, 6):
        assert brute_force_pfaff_membership(f, order, 6) == (f.is_zero() or pfaff_straighten(f, 6).min_width() >= order)


def test_entry_checks():
    with pytest.raises(EntryOutOfBounds):
        pfaff_straighten(Poly.var(VarId("x", (2, 1))), 4)
    with pytest.raises(EntryOutOfBounds):
        pfaff_straighten(X(1, 5), 4)


@pytest.mark.parametrize("f,r,sigma", [
    (sub_pfaffian((1, 2, 3, 4)), 2, (4,)),
    (X(1, 2) * sub_pfaffian((1, 2, 3, 4)), 2, (4, 2)),
    (sub_pfaffian((1, 2, 3, 4, 5, 6)), 3, (6,)),
    (sub_pfaffian((2, 3, 5, 6)) * 2 + X(1, 4) * sub_pfaffian((1, 3, 4, 6)), 2, None),
])
def test_reduce(f, r, sigma):
    red = pfaff_reduce(f, r, 6)
    image = red.subst.apply(f, eps_cutoff=red.q)
    assert image.eps_order() == red.q
    assert image.eps_slice(red.q) == k_monomial(red.sigma) * red.alpha
    assert red.sigma[0] >= 2 * r
    assert sigma is None or red.sigma == sigma
    assert not red.subst.det_witness.is_zero()


def test_reduce_rejects_non_members():
    with pytest.raises(NotInIdeal):
        pfaff_reduce(X(1, 2) * X(3, 4), 2, 4)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_embedding_leading_pfaffians(n):
    a = [[y(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]
    m = subpfaff_embed(a)
    for k in range(1, n + 1):
        lead = [row[:2 * k] for row in m[:2 * k]]
        assert pfaffian(lead) == symbolic_det([row[:k] for row in a[:k]])


def test_embedding_against_sympy():
    m = subpfaff_embed([[Poly.var(VarId("y", (i + 1, j + 1))) for j in range(3)] for i in range(3)])
    sm = sympy.Matrix([[to_sympy(p) for p in row] for row in m])
    assert sm.T == -sm
    assert sympy.expand(sm.det() - to_sympy(symbolic_det([[Poly.var(VarId("y", (i + 1, j + 1))) for j in range(3)] for i in range(3)])) ** 2) == 0


@pytest.mark.parametrize("order,vertices", [(2, 2), (4, 5), (6, 13)])
def test_pfaffian_program(order, vertices):
    prog = pfaffian_abp(order)
    assert prog.vertex_count == vertices
    ymat = [[Poly.zero() if i == j else (y(i, j) if i < j else -y(j, i)) for j in range(1, order + 1)]
            for i in range(1, order + 1)]
    assert eval_abp(prog) == pfaffian(ymat)


def test_compose():
    pf4 = sub_pfaffian((1, 2, 3, 4))
    circuit = pfaff_compose(pf4, 2, path_abp([y(1)]), 4)
    assert circuit.evaluate().eps_slice(0) == y(1)
    pf6 = sub_pfaffian((1, 2, 3, 4, 5, 6))
    g = path_abp([y(1) + 1, y(2)])
    assert pfaff_compose(pf6, 3, g, 6).evaluate().eps_slice(0) == eval_abp(g)
    assert pfaff_compose(pf6, 3, pfaffian_abp(2), 6).evaluate().eps_slice(0) == y(1, 2)
