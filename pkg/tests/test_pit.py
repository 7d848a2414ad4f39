import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from detideals import linalg
from detideals.errors import BadOmega, CondenserTooSmall, InconsistentSchedule, InputError
from detideals.exact_poly import Poly, VarId
from detideals.pit import (
    MatrixGenerator, RecursiveGenerator, apply_generator, expand_generator, factor_low_rank, fs_condenser,
    random_condenser, rank_lt_equations, recursive_generator, sz_test, vanishing_equivalence,
)
from detideals.straightening import minor, straighten, symbolic_det

from conftest import polys, xmat

X = lambda i, j: Poly.var(VarId("x", (i, j)))


def test_generator_matrix_has_low_rank():
    g = MatrixGenerator(3, 3, 2)
    mat = expand_generator(g)
    assert symbolic_det(mat).is_zero()
    assert len(g.seed) == 12
    with pytest.raises(InputError):
        MatrixGenerator(2, 2, 3)


def test_apply_generator():
    d2 = symbolic_det(xmat(2))
    assert apply_generator(d2, MatrixGenerator(2, 2, 1)).is_zero()
    assert not apply_generator(d2, MatrixGenerator(2, 2, 2)).is_zero()


@given(polys(n=3, m=3, max_degree=3, max_terms=3), st.integers(1, 4))
def test_vanishing_equivalence(g, r):
    f = g * minor((1, 2), (2, 3)) if r % 2 else g
    res = vanishing_equivalence(f, r, 3, 3)
    assert res["agree"]


def test_factor_low_rank():
    mat = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    y, z = factor_low_rank(mat, 2)
    assert [[sum(y[i][k] * z[k][j] for k in range(2)) for j in range(3)] for i in range(3)] == mat
    with pytest.raises(InputError):
        factor_low_rank(mat, 1)


@pytest.mark.parametrize("n,schedule", [(4, (1,)), (9, (2,)), (16, (2, 2)), (16, (2, 2, 2))])
def test_recursive_generator_degree(n, schedule):
    gen = recursive_generator(n, len(schedule), schedule)
    outs = gen.materialize()
    assert len(outs) == n
    assert all(p.degree() == 2 ** len(schedule) and p.is_homogeneous() for p in outs)
    assert {v for p in outs for v in p.variables()} <= set(gen.seed())
    assert gen.report()["seed_bound_holds"]


def test_recursive_generator_rejects_bad_schedules():
    with pytest.raises(InconsistentSchedule):
        recursive_generator(15, 1, (2,))
    with pytest.raises(InconsistentSchedule):
        recursive_generator(16, 2, (2,))
    with pytest.raises(InconsistentSchedule):
        RecursiveGenerator(16, (5,))
    with pytest.raises(InconsistentSchedule):
        RecursiveGenerator(16, ())


def test_fs_condenser_shape_and_errors():
    c = fs_condenser(4, 2, 2, points=[1, -2, 3])
    assert len(c) == 3 and c.matrices[1][0] == [-4, 16, -64, 256]
    assert c.loss == 4
    assert len(fs_condenser(4, 2)) == 9
    for bad in (0, 1, -1):
        with pytest.raises(BadOmega):
            fs_condenser(3, 2, bad)
    with pytest.raises(InputError):
        fs_condenser(3, 2, points=[1, 1])
    with pytest.raises(InputError):
        fs_condenser(3, 2, points=[0, 1])


def test_fs_condenser_seeded():
    assert fs_condenser(5, 2, seed=4).points == fs_condenser(5, 2, seed=4).points


@pytest.mark.parametrize("n,r", [(3, 1), (4, 2), (5, 2), (6, 3)])
def test_condenser_failures_within_loss(n, r):
    c = fs_condenser(n, r, Fraction(3, 2), seed=n * r)
    rng = random.Random(n + r)
    for _ in range(20):
        a = [[rng.randint(-4, 4) for _ in range(r)] for _ in range(n)]
        if linalg.rank(a) == r:
            assert c.failures(a) <= r * (n - r)


def test_rank_lt_equations_lie_in_minor_ideal():
    eqs = rank_lt_equations(3, 2, fs_condenser(3, 2))
    assert len(eqs) == 5
    assert all(straighten(p, 3, 3).min_width() >= 2 for p in eqs)
    with pytest.raises(CondenserTooSmall):
        rank_lt_equations(3, 2, random_condenser(3, 2, 4))


def test_fs_equations_miss_an_invertible_matrix():
    # every condensed 2x2 minor vanishes although the matrix is invertible
    m = [[1, 0, 1], [1, 0, 0], [Fraction(11, 9), 1, 1]]
    point = {VarId("x", (i + 1, j + 1)): m[i][j] for i in range(3) for j in range(3)}
    assert linalg.det(m) == 1
    assert all(p.evaluate(point) == 0 for p in rank_lt_equations(3, 2, fs_condenser(3, 2, seed=9)))


def test_sz_test():
    assert not sz_test(Poly.zero())
    assert not sz_test(X(1, 1) - X(1, 1))
    assert sz_test(X(1, 1) * X(2, 2) - X(1, 2) * X(2, 1))
    assert sz_test(X(1, 1) ** 2 - X(1, 1), trials=20, seed=3)
    with pytest.raises(InputError):
        sz_test(X(1, 1) ** 5, low=0, high=3)
