import itertools
from math import comb

import pytest

from detideals.errors import InputError, ShapeOutOfBounds
from detideals.tableaux import (
    Bitableau, Tableau, chain_pairs, enumerate_standard, k_tableau, kbar_tableau, partition, partitions,
    standard_bitableaux, sub_chain, sub_op, transpose,
)


def test_partitions_in_lex_descending_order():
    assert list(partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert list(partitions(4, max_part=2, max_len=2)) == [(2, 2)]


def test_partition_validation():
    assert partition([3, 1, 0]) == (3, 1)
    with pytest.raises(InputError):
        partition([1, 2])


def test_transpose():
    assert transpose((3, 1)) == (2, 1, 1)
    assert transpose(transpose((4, 2, 2, 1))) == (4, 2, 2, 1)


def _brute_standard(shape, n):
    cells = sum(shape)
    out = []
    for vals in itertools.product(range(1, n + 1), repeat=cells):
        rows, k = [], 0
        for p in shape:
            rows.append(vals[k:k + p])
            k += p
        t = Tableau.of(rows)
        if t.is_standard(n):
            out.append(t)
    return sorted(out)


@pytest.mark.parametrize("shape,n", [((2,), 3), ((2, 1), 3), ((2, 2), 3), ((3, 1), 4), ((1, 1, 1), 3)])
def test_enumerate_standard_matches_brute_force(shape, n):
    assert list(enumerate_standard(shape, n)) == _brute_standard(shape, n)


def test_enumerate_standard_rejects_wide_shapes():
    with pytest.raises(ShapeOutOfBounds):
        list(enumerate_standard((4,), 3))


@pytest.mark.parametrize("n,m,d", [(2, 2, 3), (3, 3, 2), (2, 3, 3), (3, 3, 3)])
def test_bitableaux_count_monomials(n, m, d):
    # one standard bitableau per monomial of the same content
    total = 0
    for rc in itertools.product(range(d + 1), repeat=n):
        if sum(rc) != d:
            continue
        for cc in itertools.product(range(d + 1), repeat=m):
            if sum(cc) == d:
                total += len(standard_bitableaux(n, m, rc, cc))
    assert total == comb(n * m + d - 1, d)


def test_k_and_kbar():
    assert k_tableau((3, 1)).rows == ((1, 2, 3), (1,))
    assert kbar_tableau((2, 1), 4).rows == ((3, 4), (4,))


def test_sub_op_and_chain():
    t = Tableau.of([[1, 2], [1]])
    s, changed = sub_op(t, 1, 3)
    assert s.rows == ((2, 3), (3,)) and changed == 2
    s, changed = sub_op(t, 1, 2)
    assert s.rows == ((1, 2), (2,)) and changed == 1
    assert chain_pairs(3) == [(1, 2), (1, 3), (2, 3)]
    end, hs = sub_chain(k_tableau((2, 1)), 3)
    assert end == kbar_tableau((2, 1), 3)
    assert len(hs) == 3


def test_bitableau_shapes_must_agree():
    with pytest.raises(InputError):
        Bitableau(Tableau.of([[1, 2]]), Tableau.of([[1]]))
