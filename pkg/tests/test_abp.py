import json

import pytest
import sympy

from detideals.abp import (
    LayeredABP, det_abp, embed_top_left, eval_abp, homogenize_abp, imm_abp, imm_polynomial, leading_minors,
    pad_front, path_abp, prune_abp, valiant_matrix,
)
from detideals.errors import InputError
from detideals.exact_poly import Poly, VarId
from detideals.straightening import symbolic_det

from conftest import to_sympy

y = lambda *i: Poly.var(VarId("y", i))


@pytest.mark.parametrize("t", [1, 2, 3, 4])
def test_det_program(t):
    mat = [[y(i, j) for j in range(1, t + 1)] for i in range(1, t + 1)]
    expected = sympy.Matrix([[to_sympy(p) for p in row] for row in mat]).det()
    assert to_sympy(eval_abp(det_abp(t))) == sympy.expand(expected)


@pytest.mark.parametrize("w,d", [(1, 1), (2, 2), (2, 3), (3, 3)])
def test_imm_program(w, d):
    assert eval_abp(imm_abp(w, d)) == imm_polynomial(w, d)


def test_evaluate_at_point():
    g = path_abp([y(1) + 1, y(2)])
    assert eval_abp(g, {VarId("y", (1,)): 2, VarId("y", (2,)): 5}) == Poly.const(15)


def test_validation():
    with pytest.raises(InputError):
        LayeredABP([["s"]])
    with pytest.raises(InputError):
        LayeredABP([["s"], ["a"], ["t"]], {("s", "t"): y(1)})
    with pytest.raises(InputError):
        LayeredABP([["s"], ["t"]], {("s", "t"): y(1) * y(2)})
    with pytest.raises(InputError):
        LayeredABP([["s", "u"], ["t"]])


def test_json_round_trip_and_string_labels():
    g = LayeredABP([["s"], ["a", "b"], ["t"]], {("s", "a"): y(1), ("s", "b"): Poly.const(2),
                                                 ("a", "t"): y(2) - 1, ("b", "t"): y(3)})
    again = LayeredABP.from_json(json.dumps(g.to_json()))
    assert eval_abp(again) == eval_abp(g)
    text = '{"layers": [["s"], ["t"]], "edges": [{"from": "s", "to": "t", "label": "2*y[1] - 1/2"}]}'
    assert eval_abp(LayeredABP.from_json(text)) == y(1) * 2 - Poly.const(1) / 2


def test_prune_drops_dead_vertices():
    g = LayeredABP([["s"], ["a", "b"], ["t"]], {("s", "a"): y(1), ("a", "t"): y(2), ("s", "b"): y(3)})
    p = prune_abp(g)
    assert p.vertex_count == 3
    assert eval_abp(p) == eval_abp(g)


def test_homogenize():
    z = VarId("aux", (3,))
    g = path_abp([y(1) + 2, y(2) - 1])
    h = homogenize_abp(g, z)
    out = eval_abp(h)
    assert out.is_homogeneous()
    assert out.substitute({z: Poly.const(1)}) == eval_abp(g)


@pytest.mark.parametrize("g", [
    path_abp([y(1)]),
    path_abp([y(1) + 1, y(2)]),
    path_abp([y(1), y(2), y(3) - 2]),
    LayeredABP([["s"], ["a", "b"], ["t"]], {("s", "a"): y(1), ("s", "b"): y(2), ("a", "t"): y(3), ("b", "t"): y(4)}),
])
def test_valiant_matrix(g):
    a = valiant_matrix(g)
    minors = leading_minors(a)
    assert minors[-1] == Poly.const(1) + eval_abp(g)
    assert all(m == Poly.const(1) for m in minors[:-1])


def test_padding_keeps_determinant():
    a = valiant_matrix(path_abp([y(1), y(2)]))
    padded = pad_front(a, 5)
    big = embed_top_left(padded, 6, 7)
    assert symbolic_det(padded) == symbolic_det(a)
    assert symbolic_det([row[:6] for row in big]) == symbolic_det(a)
    with pytest.raises(InputError):
        pad_front(a, 1)
