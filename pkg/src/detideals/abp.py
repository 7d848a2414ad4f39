"""Layered algebraic branching programs.

A program is a list of layers of named vertices.  Edges join consecutive
layers and carry affine labels.  The program computes the sum over all
source-to-sink paths of the product of the labels along the path.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import InputError
from .exact_poly import Poly, VarId, parse_poly, poly_sum, rat
from .straightening import symbolic_det

Edge = Tuple[str, str]


@dataclass
class LayeredABP:
    layers: List[List[str]]
    edges: Dict[Edge, Poly] = field(default_factory=dict)

    def __post_init__(self):
        self.layers = [list(layer) for layer in self.layers]
        self.validate()

    def validate(self) -> None:
        if len(self.layers) < 2:
            raise InputError("a program needs at least a source and a sink layer")
        if len(self.layers[0]) != 1 or len(self.layers[-1]) != 1:
            raise InputError("first and last layers must hold exactly one vertex")
        seen = {}
        for k, layer in enumerate(self.layers):
            for name in layer:
                if name in seen:
                    raise InputError(f"vertex {name!r} appears twice")
                seen[name] = k
        for (a, b), label in self.edges.items():
            if a not in seen or b not in seen:
                raise InputError(f"edge {a}->{b} uses an unknown vertex")
            if seen[b] != seen[a] + 1:
                raise InputError(f"edge {a}->{b} does not join consecutive layers")
            if label.degree() > 1:
                raise InputError(f"label of {a}->{b} is not affine")

    @property
    def source(self) -> str:
        return self.layers[0][0]

    @property
    def sink(self) -> str:
        return self.layers[-1][0]

    @property
    def length(self) -> int:
        """Number of edges on every source-to-sink path."""
        return len(self.layers) - 1

    @property
    def vertex_count(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def vertices(self) -> List[str]:
        return [v for layer in self.layers for v in layer]

    def layer_of(self) -> Dict[str, int]:
        return {v: k for k, layer in enumerate(self.layers) for v in layer}

    def variables(self) -> List[VarId]:
        return sorted({v for p in self.edges.values() for v in p.variables()})

    def vertex_polys(self) -> Dict[str, Poly]:
        """Polynomial computed at each vertex (sum over paths from the source)."""
        val: Dict[str, Poly] = {self.source: Poly.const(1)}
        incoming: Dict[str, List[Tuple[str, Poly]]] = {}
        for (a, b), label in self.edges.items():
            incoming.setdefault(b, []).append((a, label))
        for layer in self.layers[1:]:
            for v in layer:
                val[v] = poly_sum(val[a] * label for a, label in incoming.get(v, []))
        return val

    def to_json(self) -> dict:
        return {
            "layers": [list(layer) for layer in self.layers],
            "edges": [
                {"from": a, "to": b, "label": label.to_json()}
                for (a, b), label in sorted(self.edges.items(), key=lambda kv: (self._pos(kv[0][0]), self._pos(kv[0][1])))
            ],
        }

    def _pos(self, name: str) -> int:
        return self.vertices().index(name)

    @classmethod
    def from_json(cls, data) -> "LayeredABP":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise InputError(f"bad ABP JSON: {exc}") from exc
        try:
            layers = [[str(v) for v in layer] for layer in data["layers"]]
            edges: Dict[Edge, Poly] = {}
            for e in data["edges"]:
                label = e["label"]
                if isinstance(label, int) and not isinstance(label, bool):
                    label = Poly.const(label)
                elif isinstance(label, str):
                    label = parse_poly(label)
                else:
                    label = Poly.from_json(label)
                key = (str(e["from"]), str(e["to"]))
                edges[key] = edges.get(key, Poly.zero()) + label
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad ABP JSON: {exc}") from exc
        return cls(layers, edges)


def eval_abp(p: LayeredABP, point: Optional[Mapping[VarId, object]] = None) -> Poly:
    """The program's polynomial, or its value at ``point`` (as a constant Poly)."""
    out = p.vertex_polys()[p.sink]
    if point is not None:
        out = out.substitute({v: Poly.coerce(c) if isinstance(c, Poly) else Poly.const(rat(c)) for v, c in point.items()})
    return out


def prune_abp(p: LayeredABP) -> LayeredABP:
    """Drop vertices that compute zero or cannot reach the sink."""
    vals = p.vertex_polys()
    alive = {v for v, poly in vals.items() if not poly.is_zero()}
    alive.add(p.source)
    reach = {p.sink}
    for layer in reversed(p.layers[:-1]):
        for v in layer:
            if any(a == v and b in reach and not lab.is_zero() for (a, b), lab in p.edges.items()):
                reach.add(v)
    keep = (alive & reach) | {p.source, p.sink}
    layers = [[v for v in layer if v in keep] for layer in p.layers]
    edges = {(a, b): lab for (a, b), lab in p.edges.items() if a in keep and b in keep and not lab.is_zero()}
    return LayeredABP(layers, edges)


def homogenize_abp(p: LayeredABP, z: VarId) -> LayeredABP:
    """Replace each label c0 + sum c_i y_i by c0 z + sum c_i y_i.

    Vertices computing zero are pruned first; afterwards every vertex in
    layer k computes a homogeneous polynomial of degree k.
    """
    if z in set(p.variables()):
        raise InputError(f"{z} already occurs in the program")
    q = prune_abp(p)
    edges = {}
    zp = Poly.var(z)
    for key, label in q.edges.items():
        by = label.by_monomial()
        const = by.pop((), None)
        lin = Poly.from_monomial_coeffs(by)
        edges[key] = lin + (Poly.from_scalar(const) * zp if const is not None else Poly.zero())
    return LayeredABP([list(layer) for layer in q.layers], edges)


def valiant_matrix(p: LayeredABP) -> List[List[Poly]]:
    """Square matrix A with det(A) = 1 + g and unit proper leading minors.

    Vertices are ordered layer by layer.  For an even path length the sink
    gets an edge back to the source; for an odd length source and sink
    merge into the last index and an isolated vertex takes index 0.  Every
    vertex also gets a self-loop of weight 1.
    """
    order = p.vertices()
    size = len(order)
    if p.length % 2 == 0:
        idx = {v: k for k, v in enumerate(order)}
        a = [[Poly.const(1 if i == j else 0) for j in range(size)] for i in range(size)]
        for (u, v), label in p.edges.items():
            a[idx[u]][idx[v]] = a[idx[u]][idx[v]] + label
        a[size - 1][0] = Poly.const(1)
        return a
    inner = order[1:-1]
    idx = {v: k + 1 for k, v in enumerate(inner)}
    idx[p.source] = size - 1
    idx[p.sink] = size - 1
    a = [[Poly.const(1 if i == j else 0) for j in range(size)] for i in range(size)]
    for (u, v), label in p.edges.items():
        a[idx[u]][idx[v]] = a[idx[u]][idx[v]] + label
    return a


def pad_front(a: Sequence[Sequence[Poly]], size: int) -> List[List[Poly]]:
    """diag(I, a) of the requested size; leading minors stay 1 before a's block."""
    k = len(a)
    if k > size:
        raise InputError("matrix is larger than the requested size")
    off = size - k
    out = [[Poly.const(1 if i == j else 0) for j in range(size)] for i in range(size)]
    for i in range(k):
        for j in range(k):
            out[off + i][off + j] = a[i][j]
    return out


def embed_top_left(a: Sequence[Sequence[Poly]], n: int, m: int) -> List[List[Poly]]:
    """Place ``a`` in the top-left of an n x m matrix with ones on the rest of the diagonal."""
    k = len(a)
    out = [[Poly.const(1 if i == j else 0) for j in range(m)] for i in range(n)]
    for i in range(k):
        for j in range(k):
            out[i][j] = a[i][j]
    return out


def leading_minors(a: Sequence[Sequence[Poly]]) -> List[Poly]:
    return [symbolic_det([row[:k] for row in a[:k]]) for k in range(1, len(a) + 1)]


# ---------------------------------------------------------------- concrete programs


def det_abp(t: int, family: str = "y") -> LayeredABP:
    """Clow-sequence program for the t x t determinant in ``family[i,j]``.

    A state (h, u) in layer k+1 means k edges have been used, the current
    closed walk started at head h and now sits at u.  Closing a walk costs
    a factor -1; the global sign (-1)^t sits on the first edge.
    """
    if t < 1:
        raise InputError("det_abp needs t >= 1")
    xv = lambda i, j: Poly.var(VarId(family, (i, j)))
    name = lambda k, h, u: f"L{k}h{h}u{u}"
    layers: List[List[str]] = [["s"]]
    edges: Dict[Edge, Poly] = {}
    states = [(h, u) for h in range(1, t + 1) for u in range(h, t + 1)]
    for k in range(1, t + 1):
        layers.append([name(k, h, u) for h, u in states])
    layers.append(["t"])
    for h in range(1, t + 1):
        edges[("s", name(1, h, h))] = Poly.const((-1) ** t)
    for k in range(1, t):
        for h, u in states:
            src = name(k, h, u)
            for v in range(h + 1, t + 1):
                edges[(src, name(k + 1, h, v))] = xv(u, v)
            for h2 in range(h + 1, t + 1):
                edges[(src, name(k + 1, h2, h2))] = -xv(u, h)
    for h, u in states:
        edges[(name(t, h, u), "t")] = -xv(u, h)
    return prune_abp(LayeredABP(layers, edges))


def imm_abp(w: int, d: int, family: str = "y") -> LayeredABP:
    """Program for the (1,1) entry of a product of d matrices.

    The first factor is 1 x w, the middle ones w x w and the last w x 1;
    entry (i, j) of factor k is ``family[k,i,j]``.
    """
    if w < 1 or d < 1:
        raise InputError("imm_abp needs w, d >= 1")
    yv = lambda k, i, j: Poly.var(VarId(family, (k, i, j)))
    layers: List[List[str]] = [["s"]] + [[f"L{k}c{i}" for i in range(1, w + 1)] for k in range(1, d)] + [["t"]]
    edges: Dict[Edge, Poly] = {}
    if d == 1:
        edges[("s", "t")] = yv(1, 1, 1)
        return LayeredABP(layers, edges)
    for j in range(1, w + 1):
        edges[("s", f"L1c{j}")] = yv(1, 1, j)
    for k in range(1, d - 1):
        for i in range(1, w + 1):
            for j in range(1, w + 1):
                edges[(f"L{k}c{i}", f"L{k + 1}c{j}")] = yv(k + 1, i, j)
    for i in range(1, w + 1):
        edges[(f"L{d - 1}c{i}", "t")] = yv(d, i, 1)
    return LayeredABP(layers, edges)


def imm_polynomial(w: int, d: int, family: str = "y") -> Poly:
    """IMM by direct matrix multiplication, as an independent oracle."""
    row = [Poly.var(VarId(family, (1, 1, j))) for j in range(1, w + 1)]
    if d == 1:
        return Poly.var(VarId(family, (1, 1, 1)))
    for k in range(2, d):
        row = [poly_sum(row[i - 1] * Poly.var(VarId(family, (k, i, j))) for i in range(1, w + 1)) for j in range(1, w + 1)]
    return poly_sum(row[i - 1] * Poly.var(VarId(family, (d, i, 1))) for i in range(1, w + 1))


def path_abp(labels: Sequence[Poly]) -> LayeredABP:
    """A single path whose edges carry ``labels`` in order."""
    names = ["s"] + [f"p{k}" for k in range(1, len(labels))] + ["t"]
    layers = [[v] for v in names]
    edges = {(names[k], names[k + 1]): Poly.coerce(lab) for k, lab in enumerate(labels)}
    return LayeredABP(layers, edges)
