"""Pfaffians of skew-symmetric matrices and the matching ideal machinery.

A skew matrix of order 2n is stored through its entries above the
diagonal, ``x[i,j]`` for i < j.  Products of principal sub-Pfaffians
indexed by the rows of a tableau with even rows are the standard
monomials; they form a basis, graded by how often each index occurs.
Sub-Pfaffians of order 2r generate an ideal whose elements are
supported on standard monomials with first row of length at least 2r.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import linalg
from .abp import LayeredABP, embed_top_left, homogenize_abp, pad_front, valiant_matrix
from .degeneration import (
    SCALE_ROW, LinearSubst, ReductionResult, _eval_matrix, positional_weights, row_transform,
)
from .errors import (
    EntryOutOfBounds, InputError, MembershipDisagreement, NotInIdeal, NotSkew, OddOrder,
    UnsupportedCharacteristic, VerificationFailed, ZeroPolynomial,
)
from .exact_poly import EpsScalar, Monomial, Poly, Rat, VarId, _norm, poly_sum
from .tableaux import Partition, Tableau, chain_pairs, enumerate_standard, partitions, shape_key, sub_chain

# ---------------------------------------------------------------- context


@dataclass(frozen=True)
class SkewContext:
    size: int

    def __post_init__(self):
        if self.size < 0 or self.size % 2:
            raise OddOrder(f"skew context of odd order {self.size}")

    @property
    def variables(self) -> List[VarId]:
        return [skew_var(i, j) for i in range(1, self.size + 1) for j in range(i + 1, self.size + 1)]

    def entry(self, i: int, j: int) -> Poly:
        if i == j:
            return Poly.zero()
        if i < j:
            return Poly.var(skew_var(i, j))
        return -Poly.var(skew_var(j, i))

    def matrix(self) -> List[List[Poly]]:
        return [[self.entry(i, j) for j in range(1, self.size + 1)] for i in range(1, self.size + 1)]

    def check(self, f: Poly) -> None:
        for v in f.variables():
            if v.family != "x" or len(v.indices) != 2:
                raise EntryOutOfBounds(f"{v} is not a skew matrix entry")
            i, j = v.indices
            if not (1 <= i < j <= self.size):
                raise EntryOutOfBounds(f"{v} is not an entry above the diagonal of order {self.size}")

    @classmethod
    def infer(cls, f: Poly) -> "SkewContext":
        top = 0
        for v in f.variables():
            if v.family != "x" or len(v.indices) != 2:
                raise EntryOutOfBounds(f"{v} is not a skew matrix entry")
            top = max(top, *v.indices)
        return cls(max(2, top + top % 2))


def skew_var(i: int, j: int) -> VarId:
    return VarId("x", (i, j))


def index_content(mono: Monomial, size: int) -> Tuple[int, ...]:
    c = [0] * size
    for v, e in mono:
        i, j = v.indices
        c[i - 1] += e
        c[j - 1] += e
    return tuple(c)


# ---------------------------------------------------------------- Pfaffians


def pfaffian(mat: Sequence[Sequence[Poly]]) -> Poly:
    """Pfaffian by expansion along the first row, memoized on index sets."""
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise InputError("pfaffian needs a square matrix")
    if n % 2:
        raise OddOrder(f"matrix of odd order {n} has no Pfaffian")
    mat = [[Poly.coerce(a) for a in row] for row in mat]
    for i in range(n):
        if not mat[i][i].is_zero():
            raise NotSkew(f"diagonal entry {i + 1} is nonzero")
        for j in range(i + 1, n):
            if mat[j][i] != -mat[i][j]:
                raise NotSkew(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) are not opposite")
    memo: Dict[Tuple[int, ...], Poly] = {(): Poly.const(1)}

    def rec(idx: Tuple[int, ...]) -> Poly:
        if idx in memo:
            return memo[idx]
        first, rest = idx[0], idx[1:]
        parts = []
        for k, j in enumerate(rest):
            a = mat[first][j]
            if a.is_zero():
                continue
            sub = rec(rest[:k] + rest[k + 1:])
            parts.append(a * sub if k % 2 == 0 else -(a * sub))
        memo[idx] = poly_sum(parts)
        return memo[idx]

    return rec(tuple(range(n)))


@lru_cache(maxsize=None)
def sub_pfaffian(idx: Tuple[int, ...]) -> Poly:
    """Pf of the generic skew matrix restricted to the sorted indices ``idx``."""
    if len(idx) % 2:
        raise OddOrder("sub-Pfaffian of odd order")
    if not idx:
        return Poly.const(1)
    first, rest = idx[0], idx[1:]
    parts = []
    for k, j in enumerate(rest):
        t = Poly.var(skew_var(first, j)) * sub_pfaffian(rest[:k] + rest[k + 1:])
        parts.append(t if k % 2 == 0 else -t)
    return poly_sum(parts)


def expand_standard_monomial(t: Tableau, ctx: Optional[SkewContext] = None) -> Poly:
    """Product of the principal sub-Pfaffians on the rows of ``t``."""
    out = Poly.const(1)
    for row in t.rows:
        if len(row) % 2:
            raise OddOrder(f"row {row} has odd length")
        if ctx is not None and row and row[-1] > ctx.size:
            raise EntryOutOfBounds(f"row {row} leaves the order-{ctx.size} context")
        out = out * sub_pfaffian(tuple(row))
    return out


# ---------------------------------------------------------------- straightening


@dataclass
class _SkewBlock:
    basis: List[Tableau]
    index: Dict[Monomial, int]
    matrix: List[List[int]]
    inverse: Optional[List[List[Rat]]] = None


@lru_cache(maxsize=4096)
def _skew_block(size: int, content: Tuple[int, ...]) -> _SkewBlock:
    total = sum(content)
    basis: List[Tableau] = []
    for shape in partitions(total, max_part=size):
        if all(p % 2 == 0 for p in shape):
            basis.extend(enumerate_standard(shape, size, content=content, even_rows=True))
    expansions = [expand_standard_monomial(t) for t in basis]
    monos = sorted({mm for p in expansions for (mm, _), _ in p.items()})
    index = {mm: i for i, mm in enumerate(monos)}
    mat = [[0] * len(basis) for _ in monos]
    for j, p in enumerate(expansions):
        for (mm, _), c in p.items():
            mat[index[mm]][j] = c
    return _SkewBlock(basis, index, mat)


def _skew_inverse(blk: _SkewBlock) -> List[List[Rat]]:
    if blk.inverse is None:
        k = len(blk.basis)
        if len(blk.index) != k:
            raise ArithmeticError("content block is not square")
        blk.inverse = linalg.solve(blk.matrix, [[1 if i == j else 0 for j in range(k)] for i in range(k)])
    return blk.inverse


@dataclass
class StdMonExpr:
    size: int
    terms: List[Tuple[Tableau, EpsScalar]] = field(default_factory=list)

    def support(self) -> List[Tableau]:
        return [t for t, _ in self.terms]

    def width(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("width of the zero polynomial")
        return max(t.shape[0] if t.rows else 0 for t, _ in self.terms)

    def min_width(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("width of the zero polynomial")
        return min(t.shape[0] if t.rows else 0 for t, _ in self.terms)

    def expand(self) -> Poly:
        return poly_sum(Poly.from_scalar(c) * expand_standard_monomial(t) for t, c in self.terms)

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "terms": [{"rows": [list(r) for r in t.rows], "coef": c.to_json()} for t, c in self.terms],
        }


def pfaff_straighten(f: Poly, size: Optional[int] = None) -> StdMonExpr:
    """Expand ``f`` in standard monomials of the generic skew matrix."""
    ctx = SkewContext(size) if size is not None else SkewContext.infer(f)
    ctx.check(f)
    groups: Dict[Tuple[int, ...], Dict[int, Dict[Monomial, Rat]]] = {}
    for (mono, e), c in f.items():
        groups.setdefault(index_content(mono, ctx.size), {}).setdefault(e, {})[mono] = c
    coef: Dict[Tableau, Dict[int, Rat]] = {}
    for content, slices in groups.items():
        blk = _skew_block(ctx.size, content)
        inv = _skew_inverse(blk)
        k = len(blk.basis)
        for e, vec in slices.items():
            b = [0] * k
            for mono, c in vec.items():
                b[blk.index[mono]] = c
            for j in range(k):
                s = sum(inv[j][i] * b[i] for i in range(k) if b[i] and inv[j][i])
                s = _norm(s) if type(s) is Fraction else s
                if s:
                    coef.setdefault(blk.basis[j], {})[e] = s
    terms = [(t, EpsScalar(d)) for t, d in coef.items()]
    terms.sort(key=lambda it: (shape_key(it[0].shape), it[0].rows))
    return StdMonExpr(ctx.size, terms)


def skew_monomials(content: Sequence[int]) -> Iterator[Monomial]:
    """Monomials in the x[i,j] (i < j) where index i occurs content[i-1] times."""
    size = len(content)
    left = list(content)
    cur: Dict[Tuple[int, int], int] = {}

    def rec(i: int):
        while i < size and left[i] == 0:
            i += 1
        if i == size:
            yield tuple(sorted((skew_var(a, b), e) for (a, b), e in cur.items()))
            return
        # index i pairs up with later indices only
        yield from split(i, i + 1)

    def split(i: int, j: int):
        if left[i] == 0:
            yield from rec(i + 1)
            return
        if j >= size:
            return
        for v in range(min(left[i], left[j]), -1, -1):
            left[i] -= v
            left[j] -= v
            if v:
                cur[(i + 1, j + 1)] = v
            yield from split(i, j + 1)
            cur.pop((i + 1, j + 1), None)
            left[i] += v
            left[j] += v

    yield from rec(0)


def brute_force_pfaff_membership(f: Poly, order: int, size: Optional[int] = None) -> bool:
    """Span test against (principal sub-Pfaffian of ``order``) x monomial, per content block."""
    if f.is_zero() or order <= 0:
        return True
    ctx = SkewContext(size) if size is not None else SkewContext.infer(f)
    ctx.check(f)
    if order % 2:
        raise OddOrder("sub-Pfaffians have even order")
    if order > ctx.size:
        return False
    groups: Dict[Tuple[int, ...], Dict[int, Dict[Monomial, Rat]]] = {}
    for (mono, e), c in f.items():
        groups.setdefault(index_content(mono, ctx.size), {}).setdefault(e, {})[mono] = c
    for content, slices in groups.items():
        gens = []
        avail = [i + 1 for i in range(ctx.size) if content[i]]
        for idx in itertools.combinations(avail, order):
            rest = list(content)
            for i in idx:
                rest[i - 1] -= 1
            pf = sub_pfaffian(idx)
            gens.extend(pf * Poly.monomial(mono) for mono in skew_monomials(rest))
        if not gens:
            return False
        monos = sorted({mm for g in gens for (mm, _), _ in g.items()} | {mm for v in slices.values() for mm in v})
        pos = {mm: i for i, mm in enumerate(monos)}
        rows = []
        for g in gens:
            row = [0] * len(monos)
            for (mm, _), c in g.items():
                row[pos[mm]] = c
            rows.append(row)
        base = linalg.rank(rows)
        for vec in slices.values():
            t = [0] * len(monos)
            for mm, c in vec.items():
                t[pos[mm]] = c
            if linalg.rank(rows + [t]) != base:
                return False
    return True


def is_in_pfaff_ideal(f: Poly, order: int, size: Optional[int] = None, guard: bool = True) -> bool:
    """Membership in the ideal of principal sub-Pfaffians of ``order``.

    Decided by width; with ``guard`` the span test runs as well and a
    disagreement raises MembershipDisagreement.
    """
    if order % 2:
        raise OddOrder("sub-Pfaffians have even order")
    if f.is_zero() or order <= 0:
        return True
    by_width = pfaff_straighten(f, size).min_width() >= order
    if guard:
        other = brute_force_pfaff_membership(f, order, size)
        if other != by_width:
            raise MembershipDisagreement(f"width test says {by_width}, span test says {other}")
    return by_width


# ---------------------------------------------------------------- reduction


def k_monomial(sigma: Sequence[int]) -> Poly:
    return expand_standard_monomial(Tableau.of([list(range(1, p + 1)) for p in sigma]))


def pfaff_reduce(f: Poly, r: int, size: Optional[int] = None, witness: bool = True,
                 budget: Optional[int] = None) -> ReductionResult:
    """Substitution X -> P X P^T sending f to eps^q alpha [K_sigma] + O(eps^(q+1)).

    P is the row transform in lam times a diagonal of eps powers; the new
    x[i,j] is sum over k < l of x[k,l] (P_ik P_jl - P_il P_jk).
    """
    if f.is_zero():
        raise ZeroPolynomial("cannot reduce the zero polynomial")
    if f.has_eps():
        raise InputError("reduction expects an eps-free polynomial")
    ctx = SkewContext(size) if size is not None else SkewContext.infer(f)
    ctx.check(f)
    n2 = ctx.size
    st = pfaff_straighten(f, n2)
    if st.min_width() < 2 * r:
        raise NotInIdeal(f"polynomial uses a standard monomial of width {st.min_width()} < {2 * r}")
    big_d = f.degree()
    base = big_d + 1
    pairs = chain_pairs(n2)
    order = [VarId("lam", p) for p in pairs] + [SCALE_ROW]

    def exponent_vector(t: Tableau) -> Tuple[int, ...]:
        _, h = sub_chain(t, n2)
        counts = [sum(1 for p in t.shape if p >= i) for i in range(1, n2 + 1)]
        return tuple(h) + (sum(c * base ** i for i, c in enumerate(counts, 1)),)

    vectors = [(exponent_vector(t), t) for t, _ in st.terms]
    top = max(v for v, _ in vectors)
    winners = [t for v, t in vectors if v == top]
    if len(winners) != 1:
        raise VerificationFailed("leading standard monomial is not unique")
    sigma: Partition = winners[0].shape
    bounds = {v: big_d for v in order}
    bounds[SCALE_ROW] = 2 * big_d * base ** n2
    w = positional_weights(order, bounds)
    lead = dict(zip(order, top))
    q = -sum(w[v] * e for v, e in lead.items())

    powers = {v: -w[v] for v in order}
    pm = _eval_matrix(row_transform(n2), powers)
    # column k of P also carries eps^(power of y * base^k)
    scale = [powers[SCALE_ROW] * base ** k for k in range(1, n2 + 1)]
    forms: Dict[VarId, Poly] = {}
    for i in range(1, n2 + 1):
        for j in range(i + 1, n2 + 1):
            terms = {}
            for k in range(1, n2 + 1):
                for l in range(k + 1, n2 + 1):
                    c = pm[i - 1][k - 1] * pm[j - 1][l - 1] - pm[i - 1][l - 1] * pm[j - 1][k - 1]
                    shift = scale[k - 1] + scale[l - 1]
                    for e, a in c.terms.items():
                        terms[(((skew_var(k, l), 1),), e + shift)] = a
            forms[skew_var(i, j)] = Poly(terms)
    subst = LinearSubst(ctx.variables, forms)
    image = f.substitute(forms, eps_cutoff=q, budget=budget)
    if image.is_zero() or image.eps_order() != q:
        raise VerificationFailed("lowest eps power differs from the prediction")
    sl = image.eps_slice(q)
    # x12 x34 ... occurs in each sub-Pfaffian with coefficient 1
    marker: Dict[VarId, int] = {}
    for p in sigma:
        for a in range(1, p, 2):
            marker[skew_var(a, a + 1)] = marker.get(skew_var(a, a + 1), 0) + 1
    alpha = sl.coeff(tuple(sorted(marker.items()))).coeff(0)
    if not alpha or sl != k_monomial(sigma) * alpha:
        raise VerificationFailed("lowest eps slice is not a multiple of [K_sigma]")
    if witness:
        # the forms are the second compound of P, whose determinant is det(P)^(size-1)
        p_mat = [[pm[i][k] * EpsScalar.eps(scale[k]) for k in range(n2)] for i in range(n2)]
        subst.det_witness = linalg.eps_det(p_mat) ** (n2 - 1)
        if subst.det_witness.is_zero():
            raise VerificationFailed("substitution is not invertible")
    return ReductionResult(subst, q, alpha, sigma, (n2, n2), w, lead, sl)


# ---------------------------------------------------------------- embedding and composition


def subpfaff_embed(a: Sequence[Sequence[Poly]]) -> List[List[Poly]]:
    """Skew matrix whose leading 2k x 2k Pfaffian is det(a_[k],[k]) for every k.

    [[0, a], [-a^T, 0]] with indices interleaved as 1, n+1, 2, n+2, ...
    The block form alone has Pfaffian (-1)^(k(k-1)/2) det; the interleaving
    permutation has the same sign, so the two cancel.
    """
    n = len(a)
    if any(len(row) != n for row in a):
        raise InputError("subpfaff_embed needs a square matrix")
    a = [[Poly.coerce(v) for v in row] for row in a]
    block = [[Poly.zero()] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            block[i][n + j] = a[i][j]
            block[n + j][i] = -a[i][j]
    perm = [p for k in range(n) for p in (k, n + k)]
    return [[block[perm[i]][perm[j]] for j in range(2 * n)] for i in range(2 * n)]


def pfaff_compose(f: Poly, r: int, g: LayeredABP, size: Optional[int] = None, characteristic: int = 0,
                  reduction: Optional[ReductionResult] = None):
    """Circuit computing g + O(eps) with a single f-oracle gate, f in the order-2r Pfaffian ideal."""
    from .oracle_compose import HOM, assemble_circuit, check_program

    if characteristic != 0:
        raise UnsupportedCharacteristic("only characteristic 0 is implemented")
    check_program(g, r)
    red = reduction or pfaff_reduce(f, r, size)
    n2 = red.shape[0]
    hom = homogenize_abp(g, HOM)
    big = subpfaff_embed(embed_top_left(pad_front(valiant_matrix(hom), r), n2 // 2, n2 // 2))
    entries = {skew_var(i + 1, j + 1): big[i][j] for i in range(n2) for j in range(i + 1, n2)}
    t = sum(1 for p in red.sigma if p >= 2 * r)
    # rows shorter than 2r meet unit leading minors, longer ones give 1 + g
    return assemble_circuit(f, red, entries, red.alpha, t, g, hom)


def pfaffian_abp(order: int, family: str = "y") -> LayeredABP:
    """Program for the Pfaffian of order ``order`` in ``family[i,j]`` (i < j).

    A vertex is the set of indices not yet matched; each edge matches the
    smallest remaining index.  Sizes 2, 4, 6 give 2, 5 and 13 vertices.
    """
    if order < 2 or order % 2:
        raise OddOrder("Pfaffian programs need a positive even order")
    name = lambda s: "S" + "_".join(map(str, s)) if s else "t"
    full = tuple(range(1, order + 1))
    layers: List[List[str]] = [[name(full)]]
    edges = {}
    frontier = [full]
    while frontier[0]:
        nxt: Dict[Tuple[int, ...], None] = {}
        for s in frontier:
            first, rest = s[0], s[1:]
            for k, j in enumerate(rest):
                remaining = rest[:k] + rest[k + 1:]
                nxt.setdefault(remaining)
                lab = Poly.var(VarId(family, (first, j)))
                edges[(name(s), name(remaining))] = lab if k % 2 == 0 else -lab
        frontier = sorted(nxt)
        layers.append([name(s) for s in frontier])
    return LayeredABP(layers, edges)
