"""Straightening into the standard bideterminant basis, and ideal membership.

Every polynomial in the entries of a generic n x m matrix is a unique
combination of standard bideterminants.  Both the monomials and the
standard bideterminants of a fixed row/column content form bases of the
same space, so each content block is an exact square linear solve.

The width of the expansion decides membership in the ideal generated by
the r x r minors: f is in it exactly when every bideterminant used has a
first row of length at least r.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import linalg
from .errors import EntryOutOfBounds, InputError, ZeroPolynomial
from .exact_poly import EpsScalar, Monomial, Poly, Rat, VarId, _norm, poly_sum
from .tableaux import Bitableau, shape_key, standard_bitableaux


def xvar(i: int, j: int) -> VarId:
    return VarId("x", (i, j))


def generic_matrix(n: int, m: int) -> List[List[Poly]]:
    return [[Poly.var(xvar(i, j)) for j in range(1, m + 1)] for i in range(1, n + 1)]


def infer_shape(f: Poly) -> Tuple[int, int]:
    n = m = 0
    for v in f.variables():
        if v.family != "x" or len(v.indices) != 2:
            raise EntryOutOfBounds(f"{v} is not a matrix entry")
        n, m = max(n, v.indices[0]), max(m, v.indices[1])
    return max(n, 1), max(m, 1)


def check_context(f: Poly, n: int, m: int) -> None:
    for v in f.variables():
        if v.family != "x" or len(v.indices) != 2:
            raise EntryOutOfBounds(f"{v} is not an entry of the {n}x{m} matrix")
        i, j = v.indices
        if not (1 <= i <= n and 1 <= j <= m):
            raise EntryOutOfBounds(f"{v} is outside the {n}x{m} matrix")


def content_of(mono: Monomial, n: int, m: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    rc = [0] * n
    cc = [0] * m
    for v, e in mono:
        i, j = v.indices
        rc[i - 1] += e
        cc[j - 1] += e
    return tuple(rc), tuple(cc)


# ---------------------------------------------------------------- expansion


@lru_cache(maxsize=None)
def minor(rows: Tuple[int, ...], cols: Tuple[int, ...]) -> Poly:
    """Determinant of the submatrix of x on ``rows`` x ``cols``."""
    if len(rows) != len(cols):
        raise InputError("minor needs as many rows as columns")
    k = len(rows)
    if k == 0:
        return Poly.const(1)
    if k == 1:
        return Poly.var(xvar(rows[0], cols[0]))
    acc = []
    r0, rest = rows[0], rows[1:]
    for idx, c in enumerate(cols):
        sub = minor(rest, cols[:idx] + cols[idx + 1:])
        term = sub * Poly.var(xvar(r0, c))
        acc.append(term if idx % 2 == 0 else -term)
    return poly_sum(acc)


def expand_bideterminant(b: Bitableau) -> Poly:
    """Product of the row minors of a bitableau."""
    out = Poly.const(1)
    for r, c in zip(b.left.rows, b.right.rows):
        out = out * minor(r, c)
    return out


def symbolic_det(mat: Sequence[Sequence[Poly]]) -> Poly:
    """Laplace expansion along the first row, memoized on column sets."""
    n = len(mat)
    if n == 0:
        return Poly.const(1)
    memo: Dict[Tuple[int, Tuple[int, ...]], Poly] = {}

    def rec(row: int, cols: Tuple[int, ...]) -> Poly:
        if row == n:
            return Poly.const(1)
        key = (row, cols)
        if key in memo:
            return memo[key]
        parts = []
        for idx, c in enumerate(cols):
            a = mat[row][c]
            if a.is_zero():
                continue
            sub = rec(row + 1, cols[:idx] + cols[idx + 1:])
            if sub.is_zero():
                continue
            t = a * sub
            parts.append(t if idx % 2 == 0 else -t)
        memo[key] = poly_sum(parts)
        return memo[key]

    return rec(0, tuple(range(n)))


# ---------------------------------------------------------------- straightening


@dataclass
class _Block:
    basis: List[Bitableau]
    monos: List[Monomial]
    index: Dict[Monomial, int]
    matrix: List[List[int]]
    inverse: Optional[List[List[Rat]]] = None


@lru_cache(maxsize=4096)
def _block(n: int, m: int, rc: Tuple[int, ...], cc: Tuple[int, ...]) -> _Block:
    basis = standard_bitableaux(n, m, rc, cc)
    expansions = [expand_bideterminant(b) for b in basis]
    monos = sorted({mm for p in expansions for (mm, _), _ in p.items()})
    index = {mm: i for i, mm in enumerate(monos)}
    mat = [[0] * len(basis) for _ in monos]
    for j, p in enumerate(expansions):
        for (mm, _), c in p.items():
            mat[index[mm]][j] = c
    return _Block(basis, monos, index, mat)


def _block_inverse(blk: _Block) -> List[List[Rat]]:
    if blk.inverse is None:
        k = len(blk.basis)
        if len(blk.monos) != k:
            raise ArithmeticError("content block is not square")
        ident = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
        blk.inverse = linalg.solve(blk.matrix, ident)
    return blk.inverse


def block_rank(n: int, m: int, rc: Sequence[int], cc: Sequence[int]) -> Tuple[int, int, int]:
    """(rank, #standard bitableaux, #monomials) of one content block."""
    blk = _block(n, m, tuple(rc), tuple(cc))
    return linalg.rank(blk.matrix) if blk.basis else 0, len(blk.basis), len(blk.monos)


@dataclass
class StraightenResult:
    n: int
    m: int
    terms: List[Tuple[Bitableau, EpsScalar]] = field(default_factory=list)

    def support(self) -> List[Bitableau]:
        return [b for b, _ in self.terms]

    def min_width(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("min-width of the zero polynomial")
        return min(b.width for b, _ in self.terms)

    def expand(self) -> Poly:
        return poly_sum(Poly.from_scalar(c) * expand_bideterminant(b) for b, c in self.terms)

    def is_integral(self) -> bool:
        return all(type(c) is int for _, s in self.terms for c in s.terms.values())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "terms": [
                {"shape": list(b.shape), "left": [list(r) for r in b.left.rows],
                 "right": [list(r) for r in b.right.rows], "coef": c.to_json()}
                for b, c in self.terms
            ],
        }


def _term_key(item):
    b = item[0]
    return (shape_key(b.shape), b.left.rows, b.right.rows)


def straighten(f: Poly, n: Optional[int] = None, m: Optional[int] = None) -> StraightenResult:
    """Expand ``f`` in standard bideterminants of the n x m generic matrix."""
    if n is None or m is None:
        n0, m0 = infer_shape(f)
        n, m = n or n0, m or m0
    check_context(f, n, m)
    # group by content block, then by eps exponent
    groups: Dict[Tuple[tuple, tuple], Dict[int, Dict[Monomial, Rat]]] = {}
    for (mono, e), c in f.items():
        key = content_of(mono, n, m)
        groups.setdefault(key, {}).setdefault(e, {})[mono] = c
    coef: Dict[Bitableau, Dict[int, Rat]] = {}
    for (rc, cc), slices in groups.items():
        blk = _block(n, m, rc, cc)
        inv = _block_inverse(blk)
        k = len(blk.basis)
        for e, vec in slices.items():
            b = [0] * k
            for mono, c in vec.items():
                b[blk.index[mono]] = c
            for j in range(k):
                row = inv[j]
                s = 0
                for i in range(k):
                    if b[i] and row[i]:
                        s += row[i] * b[i]
                s = _norm(s) if type(s) is Fraction else s
                if s:
                    coef.setdefault(blk.basis[j], {})[e] = s
    terms = [(bt, EpsScalar(d)) for bt, d in coef.items()]
    terms.sort(key=_term_key)
    return StraightenResult(n, m, terms)


def min_width(f: Poly, n: Optional[int] = None, m: Optional[int] = None) -> int:
    if f.is_zero():
        raise ZeroPolynomial("min-width of the zero polynomial")
    return straighten(f, n, m).min_width()


def is_in_det_ideal(f: Poly, r: int, n: Optional[int] = None, m: Optional[int] = None) -> bool:
    """Membership in the ideal of r x r minors by the width criterion."""
    if f.is_zero():
        return True
    if r <= 0:
        return True
    return straighten(f, n, m).min_width() >= r


# ---------------------------------------------------------------- brute force


def contingency_tables(rc: Sequence[int], cc: Sequence[int]) -> Iterator[Dict[Tuple[int, int], int]]:
    """Nonnegative integer matrices with the given row and column sums."""
    n, m = len(rc), len(cc)
    cells = [(i, j) for i in range(n) for j in range(m)]
    rows_left = list(rc)
    cols_left = list(cc)
    cur: Dict[Tuple[int, int], int] = {}

    def rec(k: int):
        if k == len(cells):
            if not any(rows_left) and not any(cols_left):
                yield dict(cur)
            return
        i, j = cells[k]
        hi = min(rows_left[i], cols_left[j])
        if j == m - 1:
            # the last cell of a row takes whatever the row still needs
            if rows_left[i] > cols_left[j]:
                return
            lo = hi = rows_left[i]
        else:
            lo = 0
        for v in range(lo, hi + 1):
            rows_left[i] -= v
            cols_left[j] -= v
            if v:
                cur[(i + 1, j + 1)] = v
            yield from rec(k + 1)
            cur.pop((i + 1, j + 1), None)
            rows_left[i] += v
            cols_left[j] += v

    yield from rec(0)


def _ideal_block_generators(n: int, m: int, r: int, rc: Tuple[int, ...], cc: Tuple[int, ...]) -> List[Poly]:
    gens = []
    rows_avail = [i + 1 for i in range(n) if rc[i]]
    cols_avail = [j + 1 for j in range(m) if cc[j]]
    for R in itertools.combinations(rows_avail, r):
        rc2 = list(rc)
        for i in R:
            rc2[i - 1] -= 1
        for C in itertools.combinations(cols_avail, r):
            cc2 = list(cc)
            for j in C:
                cc2[j - 1] -= 1
            mnr = minor(R, C)
            for tab in contingency_tables(rc2, cc2):
                mono = tuple(sorted((xvar(i, j), e) for (i, j), e in tab.items()))
                gens.append(mnr * Poly.monomial(mono))
    return gens


def brute_force_membership(f: Poly, r: int, n: Optional[int] = None, m: Optional[int] = None) -> bool:
    """Membership decided by spanning sets of monomial times minor.

    Independent of straightening: each content block and eps slice of f
    must lie in the span of the products of an r x r minor with a
    monomial that have the same content.
    """
    if f.is_zero() or r <= 0:
        return True
    if n is None or m is None:
        n0, m0 = infer_shape(f)
        n, m = n or n0, m or m0
    check_context(f, n, m)
    if r > min(n, m):
        return False
    groups: Dict[Tuple[tuple, tuple], Dict[int, Dict[Monomial, Rat]]] = {}
    for (mono, e), c in f.items():
        groups.setdefault(content_of(mono, n, m), {}).setdefault(e, {})[mono] = c
    for (rc, cc), slices in groups.items():
        if sum(rc) < r:
            return False
        gens = _ideal_block_generators(n, m, r, rc, cc)
        if not gens:
            return False
        monos = sorted({mm for g in gens for (mm, _), _ in g.items()} |
                       {mm for vec in slices.values() for mm in vec})
        idx = {mm: i for i, mm in enumerate(monos)}
        rows = []
        for g in gens:
            row = [0] * len(monos)
            for (mm, _), c in g.items():
                row[idx[mm]] = c
            rows.append(row)
        base = linalg.rank(rows)
        for vec in slices.values():
            t = [0] * len(monos)
            for mm, c in vec.items():
                t[idx[mm]] = c
            if linalg.rank(rows + [t]) != base:
                return False
    return True


def _block_size_at_most(rc: Sequence[int], cc: Sequence[int], limit: int) -> bool:
    for k, _ in enumerate(contingency_tables(rc, cc)):
        if k >= limit:
            return False
    return True


def vanishes_below_rank(f: Poly, r: int, n: int, m: int) -> bool:
    """Whether f vanishes on the generic n x m matrix of rank r - 1."""
    if r <= 0:
        return True
    forms = {
        xvar(i, j): poly_sum(Poly.var(VarId("y", (i, l))) * Poly.var(VarId("z", (l, j))) for l in range(1, r))
        for i in range(1, n + 1) for j in range(1, m + 1)
    }
    return f.substitute(forms).is_zero()


def width_at_least(f: Poly, r: int, n: Optional[int] = None, m: Optional[int] = None,
                   max_block: int = 600) -> Tuple[bool, str]:
    """Whether every bideterminant in the expansion of f has width >= r.

    Straightens when each content block has at most ``max_block``
    monomials.  Larger blocks use the equivalent test that f vanishes on
    matrices of rank r - 1.  Returns the answer and the method used.
    """
    if n is None or m is None:
        n0, m0 = infer_shape(f)
        n, m = n or n0, m or m0
    check_context(f, n, m)
    if f.is_zero() or r <= 0:
        return True, "trivial"
    blocks = {content_of(mono, n, m) for mono in f.monomials()}
    if all(_block_size_at_most(rc, cc, max_block) for rc, cc in blocks):
        return straighten(f, n, m).min_width() >= r, "straightening"
    return vanishes_below_rank(f, r, n, m), "rank"
