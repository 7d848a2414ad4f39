"""Hasse derivatives and dimensions of partial-derivative spaces.

The a-th Hasse derivative sends x^b to prod binom(b_i, a_i) x^(b - a).
Over characteristic 0 it is the ordinary derivative divided by a!, so
the spans agree with those of ordinary partials.
"""
from __future__ import annotations

import itertools
from math import comb
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .errors import InputError, ZeroPolynomial
from .exact_poly import EpsScalar, Poly, VarId, poly_sum
from .straightening import expand_bideterminant
from .tableaux import Bitableau

DerivIndex = Mapping[VarId, int]


def _as_index(a: DerivIndex) -> Dict[VarId, int]:
    out = {}
    for v, k in dict(a).items():
        if k < 0:
            raise InputError(f"negative derivative order for {v}")
        if k:
            out[v] = k
    return out


def hasse(f: Poly, a: DerivIndex) -> Poly:
    a = _as_index(a)
    if not a:
        return f
    terms = {}
    for (mono, e), c in f.items():
        b = dict(mono)
        coef = c
        for v, k in a.items():
            have = b.get(v, 0)
            if have < k:
                coef = 0
                break
            coef *= comb(have, k)
        if not coef:
            continue
        rest = tuple((v, b[v] - a.get(v, 0)) for v in sorted(b) if b[v] - a.get(v, 0))
        terms[(rest, e)] = coef
    return Poly(terms)


def derivative_indices(f: Poly, order: Optional[int] = None) -> List[Tuple[Tuple[VarId, int], ...]]:
    """Exponent vectors of total size <= order dominated by a support monomial.

    Any other index kills every term of f, so these span the whole space.
    """
    seen = set()
    for mono in f.monomials():
        ranges = [range(e + 1) for _, e in mono]
        names = [v for v, _ in mono]
        for combo in itertools.product(*ranges):
            if order is not None and sum(combo) > order:
                continue
            seen.add(tuple((v, k) for v, k in zip(names, combo) if k))
    return sorted(seen, key=lambda a: (sum(k for _, k in a), a))


def derivatives(f: Poly, order: Optional[int] = None) -> List[Poly]:
    return [hasse(f, dict(a)) for a in derivative_indices(f, order)]


def span_dim(polys: Sequence[Poly]) -> int:
    """Dimension of the span, over Q or over Q(eps) when eps occurs."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return 0
    monos = sorted({mm for p in polys for mm in p.monomials()})
    pos = {mm: i for i, mm in enumerate(monos)}
    if not any(p.has_eps() for p in polys):
        rows = []
        for p in polys:
            row = [0] * len(monos)
            for (mm, _), c in p.items():
                row[pos[mm]] = c
            rows.append(row)
        return linalg.rank(rows)
    rows = []
    for p in polys:
        row = [EpsScalar() for _ in monos]
        for mm, s in p.by_monomial().items():
            row[pos[mm]] = s
        rows.append(row)
    return linalg.eps_rank(rows)


def deriv_space_dim(f: Poly, order: Optional[int] = None) -> int:
    """dim of the span of all Hasse derivatives of order <= ``order`` (None: all)."""
    if f.is_zero():
        raise ZeroPolynomial("derivative space of the zero polynomial")
    if order is not None and order < 0:
        raise InputError("derivative order must be nonnegative")
    return span_dim(derivatives(f, order))


def linear_image(f: Poly, variables: Sequence[VarId], a: Sequence[Sequence[object]]) -> Poly:
    """f(A x): variables[i] -> sum_j A[i][j] variables[j]."""
    k = len(variables)
    if len(a) != k or any(len(row) != k for row in a):
        raise InputError("matrix size does not match the variable list")
    forms = {}
    for i, v in enumerate(variables):
        forms[v] = poly_sum(Poly.from_scalar(EpsScalar.coerce(c)) * Poly.var(variables[j])
                            for j, c in enumerate(a[i]) if not EpsScalar.coerce(c).is_zero())
    return f.substitute(forms)


def dim_under_substitution(f: Poly, a: Sequence[Sequence[object]], variables: Optional[Sequence[VarId]] = None) -> dict:
    """Compare dim of bounded-order derivative spaces of f(x) and f(A x).

    The transformed dimension must equal the original for invertible A and
    may only drop otherwise.
    """
    if f.is_zero():
        raise ZeroPolynomial("derivative space of the zero polynomial")
    variables = list(variables) if variables is not None else f.variables()
    g = linear_image(f, variables, a)
    mat = [[EpsScalar.coerce(c) for c in row] for row in a]
    invertible = linalg.eps_rank(mat) == len(variables)
    rows = []
    ok = True
    for d in range(f.degree() + 1):
        before = deriv_space_dim(f, d)
        after = deriv_space_dim(g, d) if not g.is_zero() else 0
        holds = after == before if invertible else after <= before
        ok = ok and holds
        rows.append({"order": d, "original": before, "transformed": after, "holds": holds})
    return {"invertible": invertible, "ok": ok, "orders": rows}


def first_row_derivatives(b: Bitableau) -> List[Tuple[Tuple[int, ...], Tuple[int, ...], Poly]]:
    """d/dx_(R,C) (S|T) for all equal-size subsets R, C of the first rows.

    Each variable x[r_i, c_i] (R and C paired in sorted order) is
    differentiated once.  All results are nonzero with distinct
    multidegrees, giving binom(2w, w) independent derivatives for width w.
    """
    f = expand_bideterminant(b)
    top_s, top_t = b.left.rows[0], b.right.rows[0]
    out = []
    for size in range(len(top_s) + 1):
        for rows in itertools.combinations(top_s, size):
            for cols in itertools.combinations(top_t, size):
                idx = {VarId("x", (r, c)): 1 for r, c in zip(rows, cols)}
                out.append((rows, cols, hasse(f, idx)))
    return out
