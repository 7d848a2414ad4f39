"""Fraction-free Gaussian elimination with deterministic pivoting.

Rational matrices are scaled row by row to integers and eliminated with
Bareiss' one-step division, so every intermediate entry is an integer
minor.  The same routine runs over Laurent polynomials in epsilon, where
the exact division is polynomial long division.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

from .exact_poly import EpsScalar, Rat, _norm

Matrix = List[List[Rat]]


def _integer_rows(rows: Sequence[Sequence[Rat]]) -> List[List[int]]:
    out = []
    for row in rows:
        d = 1
        for c in row:
            if type(c) is Fraction:
                d = lcm(d, c.denominator)
        out.append([int(c * d) for c in row])
    return out


def echelon(rows: Sequence[Sequence[int]], ncols: Optional[int] = None) -> Tuple[List[List[int]], List[int]]:
    """Bareiss forward elimination on an integer matrix.

    Returns the echelon rows and the pivot columns.  The pivot in each
    column is the first remaining row with a nonzero entry.
    """
    a = [list(r) for r in rows]
    if not a:
        return [], []
    ncols = len(a[0]) if ncols is None else ncols
    pivots: List[int] = []
    prev = 1
    r = 0
    nrows = len(a)
    for col in range(ncols):
        p = next((i for i in range(r, nrows) if a[i][col]), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        piv = a[r][col]
        pr = a[r]
        for i in range(r + 1, nrows):
            ai = a[i]
            f = ai[col]
            if f:
                for j in range(col + 1, ncols):
                    ai[j] = (piv * ai[j] - f * pr[j]) // prev
                ai[col] = 0
            elif piv != prev:
                for j in range(col + 1, ncols):
                    if ai[j]:
                        ai[j] = piv * ai[j] // prev
        prev = piv
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence[Rat]]) -> int:
    if not rows:
        return 0
    _, piv = echelon(_integer_rows(rows))
    return len(piv)


def det(rows: Sequence[Sequence[Rat]]) -> Rat:
    n = len(rows)
    if n == 0:
        return 1
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    scale = Fraction(1)
    ints = []
    for row in rows:
        d = 1
        for c in row:
            if type(c) is Fraction:
                d = lcm(d, c.denominator)
        scale /= d
        ints.append([int(c * d) for c in row])
    # track row swaps by eliminating a copy that keeps the original order
    a = ints
    sign = 1
    prev = 1
    for col in range(n):
        p = next((i for i in range(col, n) if a[i][col]), None)
        if p is None:
            return 0
        if p != col:
            a[col], a[p] = a[p], a[col]
            sign = -sign
        piv = a[col][col]
        for i in range(col + 1, n):
            f = a[i][col]
            for j in range(col + 1, n):
                a[i][j] = (piv * a[i][j] - f * a[col][j]) // prev
            a[i][col] = 0
        prev = piv
    return _norm(sign * a[n - 1][n - 1] * scale)


def solve(a: Sequence[Sequence[Rat]], b: Sequence[Sequence[Rat]]) -> Optional[List[List[Rat]]]:
    """Solve ``a @ X = b`` exactly for ``a`` of full column rank.

    ``b`` holds one right-hand side per column.  Returns ``None`` when the
    system is inconsistent; raises when ``a`` is column-rank deficient.
    """
    nr = len(a)
    nc = len(a[0]) if nr else 0
    k = len(b[0]) if b else 0
    aug = [list(a[i]) + list(b[i]) for i in range(nr)]
    ints = _integer_rows(aug)
    ech, piv = echelon(ints, nc + k)
    apiv = [p for p in piv if p < nc]
    if len(apiv) < nc:
        raise ValueError("matrix is not of full column rank")
    if len(piv) > nc:
        return None
    xs = [[Fraction(0)] * k for _ in range(nc)]
    for row_i in range(nc - 1, -1, -1):
        row = ech[row_i]
        for t in range(k):
            acc = Fraction(row[nc + t])
            for j in range(row_i + 1, nc):
                if row[j]:
                    acc -= row[j] * xs[j][t]
            xs[row_i][t] = acc / row[row_i]
    return [[_norm(c) for c in r] for r in xs]


def in_span(generators: Sequence[Sequence[Rat]], target: Sequence[Rat]) -> bool:
    """Whether ``target`` is a rational combination of ``generators``."""
    if not any(target):
        return True
    if not generators:
        return False
    base = rank(generators)
    return rank(list(generators) + [list(target)]) == base


# ---------------------------------------------------------------- over Q[eps, 1/eps]


def eps_rank(rows: Sequence[Sequence[EpsScalar]]) -> int:
    """Rank over the field of rational functions in epsilon."""
    a = [[EpsScalar.coerce(c) for c in r] for r in rows]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    prev = EpsScalar.const(1)
    r = 0
    for col in range(ncols):
        p = next((i for i in range(r, nrows) if not a[i][col].is_zero()), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][col]
        for i in range(r + 1, nrows):
            f = a[i][col]
            for j in range(col + 1, ncols):
                a[i][j] = (piv * a[i][j] - f * a[r][j]).exact_div(prev)
            a[i][col] = EpsScalar()
        prev = piv
        r += 1
        if r == nrows:
            break
    return r


def eps_det(rows: Sequence[Sequence[EpsScalar]]) -> EpsScalar:
    """Determinant of a square matrix over Q[eps, 1/eps]."""
    a = [[EpsScalar.coerce(c) for c in r] for r in rows]
    n = len(a)
    if n == 0:
        return EpsScalar.const(1)
    sign = 1
    prev = EpsScalar.const(1)
    for col in range(n):
        p = next((i for i in range(col, n) if not a[i][col].is_zero()), None)
        if p is None:
            return EpsScalar()
        if p != col:
            a[col], a[p] = a[p], a[col]
            sign = -sign
        piv = a[col][col]
        for i in range(col + 1, n):
            f = a[i][col]
            for j in range(col + 1, n):
                a[i][j] = (piv * a[i][j] - f * a[col][j]).exact_div(prev)
            a[i][col] = EpsScalar()
        prev = piv
    return a[n - 1][n - 1] * sign
