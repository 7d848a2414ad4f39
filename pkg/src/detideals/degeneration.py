"""Weight degenerations and the reduction of an ideal element to one bideterminant.

The reduction sends ``f`` to ``f(M X' N)`` where ``M`` and ``N`` are
products of elementary matrices in fresh variables and ``X'`` rescales
every entry by powers of two more fresh variables.  Replacing the fresh
variables by powers of eps that realize a lex order leaves, at the lowest
eps power, a scalar multiple of a single bideterminant ``(K|K)``.

Expanding ``f(M X' N)`` symbolically is hopeless beyond tiny cases, so the
lowest term is predicted from the straightening of ``f`` and then checked
by an exact evaluation that keeps only eps powers up to the prediction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .errors import InputError, NotInIdeal, VerificationFailed, ZeroPolynomial
from .exact_poly import EpsScalar, Monomial, MonomialOrder, Poly, Rat, VarId, leading, poly_sum
from .straightening import (
    check_context, expand_bideterminant, infer_shape, straighten, symbolic_det, xvar,
)
from .tableaux import Bitableau, Partition, chain_pairs, k_tableau, sub_chain

SCALE_ROW = VarId("aux", (1,))
SCALE_COL = VarId("aux", (2,))


def lam(i: int, j: int) -> VarId:
    return VarId("lam", (i, j))


def xi(i: int, j: int) -> VarId:
    return VarId("xi", (i, j))


# ---------------------------------------------------------------- degenerations


def single_degenerate(f: Poly, u: Mapping[VarId, int]) -> Tuple[Poly, int]:
    """Return eps^lam * f(eps^-u x) and lam = max <a, u> over the support."""
    if f.is_zero():
        raise ZeroPolynomial("cannot degenerate the zero polynomial")
    if f.has_eps():
        raise InputError("degeneration expects an eps-free polynomial")
    lam_ = max(sum(u.get(v, 0) * e for v, e in mono) for (mono, _), _ in f.items())
    terms = {}
    for (mono, _), c in f.items():
        terms[(mono, lam_ - sum(u.get(v, 0) * e for v, e in mono))] = c
    return Poly(terms), lam_


def face(f: Poly, u: Mapping[VarId, int]) -> Poly:
    """Sub-sum of ``f`` over the support points maximizing <a, u>."""
    best = max(sum(u.get(v, 0) * e for v, e in mono) for (mono, _), _ in f.items())
    return Poly({k: c for k, c in f.items() if sum(u.get(v, 0) * e for v, e in k[0]) == best})


def positional_weights(order: Sequence[VarId], bounds: Mapping[VarId, int]) -> Dict[VarId, int]:
    """Mixed-radix weights: w(last) = 1, w(k) = w(k+1) * (bound(k+1) + 1).

    For exponents within the bounds, comparing <w, a> is comparing a
    lexicographically in ``order``.
    """
    w: Dict[VarId, int] = {}
    acc = 1
    for v in reversed(list(order)):
        w[v] = acc
        acc *= bounds[v] + 1
    return w


def apply_eps_powers(f: Poly, assignment: Mapping[VarId, int], eps_cutoff: Optional[int] = None) -> Poly:
    """Substitute v -> eps^d for each (v, d) in ``assignment``."""
    return f.substitute({v: Poly.eps(d) for v, d in assignment.items()}, eps_cutoff=eps_cutoff)


def lex_degenerate_to_LC(
    f: Poly,
    order: MonomialOrder,
    method: str = "positional",
) -> Tuple[Dict[VarId, int], int]:
    """eps powers for the order's variables isolating the leading coefficient.

    Substituting ``v -> eps^d_v`` gives ``eps^m LC(f) + O(eps^(m+1))``.
    ``method`` is ``"positional"`` (one mixed-radix weight vector) or
    ``"iterative"`` (one single-variable degeneration per variable, glued
    by eps -> eps^(M+1)).
    """
    if f.is_zero():
        raise ZeroPolynomial("leading coefficient of the zero polynomial")
    if f.has_eps():
        raise InputError("degeneration expects an eps-free polynomial")
    if order.weights:
        raise InputError("lex_degenerate_to_LC needs a lexicographic order")
    active = list(order.variables)
    if method == "positional":
        bounds = {v: f.degree_in(v) for v in active}
        w = positional_weights(active, bounds)
        lm, _ = leading(f, order)
        m = -sum(w[v] * e for v, e in lm)
        return {v: -w[v] for v in active}, m
    if method == "iterative":
        return _iterative_lex(f, active)
    raise InputError(f"unknown method {method!r}")


def _iterative_lex(f: Poly, active: List[VarId]) -> Tuple[Dict[VarId, int], int]:
    aset = set(active)
    # F = eps^mk * f(eps^dk x), always with nonnegative eps exponents
    F = f.coefficients(lambda v: v in aset)
    F = {(a, 0): c for a, c in F.items()}
    d = {v: 0 for v in active}
    mk = 0
    for v in active:
        deg = lambda a: dict(a).get(v, 0)
        lam_ = max(deg(a) for (a, e) in F if e == 0)
        big_m = 0
        for (a, e) in F:
            if e >= 1:
                big_m = max(big_m, deg(a) - lam_)
        step = big_m + 1
        newF = {}
        for (a, e), c in F.items():
            newF[(a, e * step + lam_ - deg(a))] = c
        F = newF
        d = {w: dk * step for w, dk in d.items()}
        d[v] -= 1
        mk = lam_ + step * mk
    return d, -mk


# ---------------------------------------------------------------- transforms


def elementary(n: int, i: int, j: int, value: Poly) -> List[List[Poly]]:
    mat = [[Poly.const(1 if a == b else 0) for b in range(n)] for a in range(n)]
    mat[i - 1][j - 1] = value
    return mat


def antidiagonal(n: int) -> List[List[Poly]]:
    return [[Poly.const(1 if a + b == n - 1 else 0) for b in range(n)] for a in range(n)]


def matmul(a: Sequence[Sequence[Poly]], b: Sequence[Sequence[Poly]]) -> List[List[Poly]]:
    inner = len(b)
    return [
        [poly_sum(a[i][k] * b[k][j] for k in range(inner) if not a[i][k].is_zero() and not b[k][j].is_zero())
         for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def transpose_matrix(a: Sequence[Sequence[Poly]]) -> List[List[Poly]]:
    return [list(col) for col in zip(*a)]


def row_transform(n: int, family: str = "lam") -> List[List[Poly]]:
    """E(1,2) E(1,3) ... E(n-1,n) J_n with E(i,j) = I + v[i,j] e_ij."""
    if n < 1:
        raise InputError("row_transform needs n >= 1")
    out = [[Poly.const(1 if a == b else 0) for b in range(n)] for a in range(n)]
    for i, j in chain_pairs(n):
        out = matmul(out, elementary(n, i, j, Poly.var(VarId(family, (i, j)))))
    return matmul(out, antidiagonal(n))


def col_transform(m: int) -> List[List[Poly]]:
    """Transpose of the row transform in the xi variables.

    Multiplying on the right by E(j,i) = E(i,j)^T moves column j's
    multiple into column i, which is what replaces i by j in the column
    tableau.
    """
    return transpose_matrix(row_transform(m, "xi"))


def transform_det(mat: Sequence[Sequence[Poly]]) -> Poly:
    return symbolic_det(mat)


# ---------------------------------------------------------------- reduction


@dataclass
class LinearSubst:
    """v -> forms[v] for each v in ``variables``, linear with Laurent coefficients."""

    variables: List[VarId]
    forms: Dict[VarId, Poly]
    det_witness: Optional[EpsScalar] = None

    def coefficient_matrix(self) -> List[List[EpsScalar]]:
        rows = []
        for v in self.variables:
            by = self.forms[v].by_monomial()
            rows.append([by.get(((c, 1),), EpsScalar()) for c in self.variables])
        return rows

    def compute_witness(self) -> EpsScalar:
        self.det_witness = linalg.eps_det(self.coefficient_matrix())
        if self.det_witness.is_zero():
            raise VerificationFailed("substitution is not invertible")
        return self.det_witness

    def apply(self, f: Poly, eps_cutoff: Optional[int] = None) -> Poly:
        return f.substitute(self.forms, eps_cutoff=eps_cutoff)

    def to_json(self) -> dict:
        return {
            "variables": [str(v) for v in self.variables],
            "forms": {str(v): self.forms[v].to_json() for v in self.variables},
            "det_witness": None if self.det_witness is None else self.det_witness.to_json(),
        }


@dataclass
class ReductionResult:
    subst: LinearSubst
    q: int
    alpha: Rat
    sigma: Partition
    shape: Tuple[int, int] = (0, 0)
    weights: Dict[VarId, int] = field(default_factory=dict)
    leading_exponents: Dict[VarId, int] = field(default_factory=dict)
    slice: Optional[Poly] = None

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "alpha": str(self.alpha),
            "sigma": list(self.sigma),
            "shape": list(self.shape),
            "subst": self.subst.to_json(),
            "slice": None if self.slice is None else self.slice.to_json(),
        }


def k_bideterminant(sigma: Sequence[int]) -> Poly:
    k = k_tableau(sigma)
    return expand_bideterminant(Bitableau(k, k))


def index_counts(sigma: Sequence[int], size: int) -> List[int]:
    """How often each of 1..size occurs in K_sigma."""
    return [sum(1 for p in sigma if p >= i) for i in range(1, size + 1)]


def transformed_polynomial(f: Poly, n: int, m: int) -> Poly:
    """f(M X' N) in X, lam, xi and the two scaling variables, fully expanded.

    Only feasible for very small inputs; used to cross-check predictions.
    """
    big_d = f.degree()
    base = big_d + 1
    mm = row_transform(n)
    nn = col_transform(m)
    forms = {}
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            acc = []
            for k in range(1, n + 1):
                for l in range(1, m + 1):
                    coef = mm[i - 1][k - 1] * nn[l - 1][j - 1]
                    if coef.is_zero():
                        continue
                    scale = Poly.var(SCALE_ROW, base ** k) * Poly.var(SCALE_COL, base ** l)
                    acc.append(coef * scale * Poly.var(xvar(k, l)))
            forms[xvar(i, j)] = poly_sum(acc)
    return f.substitute(forms)


def reduction_order(n: int, m: int) -> List[VarId]:
    return [lam(i, j) for i, j in chain_pairs(n)] + [xi(i, j) for i, j in chain_pairs(m)] + [SCALE_ROW, SCALE_COL]


def _eval_matrix(mat: Sequence[Sequence[Poly]], powers: Mapping[VarId, int]) -> List[List[EpsScalar]]:
    sub = {v: Poly.eps(d) for v, d in powers.items()}
    return [[p.substitute(sub).as_scalar() for p in row] for row in mat]


def reduce_to_single_bideterminant(
    f: Poly,
    r: int,
    n: Optional[int] = None,
    m: Optional[int] = None,
    witness: bool = True,
    budget: Optional[int] = None,
) -> ReductionResult:
    """Linear substitution sending f to eps^q alpha (K|K) + O(eps^(q+1)).

    The result is verified exactly before it is returned.
    """
    if f.is_zero():
        raise ZeroPolynomial("cannot reduce the zero polynomial")
    if f.has_eps():
        raise InputError("reduction expects an eps-free polynomial")
    if n is None or m is None:
        n0, m0 = infer_shape(f)
        n, m = n or n0, m or m0
    check_context(f, n, m)
    st = straighten(f, n, m)
    if st.min_width() < r:
        raise NotInIdeal(f"polynomial uses a bideterminant of width {st.min_width()} < {r}")
    big_d = f.degree()
    base = big_d + 1
    order = reduction_order(n, m)

    def exponent_vector(b: Bitableau) -> Tuple[int, ...]:
        _, h_row = sub_chain(b.left, n)
        _, h_col = sub_chain(b.right, m)
        counts = index_counts(b.shape, max(n, m))
        ydeg = sum(counts[i - 1] * base ** i for i in range(1, n + 1))
        zdeg = sum(counts[j - 1] * base ** j for j in range(1, m + 1))
        return tuple(h_row) + tuple(h_col) + (ydeg, zdeg)

    vectors = [(exponent_vector(b), b) for b, _ in st.terms]
    top = max(v for v, _ in vectors)
    winners = [b for v, b in vectors if v == top]
    if len(winners) != 1:
        raise VerificationFailed("leading bideterminant is not unique")
    sigma = winners[0].shape
    bounds = {v: big_d for v in order}
    bounds[SCALE_ROW] = big_d * base ** n
    bounds[SCALE_COL] = big_d * base ** m
    w = positional_weights(order, bounds)
    lead = dict(zip(order, top))
    q = -sum(w[v] * e for v, e in lead.items())

    powers = {v: -w[v] for v in order}
    pm = _eval_matrix(row_transform(n), powers)
    pn = _eval_matrix(col_transform(m), powers)
    forms: Dict[VarId, Poly] = {}
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            terms = {}
            for k in range(1, n + 1):
                a = pm[i - 1][k - 1]
                if a.is_zero():
                    continue
                for l in range(1, m + 1):
                    b = pn[l - 1][j - 1]
                    if b.is_zero():
                        continue
                    shift = powers[SCALE_ROW] * base ** k + powers[SCALE_COL] * base ** l
                    for e, c in (a * b).terms.items():
                        terms[(((xvar(k, l), 1),), e + shift)] = c
            forms[xvar(i, j)] = Poly(terms)
    subst = LinearSubst([xvar(i, j) for i in range(1, n + 1) for j in range(1, m + 1)], forms)
    image = f.substitute(forms, eps_cutoff=q, budget=budget)
    kk = k_bideterminant(sigma)
    if image.is_zero() or image.eps_order() != q:
        raise VerificationFailed("lowest eps power differs from the prediction")
    sl = image.eps_slice(q)
    diag: Monomial = tuple(sorted((xvar(i, i), sum(1 for p in sigma if p >= i)) for i in range(1, sigma[0] + 1)))
    alpha = sl.coeff(diag).coeff(0)
    if not alpha or sl != kk * alpha:
        raise VerificationFailed("lowest eps slice is not a multiple of (K|K)")
    if witness:
        subst.compute_witness()
    return ReductionResult(subst, q, alpha, sigma, (n, m), w, lead, sl)
