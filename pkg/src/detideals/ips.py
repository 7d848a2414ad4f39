"""Ideal Proof System certificates for rank systems.

A certificate for axioms f_1..f_m is a polynomial C(x, p_1..p_m) in the
original variables and one placeholder per axiom with C(x, 0) = 0 and
C(x, f(x)) = 1.  When the axioms split into a hard part and a part with a
known common zero, substituting 0 for the hard placeholders and the
axioms for the rest leaves 1 - h with h a nonzero element of the ideal
of the hard axioms.

Variables: X is x[i,j], Y is y[i,j].  Placeholders: z[k] for the
condensed rank axioms, w[i,j] for XY - I, u[i,j] and v[i,j] for the
boolean axioms on X and Y.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import linalg
from .errors import (
    CertificateInvalid, CondenserTooSmall, InputError, NoWitness, NotInIdeal, VariableMismatch,
    VerificationFailed,
)
from .exact_poly import Poly, Rat, VarId, poly_sum, rat
from .pit import RankCondenser, rank_lt_equations
from .straightening import generic_matrix, symbolic_det, width_at_least

HARD = "hard"
REST = "rest"


def _v(family: str, *idx: int) -> VarId:
    return VarId(family, tuple(idx))


@dataclass
class Axiom:
    name: str
    poly: Poly
    role: str
    placeholder: VarId


@dataclass
class AxiomSystem:
    axioms: List[Axiom]
    variables: List[VarId]
    witness: Optional[Dict[VarId, Rat]] = None
    n: Optional[int] = None
    r: Optional[int] = None
    info: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        holders = [a.placeholder for a in self.axioms]
        if len(set(holders)) != len(holders):
            raise InputError("placeholders must be distinct")
        if set(holders) & set(self.variables):
            raise InputError("placeholders overlap the system's variables")
        for a in self.axioms:
            if a.role not in (HARD, REST):
                raise InputError(f"unknown axiom role {a.role!r}")

    @property
    def hard(self) -> List[Axiom]:
        return [a for a in self.axioms if a.role == HARD]

    @property
    def rest(self) -> List[Axiom]:
        return [a for a in self.axioms if a.role == REST]

    @property
    def placeholders(self) -> List[VarId]:
        return [a.placeholder for a in self.axioms]

    def check_witness(self) -> bool:
        if self.witness is None:
            return False
        point = {v: self.witness.get(v, 0) for v in self.variables}
        return all(a.poly.evaluate(point) == 0 for a in self.rest)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "variables": [str(v) for v in self.variables],
            "axioms": [
                {"name": a.name, "role": a.role, "placeholder": str(a.placeholder), "poly": a.poly.to_json()}
                for a in self.axioms
            ],
            "witness": None if self.witness is None else {str(v): str(c) for v, c in sorted(self.witness.items())},
            "info": self.info,
        }

    @classmethod
    def from_json(cls, data) -> "AxiomSystem":
        from .exact_poly import parse_var

        if isinstance(data, str):
            data = json.loads(data)
        try:
            axioms = [Axiom(a["name"], Poly.from_json(a["poly"]), a["role"], parse_var(a["placeholder"]))
                      for a in data["axioms"]]
            variables = [parse_var(v) for v in data["variables"]]
            wit = data.get("witness")
            witness = None if wit is None else {parse_var(k): rat(c) for k, c in wit.items()}
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad axiom system JSON: {exc}") from exc
        return cls(axioms, variables, witness, data.get("n"), data.get("r"), data.get("info", {}))


@dataclass
class IPSCertificate:
    c: Poly
    verified: bool = False

    def to_json(self) -> dict:
        return {"certificate": self.c.to_json(), "verified": self.verified}

    @classmethod
    def from_json(cls, data) -> "IPSCertificate":
        if isinstance(data, str):
            data = json.loads(data)
        body = data.get("certificate", data)
        return cls(Poly.from_json(body))


# ---------------------------------------------------------------- systems


def identity_condenser(n: int) -> RankCondenser:
    return RankCondenser([[[1 if i == j else 0 for j in range(n)] for i in range(n)]], n, 0)


def _matrix_vars(n: int):
    xs = [_v("x", i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    ys = [_v("y", i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    return xs, ys


def build_rank_instance(n: int, r: int, c: RankCondenser, include_boolean: bool = True) -> AxiomSystem:
    """det(E X E^T) = 0 for E in c (hard), XY = I and optionally X, Y boolean (rest)."""
    if not 1 <= r <= n:
        raise InputError(f"need 1 <= r <= n, got r = {r}")
    if len(c) < 2 * r * (n - r) + 1:
        raise CondenserTooSmall(f"need {2 * r * (n - r) + 1} matrices, got {len(c)}")
    xs, ys = _matrix_vars(n)
    X = generic_matrix(n, n)
    Y = [[Poly.var(_v("y", i, j)) for j in range(1, n + 1)] for i in range(1, n + 1)]
    axioms = []
    for k, p in enumerate(rank_lt_equations(n, r, c), 1):
        axioms.append(Axiom(f"rank[{k}]", p, HARD, _v("z", k)))
    for i in range(n):
        for j in range(n):
            p = poly_sum(X[i][k] * Y[k][j] for k in range(n)) - Poly.const(1 if i == j else 0)
            axioms.append(Axiom(f"inverse[{i + 1},{j + 1}]", p, REST, _v("w", i + 1, j + 1)))
    if include_boolean:
        for fam, mat, holder in (("x", X, "u"), ("y", Y, "v")):
            for i in range(n):
                for j in range(n):
                    e = mat[i][j]
                    axioms.append(Axiom(f"bool_{fam}[{i + 1},{j + 1}]", e * e - e, REST, _v(holder, i + 1, j + 1)))
    witness = {v: (1 if v.indices[0] == v.indices[1] else 0) for v in xs + ys}
    system = AxiomSystem(axioms, xs + ys, witness, n, r, {"condenser": [[[str(v) for v in row] for row in e] for e in c.matrices]})
    if not system.check_witness():
        raise VerificationFailed("X = Y = I does not satisfy the satisfiable part")
    return system


# ---------------------------------------------------------------- verification


def verify_certificate(cert: IPSCertificate, system: AxiomSystem) -> bool:
    """C(x, 0) = 0 and C(x, axioms) = 1, by exact substitution."""
    allowed = set(system.variables) | set(system.placeholders)
    extra = [v for v in cert.c.variables() if v not in allowed]
    if extra:
        raise VariableMismatch(f"certificate uses unknown variables: {', '.join(map(str, extra))}")
    if cert.c.has_eps():
        raise InputError("certificates must be eps-free")
    zero = {a.placeholder: Poly.zero() for a in system.axioms}
    full = {a.placeholder: a.poly for a in system.axioms}
    ok = cert.c.substitute(zero).is_zero() and cert.c.substitute(full) == Poly.const(1)
    cert.verified = ok
    return ok


def det_inversion_refutation(n: int) -> IPSCertificate:
    """1 - det(W + I) + z[1] det(Y) for {det(X) = 0, XY - I = 0}."""
    if n < 1:
        raise InputError("n must be positive")
    W = [[Poly.var(_v("w", i, j)) + Poly.const(1 if i == j else 0) for j in range(1, n + 1)] for i in range(1, n + 1)]
    Y = [[Poly.var(_v("y", i, j)) for j in range(1, n + 1)] for i in range(1, n + 1)]
    c = Poly.const(1) - symbolic_det(W) + Poly.var(_v("z", 1)) * symbolic_det(Y)
    return IPSCertificate(c)


def inversion_system(n: int) -> AxiomSystem:
    return build_rank_instance(n, n, identity_condenser(n), include_boolean=False)


# ---------------------------------------------------------------- certificates from compounds


def _compound_decomposition(n: int, r: int):
    """Polynomials a_P(X) with det(X)^e = sum_P a_P(X) s_P(X).

    s_P runs over the symmetrized entries of the r-th compound matrix:
    m_SS, and m_ST + m_TS for S < T.  Needs an odd number of r-subsets,
    so that the skew part of the compound has zero determinant.
    """
    subsets = list(itertools.combinations(range(1, n + 1), r))
    k = len(subsets)
    if k % 2 == 0:
        raise NotInIdeal("compound of even order: the skew part can have nonzero determinant")
    from .straightening import minor

    pairs = [(a, b) for a in range(k) for b in range(a, k)]
    sym = {p: _v("aux", 100 + i) for i, p in enumerate(pairs)}
    skew = {p: _v("aux", 1000 + i) for i, p in enumerate(pairs) if p[0] != p[1]}
    half = Poly.const(rat("1/2"))
    mat = [[None] * k for _ in range(k)]
    for a, b in pairs:
        if a == b:
            mat[a][a] = Poly.var(sym[(a, a)])
        else:
            s, t = Poly.var(sym[(a, b)]) * half, Poly.var(skew[(a, b)])
            mat[a][b] = s + t
            mat[b][a] = s - t
    d = symbolic_det(mat)
    order = [sym[p] for p in pairs]
    parts: Dict[Tuple[int, int], Dict] = {p: {} for p in pairs}
    for (mono, e), coef in d.items():
        hit = next((v for v in order if v in dict(mono)), None)
        if hit is None:
            raise VerificationFailed("skew part of the compound has nonzero determinant")
        p = pairs[order.index(hit)]
        rest = tuple((v, x - 1) if v == hit else (v, x) for v, x in mono)
        rest = tuple((v, x) for v, x in rest if x)
        parts[p][(rest, e)] = coef
    m = {(a, b): minor(subsets[a], subsets[b]) for a in range(k) for b in range(k)}
    back = {}
    for a, b in pairs:
        back[sym[(a, b)]] = m[(a, a)] if a == b else m[(a, b)] + m[(b, a)]
        if a != b:
            back[skew[(a, b)]] = (m[(a, b)] - m[(b, a)]) * half
    coeffs = {p: Poly(t).substitute(back) for p, t in parts.items()}
    s_val = {p: back[sym[p]] for p in pairs}
    return pairs, subsets, coeffs, s_val


def compound_certificate(system: AxiomSystem) -> IPSCertificate:
    """Certificate for a rank system whose hard axioms span the symmetrized compound.

    By Cauchy-Binet det(E X E^T) = sum p_S(E) p_T(E) m_ST with p the r x r
    minors of E, so it is a combination of the symmetrized compound
    entries s_P.  If the hard axioms span all s_P, then
    det(X)^e = sum_k b_k(X) f_k with e = binom(n-1, r-1), and

        C = sum_k b_k(X) det(Y)^e z_k + 1 - det(W + I)^e

    is a certificate, since det(X)^e det(Y)^e = det(XY)^e.
    """
    n, r = system.n, system.r
    if n is None or r is None:
        raise InputError("system does not record n and r")
    cond = system.info.get("condenser")
    if cond is None:
        raise InputError("system does not record its condenser matrices")
    from math import comb

    pairs, subsets, coeffs, s_val = _compound_decomposition(n, r)
    hard = system.hard
    # Cauchy-Binet coefficient of s_P in each hard axiom
    rows = []
    for e in cond:
        e = [[rat(v) for v in row] for row in e]
        p = [linalg.det([[e[i][c - 1] for c in sub] for i in range(r)]) for sub in subsets]
        rows.append([p[a] * p[b] for a, b in pairs])
    for row, ax in zip(rows, hard):
        if poly_sum(s_val[pr] * Poly.const(c) for pr, c in zip(pairs, row)) != ax.poly:
            raise VerificationFailed(f"axiom {ax.name} does not match its Cauchy-Binet expansion")
    # pick independent axioms and invert on them
    tr = [list(col) for col in zip(*rows)]
    _, piv = linalg.echelon(linalg._integer_rows(tr))
    if len(piv) < len(pairs):
        raise NotInIdeal(f"hard axioms span only {len(piv)} of {len(pairs)} symmetrized compound entries")
    square = [rows[k] for k in piv]
    # lam[P][k]: s_P = sum_k lam f_k, i.e. (square^T) lam^T = I
    sol = linalg.solve([list(col) for col in zip(*square)], [[1 if i == j else 0 for j in range(len(pairs))] for i in range(len(pairs))])
    expo = comb(n - 1, r - 1)
    Y = [[Poly.var(_v("y", i, j)) for j in range(1, n + 1)] for i in range(1, n + 1)]
    W = [[Poly.var(_v("w", i, j)) + Poly.const(1 if i == j else 0) for j in range(1, n + 1)] for i in range(1, n + 1)]
    det_y = symbolic_det(Y) ** expo
    total = []
    for idx, k in enumerate(piv):
        b_k = poly_sum(coeffs[pr] * Poly.const(sol[idx][col]) for col, pr in enumerate(pairs) if sol[idx][col])
        total.append(b_k * det_y * Poly.var(hard[k].placeholder))
    c = poly_sum(total) + Poly.const(1) - symbolic_det(W) ** expo
    return IPSCertificate(c)


# ---------------------------------------------------------------- extraction


def extract_ideal_element(cert: IPSCertificate, system: AxiomSystem, check_width: bool = True) -> Poly:
    """h = 1 - C(x, hard -> 0, rest -> axioms), a nonzero element of the hard ideal.

    Nonzeroness is certified by h(witness) = 1.  For rank systems h is
    also checked to lie in the ideal of r x r minors of [X | Y].
    """
    if not cert.verified and not verify_certificate(cert, system):
        raise CertificateInvalid("certificate does not verify against the system")
    if system.witness is None or not system.check_witness():
        raise NoWitness("the satisfiable part has no recorded common zero")
    sub = {a.placeholder: (Poly.zero() if a.role == HARD else a.poly) for a in system.axioms}
    h = Poly.const(1) - cert.c.substitute(sub)
    point = {v: system.witness.get(v, 0) for v in system.variables}
    if h.evaluate(point) != 1:
        raise CertificateInvalid("extracted element does not take the value 1 at the witness")
    if check_width and system.r is not None and system.n is not None:
        ok, _ = extraction_width(h, system)
        if not ok:
            raise VerificationFailed(f"extracted element is not in the ideal of {system.r} x {system.r} minors")
    return h


def as_wide_matrix(h: Poly, n: int) -> Poly:
    """Rename y[i,j] to x[i, n+j] so that [X | Y] is one n x 2n matrix."""
    return h.map_vars(lambda v: _v("x", v.indices[0], n + v.indices[1]) if v.family == "y" else v)


def extraction_width(h: Poly, system: AxiomSystem) -> Tuple[bool, str]:
    return width_at_least(as_wide_matrix(h, system.n), system.r, system.n, 2 * system.n)
