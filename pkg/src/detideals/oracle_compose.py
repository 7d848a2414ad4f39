"""Depth-three circuits with one oracle gate that approximate small ABPs.

Given f in the ideal of r x r minors and a program g on at most r
vertices, the reduction of f, the Valiant matrix of the homogenized
program and two rescalings combine into affine forms F such that

    (f(F) - c0) / c1 = g + O(eps)

for an eps-free constant c0 and an eps-monomial c1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

from .abp import (
    LayeredABP, det_abp, embed_top_left, eval_abp, homogenize_abp, imm_abp, pad_front, valiant_matrix,
)
from .degeneration import ReductionResult, reduce_to_single_bideterminant
from .errors import (
    InputError, NotAnApproximation, TooManyVertices, UnsupportedCharacteristic, VerificationFailed,
)
from .exact_poly import EpsScalar, Poly, Rat, VarId, poly_sum

DELTA = VarId("aux", (0,))
HOM = VarId("aux", (3,))


@dataclass
class DepthThreeOracleCircuit:
    """inputs -> oracle -> (value - c0) / c1.

    ``inputs`` maps each oracle variable to an affine form in the target
    variables with Laurent coefficients.  The oracle may mention ``DELTA``;
    it is then evaluated at DELTA = eps^oracle_power.
    """

    inputs: Dict[VarId, Poly]
    oracle: Poly
    c0: EpsScalar
    c1: EpsScalar
    oracle_power: int = 1
    info: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.c1.is_zero() or not self.c1.is_monomial():
            raise InputError("the top gate must divide by a nonzero eps monomial")

    @property
    def bottom_gates(self) -> int:
        return len(self.inputs)

    def evaluate(self, full: bool = False, budget: Optional[int] = None) -> Poly:
        """Circuit output; exact in every eps power <= 0 unless ``full``."""
        (e1, _), = self.c1.terms.items()
        oracle = self.oracle
        if DELTA in oracle.variables():
            oracle = oracle.substitute({DELTA: Poly.eps(self.oracle_power)})
        cutoff = None if full else e1
        value = oracle.substitute(self.inputs, eps_cutoff=cutoff, budget=budget)
        return (value - Poly.from_scalar(self.c0)) / self.c1

    def to_json(self) -> dict:
        return {
            "inputs": {str(v): p.to_json() for v, p in sorted(self.inputs.items())},
            "oracle": self.oracle.to_json(),
            "oracle_power": self.oracle_power,
            "c0": self.c0.to_json(),
            "c1": self.c1.to_json(),
            "info": {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.info.items()},
        }


def _substitution_order(terms: Poly, q: int, length: int) -> int:
    """Smallest N with every error term past eps^(qN + length) after eps->eps^N, delta->eps."""
    big_n = 1
    for (mono, e), _ in terms.items():
        if e <= q:
            continue
        k = dict(mono).get(DELTA, 0)
        if length - k >= 0:
            big_n = max(big_n, (length - k) // (e - q) + 1)
    return big_n


def compose_projection(
    f: Poly,
    r: int,
    g: LayeredABP,
    n: Optional[int] = None,
    m: Optional[int] = None,
    characteristic: int = 0,
    reduction: Optional[ReductionResult] = None,
) -> DepthThreeOracleCircuit:
    """Circuit computing g + O(eps) with a single f-oracle gate."""
    if characteristic != 0:
        raise UnsupportedCharacteristic("only characteristic 0 is implemented")
    check_program(g, r)
    red = reduction or reduce_to_single_bideterminant(f, r, n, m)
    n, m = red.shape
    hom = homogenize_abp(g, HOM)
    big = embed_top_left(pad_front(valiant_matrix(hom), r), n, m)
    entries = {VarId("x", (i + 1, j + 1)): big[i][j] for i in range(n) for j in range(m)}
    t = sum(1 for p in red.sigma if p >= r)
    return assemble_circuit(f, red, entries, red.alpha, t, g, hom)


def check_program(g: LayeredABP, r: int) -> None:
    if g.vertex_count > r:
        raise TooManyVertices(f"program has {g.vertex_count} vertices, more than r = {r}")
    for lab in g.edges.values():
        if lab.has_eps():
            raise InputError("composition expects eps-free edge labels")
    if HOM in g.variables() or DELTA in g.variables():
        raise InputError("program uses a reserved auxiliary variable")


def assemble_circuit(
    f: Poly,
    red: ReductionResult,
    entries: Dict[VarId, Poly],
    kappa: Rat,
    t: int,
    g: LayeredABP,
    hom: LayeredABP,
) -> DepthThreeOracleCircuit:
    """Shared tail of the determinant and Pfaffian constructions.

    ``entries`` gives the matrix built from the homogenized program.  The
    reduced image of f at it must be eps^q kappa (1 + g_hom)^t + O(eps^(q+1)).
    """
    target = eval_abp(g)
    length = hom.length
    q = red.q
    # y -> delta*y and the homogenizing variable -> delta
    scale = {v: Poly.var(DELTA) * Poly.var(v) for v in g.variables()}
    scale[HOM] = Poly.var(DELTA)
    entry = {v: p.substitute(scale) for v, p in entries.items()}
    forms = {}
    for v, form in red.subst.forms.items():
        parts = []
        for (mono, e), c in form.items():
            (xv, _), = mono
            parts.append(entry[xv] * Poly.const(c, e))
        forms[v] = poly_sum(parts)
    h = f.substitute(forms, eps_cutoff=q + length)
    if h.is_zero() or h.eps_order() != q:
        raise VerificationFailed("composed polynomial has the wrong lowest eps power")
    dg = Poly.var(DELTA) ** length * target
    expected = (Poly.const(1) + dg) ** t * kappa
    if h.eps_slice(q) != expected:
        raise VerificationFailed("lowest slice is not kappa (1 + g)^t")
    big_n = _substitution_order(h, q, length)
    final_inputs = {}
    for v, form in forms.items():
        final_inputs[v] = form.eps_power_map(big_n).substitute({DELTA: Poly.eps(1)})
    c0 = EpsScalar.eps(q * big_n, kappa)
    c1 = EpsScalar.eps(q * big_n + length, kappa * t)
    circuit = DepthThreeOracleCircuit(
        final_inputs, f, c0, c1,
        info={"q": q, "t": t, "N": big_n, "sigma": tuple(red.sigma), "alpha": str(red.alpha),
              "kappa": str(kappa), "length": length},
    )
    out = circuit.evaluate()
    if any(e < 0 for (_, e), _ in out.items()) or out.eps_slice(0) != target:
        raise VerificationFailed("circuit output does not approximate the program")
    return circuit


def proj_to_det(f: Poly, r: int, t: int, n: Optional[int] = None, m: Optional[int] = None) -> DepthThreeOracleCircuit:
    """Circuit computing det_t(y) + O(eps) from an f-oracle."""
    prog = det_abp(t)
    if prog.vertex_count > r:
        raise TooManyVertices(f"det program for t={t} has {prog.vertex_count} vertices > r = {r}")
    return compose_projection(f, r, prog, n, m)


def proj_to_imm(f: Poly, r: int, w: int, d: int, n: Optional[int] = None, m: Optional[int] = None) -> DepthThreeOracleCircuit:
    """Circuit computing IMM_{w,d}(y) + O(eps) from an f-oracle."""
    if w * (d - 1) + 2 > r:
        raise TooManyVertices(f"IMM program has {w * (d - 1) + 2} vertices > r = {r}")
    return compose_projection(f, r, imm_abp(w, d), n, m)


def substitute_oracle_with_approx(c: DepthThreeOracleCircuit, h: Poly):
    """Swap the oracle for h(x, delta) with delta = eps^N.

    ``h`` must agree with the current oracle at delta = 0.  N is the
    smallest value keeping every output slice at eps powers <= 0.
    """
    exact = c.oracle.substitute({DELTA: Poly.zero()}) if DELTA in c.oracle.variables() else c.oracle
    if h.substitute({DELTA: Poly.zero()}) != exact:
        raise NotAnApproximation("approximation differs from the oracle at delta = 0")
    (e1, _), = c.c1.terms.items()
    err = h - exact
    bound = 0
    by_delta: Dict[int, Poly] = {}
    for (mono, e), coef in err.items():
        k = dict(mono).get(DELTA, 0)
        rest = tuple((v, p) for v, p in mono if v != DELTA)
        by_delta[k] = by_delta.get(k, Poly.zero()) + Poly.monomial(rest, coef, e)
    for k, part in sorted(by_delta.items()):
        if k == 0:
            raise NotAnApproximation("difference has a delta-free part")
        img = part.substitute(c.inputs, eps_cutoff=e1 - k)
        if img.is_zero():
            continue
        low = img.eps_order()
        # term lands at eps^(N k + low); it must stay above eps^e1
        need = (e1 - low) // k + 1
        bound = max(bound, need)
    big_n = max(1, bound)
    new = DepthThreeOracleCircuit(dict(c.inputs), h, c.c0, c.c1, big_n, dict(c.info, oracle_N=big_n))
    base = c.evaluate()
    out = new.evaluate()
    if any(e < 0 for (_, e), _ in out.items()) or out.eps_slice(0) != base.eps_slice(0):
        raise VerificationFailed("approximate oracle changed the output")
    return new, big_n
