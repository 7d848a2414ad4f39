"""
From an ideal element to an oracle circuit
==========================================

An element of the ideal of r x r minors can be degenerated by a linear
change of variables until only one bideterminant survives at the lowest
power of eps.  Feeding a Valiant-style matrix into that single
bideterminant lets one oracle gate compute any small branching program.
"""
from detideals import parse_poly
from detideals.abp import eval_abp, path_abp
from detideals.degeneration import k_bideterminant, reduce_to_single_bideterminant
from detideals.oracle_compose import DELTA, compose_projection, substitute_oracle_with_approx
from detideals.exact_poly import Poly

f = parse_poly("(x[1,1]*x[2,2]-x[1,2]*x[2,1])*x[3,3] + 2*(x[1,2]*x[2,3]-x[1,3]*x[2,2])*x[3,1]")
print("f =", f)

###############################################################################
# Reduce to one bideterminant
# ---------------------------
# The prediction (which bideterminant wins and at which eps power) comes
# from the straightening; the substitution is then applied exactly.

red = reduce_to_single_bideterminant(f, 2, 3, 3)
print("surviving shape:", red.sigma, " eps power:", red.q, " coefficient:", red.alpha)
image = red.subst.apply(f, eps_cutoff=red.q)
print("lowest slice is alpha * (K|K):", image.eps_slice(red.q) == k_bideterminant(red.sigma) * red.alpha)

###############################################################################
# Compose with a program
# ----------------------
# With r = 2 we may embed programs with at most two vertices; one edge
# labelled ``3 y1 - 1`` is enough to see the mechanism.

prog = path_abp([parse_poly("3*y[1] - 1")])
circuit = compose_projection(f, 2, prog, 3, 3, reduction=red)
out = circuit.evaluate()
print("\ncircuit transcript:", {k: circuit.info[k] for k in ("q", "t", "N", "sigma")})
print("eps^0 part of the output:", out.eps_slice(0))
print("program computes:        ", eval_abp(prog))

###############################################################################
# Approximate oracles
# -------------------
# If the oracle is only known up to terms divisible by delta, raising
# delta to a large enough power of eps leaves the output unchanged.

h = circuit.oracle + Poly.var(DELTA) * parse_poly("x[1,1]**3")
approx, big_n = substitute_oracle_with_approx(circuit, h)
print("\ndelta = eps^%d keeps the output:" % big_n, approx.evaluate().eps_slice(0) == out.eps_slice(0))
