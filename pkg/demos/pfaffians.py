"""
Pfaffians
=========

The skew-symmetric story runs in parallel: sub-Pfaffians replace minors,
standard monomials replace standard bideterminants, and the congruence
X -> P X P^T replaces row and column operations.
"""
from fractions import Fraction
import random

from detideals import linalg
from detideals.abp import eval_abp
from detideals.exact_poly import Poly
from detideals.pfaffian import (
    SkewContext, is_in_pfaff_ideal, k_monomial, pfaff_compose, pfaff_reduce, pfaffian, pfaffian_abp,
    skew_var, sub_pfaffian, subpfaff_embed,
)
from detideals.straightening import symbolic_det

###############################################################################
# Pf^2 = det, and the congruence rule
# -----------------------------------

for size in (2, 4, 6):
    m = SkewContext(size).matrix()
    print(f"order {size}: Pf^2 == det is {pfaffian(m) ** 2 == symbolic_det(m)}")

rng = random.Random(1)
a = [[Fraction(rng.randint(-3, 3)) for _ in range(4)] for _ in range(4)]
a = [[a[i][j] - a[j][i] for j in range(4)] for i in range(4)]
b = [[Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(4)] for _ in range(4)]
bab = [[sum(b[i][p] * a[p][q] * b[j][q] for p in range(4) for q in range(4)) for j in range(4)] for i in range(4)]
const = lambda mat: [[Poly.const(v) for v in row] for row in mat]
print("Pf(B A B^T) =", pfaffian(const(bab)).as_rat(), " det(B) Pf(A) =", linalg.det(b) * pfaffian(const(a)).as_rat())

###############################################################################
# Membership and reduction
# ------------------------

f = Poly.var(skew_var(1, 2)) * sub_pfaffian((1, 2, 3, 4)) - 2 * sub_pfaffian((2, 3, 5, 6))
print("\nin the ideal of 4 x 4 sub-Pfaffians:", is_in_pfaff_ideal(f, 4, 6))
red = pfaff_reduce(f, 2, 6)
print("reduces to shape", red.sigma, "at eps power", red.q, "with coefficient", red.alpha)
print("slice check:", red.slice == k_monomial(red.sigma) * red.alpha)

###############################################################################
# Embedding determinants
# ----------------------
# Interleaving rows and columns of [[0, A], [-A^T, 0]] makes every leading
# 2k x 2k Pfaffian equal to the leading k x k minor of A.

A = [[Poly.const(v) for v in row] for row in [[2, 1, 0], [1, 3, 1], [0, 1, 4]]]
M = subpfaff_embed(A)
print()
for k in (1, 2, 3):
    print(f"k={k}: Pf = {pfaffian([row[:2 * k] for row in M[:2 * k]]).as_rat():>3}, "
          f"det = {symbolic_det([row[:k] for row in A[:k]]).as_rat():>3}")

###############################################################################
# One oracle gate for a small Pfaffian
# ------------------------------------

pf6 = sub_pfaffian(tuple(range(1, 7)))
prog = pfaffian_abp(2)
out = pfaff_compose(pf6, 3, prog, 6).evaluate()
print("\nPf6 oracle computes", out.eps_slice(0), "==", eval_abp(prog))
