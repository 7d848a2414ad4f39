"""
Low-rank generators, condensers and proof certificates
======================================================

A polynomial vanishes on all matrices of rank < r exactly when it lies
in the ideal of r x r minors.  Rank condensers try to detect rank with a
few small matrices; proof certificates for "X is invertible but has
rank < r" then yield explicit ideal elements.
"""
from fractions import Fraction

from detideals import linalg
from detideals.exact_poly import VarId
from detideals.ips import (
    build_rank_instance, compound_certificate, det_inversion_refutation, extract_ideal_element,
    extraction_width, inversion_system, verify_certificate,
)
from detideals.errors import NotInIdeal
from detideals.pit import (
    MatrixGenerator, apply_generator, fs_condenser, random_condenser, rank_lt_equations, recursive_generator,
)
from detideals.straightening import generic_matrix, symbolic_det, minor

###############################################################################
# Vanishing on low-rank matrices
# ------------------------------

det3 = symbolic_det(generic_matrix(3, 3))
for r in (1, 2, 3):
    print(f"det3 on rank <= {r}: {'vanishes' if apply_generator(det3, MatrixGenerator(3, 3, r)).is_zero() else 'nonzero'}")
print("minor (12|23) on rank <= 1:", apply_generator(minor((1, 2), (2, 3)), MatrixGenerator(3, 3, 1)).is_zero())

gen = recursive_generator(16, 3, (2, 2, 2))
print("\nthree composed stages:", gen.report())

###############################################################################
# A condenser that misses a matrix
# --------------------------------
# The condensed 2 x 2 minors det(E X E^T) all vanish at this invertible X
# for every Vandermonde-type E, so these equations alone cannot certify
# rank.

X = [[1, 0, 1], [1, 0, 0], [Fraction(11, 9), 1, 1]]
point = {VarId("x", (i + 1, j + 1)): X[i][j] for i in range(3) for j in range(3)}
eqs = rank_lt_equations(3, 2, fs_condenser(3, 2))
print("\ndet X =", linalg.det(X), "; condensed minors at X:", [str(p.evaluate(point)) for p in eqs])
try:
    compound_certificate(build_rank_instance(3, 2, fs_condenser(3, 2)))
except NotInIdeal as exc:
    print("no compound certificate:", exc)

###############################################################################
# Certificates and what they give back
# ------------------------------------

for n in (1, 2, 3):
    print(f"n={n}: inversion refutation verifies: {verify_certificate(det_inversion_refutation(n), inversion_system(n))}")

system = build_rank_instance(3, 2, random_condenser(3, 2, 6, seed=0))
cert = compound_certificate(system)
print("\ngeneric condenser certificate verifies:", verify_certificate(cert, system))
h = extract_ideal_element(cert, system, check_width=False)
print("extracted h has", len(h), "terms, degree", h.degree())
print("h at X = Y = I:", h.evaluate({v: system.witness.get(v, 0) for v in system.variables}))
print("h in the ideal of 2 x 2 minors of [X | Y]:", extraction_width(h, system))
