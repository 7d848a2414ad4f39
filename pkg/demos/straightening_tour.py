"""
Straightening and ideal membership
==================================

Every polynomial in the entries of a generic matrix has a unique
expansion in standard bideterminants.  The shortest first row appearing
in that expansion decides membership in the ideal of r x r minors.
"""
from detideals import parse_poly, straighten
from detideals.straightening import brute_force_membership, is_in_det_ideal, symbolic_det, generic_matrix

###############################################################################
# A 2 x 2 warm-up
# ---------------
# ``x12 x21`` is not standard: its column tableau is decreasing.  It
# rewrites as the standard ``x11 x22`` minus the full minor.

f = parse_poly("x[1,2]*x[2,1]")
res = straighten(f, 2, 2)
for bt, coef in res.terms:
    print(f"{str(coef.coeff(0)):>3} * {bt}")
print("round trip exact:", res.expand() == f)

###############################################################################
# Membership by width
# -------------------
# ``x11 * det3`` lies in every ideal I_r up to r = 3; a product of entries
# only in I_1.

det3 = symbolic_det(generic_matrix(3, 3))
samples = {
    "x11 * det3": parse_poly("x[1,1]") * det3,
    "x11 * x22 * x33": parse_poly("x[1,1]*x[2,2]*x[3,3]"),
    "(12|12)(13|23)": parse_poly("(x[1,1]*x[2,2]-x[1,2]*x[2,1])*(x[1,2]*x[3,3]-x[1,3]*x[3,2])"),
}
print()
print(f"{'polynomial':<18}{'min width':>10}  members of I_1..I_3")
for name, p in samples.items():
    res = straighten(p, 3, 3)
    flags = ["yes" if is_in_det_ideal(p, r, 3, 3) else "no" for r in (1, 2, 3)]
    print(f"{name:<18}{res.min_width():>10}  {' '.join(flags)}")

###############################################################################
# An independent check
# --------------------
# The span test uses only products of minors with monomials, never the
# straightening law, yet it gives the same answers.

agree = all(
    is_in_det_ideal(p, r, 3, 3) == brute_force_membership(p, r, 3, 3)
    for p in samples.values() for r in (1, 2, 3)
)
print("\nspan test agrees:", agree)
