"""
Asymptotes of a rational plane curve
====================================

A rational parametrization with poles at 0, 1 and +-I. Each pole gives one
infinity branch; the generalized asymptote is the polynomial part of that
branch.
"""

import cmath
import math

from gasymptote import (CurveParam, all_asymptotes, branch_series, equivalent,
                        find_poles)
from gasymptote.asymptotes import GAsymptote

p = CurveParam.from_strings("(3*s^4-s-4+5*s^3)/((s-1)*s^3*(s^2+1))",
                            "(2*s^2-7*s+2)/((s-1)*s^2)")

###############################################################################
# Poles and their blow-up orders. The pivot is the coordinate that blows up
# fastest; its order is the ramification index of the branch.

for pole in find_poles(p):
    print(f"tau = {pole.tau}: nbar = {pole.nbar}, pivot = {pole.pivot + 1}")

###############################################################################
# The branch at tau = 1 is a Laurent series in z = x. Its nonnegative part
# is the line y = 17 - 2x; the tail says how fast the curve approaches it.

b = branch_series(p, find_poles(p)[-1])
print("\nbranch at 1:", b.series)

###############################################################################
# At tau = 0 the first coordinate has a triple pole and the second only a
# double one, so the branch lives in powers of z^(1/3).

b0 = branch_series(p, find_poles(p)[1])
print("branch at 0:", b0.series)

###############################################################################
# All four asymptotes. The two at +-I are complex horizontal lines.

asymptotes = all_asymptotes(p)
for a in asymptotes:
    print(f"  {a.kind:16s} {a}")

###############################################################################
# The cubic asymptote is only defined up to t -> xi t with xi^3 = 1. A
# different leaf of z^(1/3) gives rotated coefficients describing the same
# curve.

cubic = asymptotes[1]
xi = cmath.exp(2j * math.pi / 3)
rotated = GAsymptote("generic", 3,
                     (tuple(c * xi ** j for j, c in enumerate(cubic.component_polynomials[0])),),
                     1, 0, cubic.infinity_point)
print("\nrotated leaf:", rotated)
print("equivalent:", equivalent(cubic, rotated))
