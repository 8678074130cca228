"""
A space curve and a pole on another sheet
=========================================

Three coordinates with a fourth-root. The pole at 0 is found structurally;
the second pole solves 1 + w^(3/4) = 0, which has no solution for the
principal root and needs an explicit determination.
"""

import cmath

from gasymptote import CurveParam, find_poles, nd_asymptotes

principal = CurveParam.from_strings(
    "(sqrt(s+1)+2)^(1/4)/(s*(1+(sqrt(s+1)+2)^(3/4)))",
    "sqrt(sqrt(s+1)+2)/(1+(sqrt(s+1)+2)^(3/4))",
    "(s+3)/sin(s)")

###############################################################################
# At s = 0 the first and third coordinates blow up with simple poles and the
# asymptote is a line in space.

(a,) = nd_asymptotes(principal, window=(-1, 1, -1, 1))
print("asymptote at 0:", a)

###############################################################################
# pow(base, r, k) selects the determination exp(r (Log base + 2 pi i k)).
# With sqrt on sheet 1 and the outer powers on sheet -1, the denominator
# vanishes at a complex alpha that the Newton scan finds.

w = "pow(s+1, 1/2, 1) + 2"
sheet = CurveParam.from_strings(
    f"pow({w}, 1/4, -1)/(s*(1 + pow({w}, 3/4, -1)))",
    f"pow({w}, 1/2, -1)/(1 + pow({w}, 3/4, -1))",
    "(s+3)/sin(s)")

window = (4, 5, -5, -4)
(pole,) = find_poles(sheet, window)
print("\nalpha =", pole.tau)
print("defined by:", pole.equation)

(b,) = nd_asymptotes(sheet, window)
print("asymptote at alpha:", b)

###############################################################################
# The third coordinate is bounded at alpha, so its asymptote coordinate is
# the constant (alpha + 3)/sin(alpha).

print("(alpha+3)/sin(alpha) =", (pole.value + 3) / cmath.sin(pole.value))
