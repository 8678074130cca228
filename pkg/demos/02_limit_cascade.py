"""
The limit cascade by hand
=========================

Walk through the coefficients of a branch with fractional exponents and
compare them with the series-reversion oracle.
"""

from fractions import Fraction

from gasymptote import (CurveParam, all_asymptotes, approach_distance, branch_series,
                        branch_series_oracle, find_poles, pow_rational,
                        PuiseuxSeries)
from gasymptote.branches import local_series

p = CurveParam.from_strings("(sqrt(s)+1)/(sqrt(s)*sin(s))", "(s^2+s+5)/sin(s)")
(pole,) = find_poles(p, window=(-1, 1, -1, 1))
print(f"pole {pole.tau}: gamma = {pole.gamma}, nbar = {pole.nbar}")
for i, (u, n) in enumerate(pole.orders, start=1):
    print(f"  component {i}: numerator vanishes to order {u}, denominator to order {n}")

###############################################################################
# With s = h^2 both coordinates become Laurent series in h. The first has a
# pole of order 3, the second of order 2.

P = local_series(p, pole, 0, 8)
Q = local_series(p, pole, 1, 8)
for name, s in (("P", P), ("Q", Q)):
    shown = PuiseuxSeries.from_dict(dict(s.terms), s.truncation, 0, "h").truncate(2)
    print(f"{name}(h) = {shown} + O(h^2)")

###############################################################################
# Each step multiplies by P^(1/3) and reads off the constant term. The first
# factor P^(-2/3) scales Q down to a bounded function.

root = pow_rational(P, Fraction(1, 3))
f = Q * pow_rational(P, Fraction(-2, 3))
for j in range(2, -4, -1):
    if j != 2:
        f = root * f
    a = f.as_dict().get(Fraction(0), 0)
    print(f"a_{j} = {a}")
    f = f.drop(0)

###############################################################################
# Series reversion gets the same numbers independently: solve P^(-1/3) = w
# for h and substitute into Q.

b = branch_series(p, pole)
oracle = branch_series_oracle(p, pole)
print("\ncascade:", b.series)
print("oracle: ", oracle.series)

###############################################################################
# The asymptote drops the negative powers. Sampling the curve where |x| = R
# shows how fast it closes in.

(a,) = all_asymptotes(p, window=(-1, 1, -1, 1))
print("\nasymptote:", a)
for r, d in zip((10, 100, 1000, 10000), approach_distance(p, pole, a)):
    print(f"  R = {r:>6}: distance {d:.6f}")
