"""Curves and reference values shared by the test modules."""

import cmath
import math

from gasymptote import CurveParam

RATIONAL = ("(3*s^4-s-4+5*s^3)/((s-1)*s^3*(s^2+1))", "(2*s^2-7*s+2)/((s-1)*s^2)")
SQRT_SIN = ("(sqrt(s)+1)/(sqrt(s)*sin(s))", "(s^2+s+5)/sin(s)")
COS_SIN = ("(cos(s)-1)/(s^(3/2)*sin(s))", "sin(s*pi)/(s^(1/2)*sin(s))")

# principal determinations: the pole at 0
SPACE = ("(sqrt(s+1)+2)^(1/4)/(s*(1+(sqrt(s+1)+2)^(3/4)))",
       "sqrt(sqrt(s+1)+2)/(1+(sqrt(s+1)+2)^(3/4))",
       "(s+3)/sin(s)")

# the second pole needs the determination on which w^(3/4) = -1 is solvable
_W = "pow(s+1, 1/2, 1) + 2"
SPACE_SHEET = (f"pow({_W}, 1/4, -1)/(s*(1 + pow({_W}, 3/4, -1)))",
             f"pow({_W}, 1/2, -1)/(1 + pow({_W}, 3/4, -1))",
             "(s+3)/sin(s)")

UNIT = (-1.0, 1.0, -1.0, 1.0)
ALPHA_WINDOW = (4.0, 5.0, -5.0, -4.0)

# w = exp(2 pi i/3) solves w^(3/4) = -1 on the sheet k = -1
ALPHA = complex(4.5, -2.5 * math.sqrt(3))


def alpha_residual(a):
    w = 2 - cmath.sqrt(a + 1)
    return abs(1 + cmath.exp(0.75 * (cmath.log(w) - 2j * math.pi)))


def alpha_slope(a):
    w = 2 - cmath.sqrt(a + 1)
    return cmath.exp(0.25 * (cmath.log(w) - 2j * math.pi)) * a


R3 = 3 ** 0.75
SPACE_ASYMPTOTE_AT_0 = (math.sqrt(3) / (1 + R3), R3 + 3 ** 1.5, (10 * R3 + 7) / (8 * (1 + R3)))

C = 2 ** (1 / 3)
S3 = math.sqrt(3)
# (t^3, 5/24 + b1 t + b2 t^2), one leaf of the cubic branch of RATIONAL at 0
RATIONAL_CUBIC = (5 / 24,
             -5 / 3 * C + 5j / 3 * C * S3,
             2 ** (-4 / 3) + 1j * 2 ** (-4 / 3) * S3)


def curve(texts):
    return CurveParam.from_strings(*texts)


def planted_curve(rng):
    """Rational curve with a known g-asymptote at ``s = 0``.

    ``p1 = s^-n + e1 s + e2 s^2`` and ``p2 = q(1/s) + c1 s + c2 s^2 + c3 s^3``
    with ``deg q <= n``, so the perturbations only reach negative powers of
    ``z = p1`` and the asymptote is ``(t^n, q(t))`` before reduction.

    Returns
    -------
    texts : tuple of str
    n : int
    q : list of int
        Ascending coefficients of ``q``.
    """
    n = rng.randint(1, 4)
    d = rng.randint(1, n)
    q = [rng.randint(-5, 5) for _ in range(d + 1)]
    q[d] = q[d] or rng.choice([-3, -2, -1, 1, 2, 3])
    # zero out a middle coefficient now and then to exercise the gcd reduction
    for j in range(1, d):
        if rng.random() < 0.3:
            q[j] = 0
    e1, e2 = rng.randint(-4, 4), rng.randint(-4, 4)
    tail = [rng.randint(-4, 4) for _ in range(3)]
    p1 = f"s^(-{n}) + ({e1})*s + ({e2})*s^2"
    p2 = " + ".join([f"({q[0]})"] + [f"({c})*s^(-{j})" for j, c in enumerate(q) if j]
                    + [f"({c})*s^{k}" for k, c in enumerate(tail, start=1)])
    return (p1, p2), n, q


def planted_asymptote(n, q):
    """Expected reduced asymptote data ``(base_exponent, ascending coefficients)``."""
    beta = n
    for j, c in enumerate(q):
        if j and c:
            beta = math.gcd(beta, j)
    poly = [0] * ((len(q) - 1) // beta + 1)
    for j, c in enumerate(q):
        if c:
            poly[j // beta] = c
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return n // beta, poly
