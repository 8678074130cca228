"""
Pole location and fractional-order classification.

Denominators are factored structurally. Polynomial factors go through
companion-matrix eigenvalues, ``sin``/``cos`` factors through their zero
lattices pulled back by a polynomial argument, fractional powers through the
roots of their base. Anything else is searched by a Newton grid scan.
"""

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import expr as ex
from .series import valuation

__all__ = [
    "PoleData", "PoleSearchError", "UnsupportedStructureError", "DEFAULT_WINDOW",
    "find_poles", "classify_orders", "pole_at", "in_window",
]

DEFAULT_WINDOW = (-10.0, 10.0, -10.0, 10.0)
MERGE_TOL = 1e-8


class PoleSearchError(ArithmeticError):
    pass


class UnsupportedStructureError(PoleSearchError):
    """A denominator factor outside the supported classes."""


@dataclass(frozen=True)
class PoleData:
    """A pole of a parametrization and its fractional orders.

    Attributes
    ----------
    tau : Fraction or complex
        Location. Exact ``Fraction`` when the pole is a verified rational.
    orders : tuple of (Fraction, Fraction)
        Per component, the vanishing orders of numerator and denominator.
    gamma : int
        lcm of the denominators of all orders.
    nbar : tuple of int
        Reduced blow-up orders ``gamma * (den_order - num_order)``.
    equation : str or None
        Defining equation for poles found numerically by a scan.
    """

    tau: object
    orders: tuple
    gamma: int
    nbar: tuple
    equation: str = field(default=None, compare=False)

    @property
    def value(self):
        return complex(self.tau)

    @property
    def is_real(self):
        return abs(self.value.imag) <= 1e-12 * (1 + abs(self.value))

    @property
    def pivot(self):
        """Index of the component with maximal blow-up (lowest on ties)."""
        return max(range(len(self.nbar)), key=lambda i: (self.nbar[i], -i))

    @property
    def beyond_hypotheses(self):
        return any(n < 0 for n in self.nbar)


def in_window(z, window, slack=1e-12):
    xmin, xmax, ymin, ymax = window
    z = complex(z)
    pad = slack * (1 + abs(z))
    return xmin - pad <= z.real <= xmax + pad and ymin - pad <= z.imag <= ymax + pad


def classify_orders(numerator, denominator, tau):
    """Vanishing orders ``(u/v, n/m)`` of numerator and denominator at ``tau``.

    ``None`` stands for the constant 1. An identically vanishing numerator
    is given the denominator's order, i.e. the component stays bounded.
    """
    den = Fraction(0) if denominator is None else valuation(denominator, tau)
    num = Fraction(0) if numerator is None else valuation(numerator, tau)
    if num == math.inf:
        num = den
    if den == math.inf:
        raise PoleSearchError(f"denominator vanishes identically near {tau}")
    return Fraction(num), Fraction(den)


def pole_at(p, tau, equation=None):
    """PoleData at ``tau``, or None if no component blows up there."""
    orders = tuple(classify_orders(p.numerator(i), p.denominator(i), tau)
                   for i in range(p.dimension))
    gamma = 1
    for u, n in orders:
        gamma = math.lcm(gamma, u.denominator, n.denominator)
    nbar = tuple(int((n - u) * gamma) for u, n in orders)
    if all(k <= 0 for k in nbar):
        return None
    return PoleData(tau, orders, gamma, nbar, equation)


# ===============
# Root candidates
# ===============

def _factors(e):
    """Multiplicative factors of ``e`` (constants dropped)."""
    if isinstance(e, ex.Mul):
        return _factors(e.left) + _factors(e.right)
    if isinstance(e, ex.Neg):
        return _factors(e.operand)
    if isinstance(e, ex.Pow) and e.exponent > 0 and e.sheet == 0:
        return _factors(e.base)
    if ex.is_constant(e):
        return []
    return [e]


def _exact_poly(coeffs):
    return all(isinstance(c, (int, Fraction)) for c in coeffs)


def _trim(coeffs):
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a = _trim(a[:-1]) if len(a) > 1 else a
        if len(a) == 1 and a[0] == 0:
            break
    return q, _trim(a)


def _poly_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while len(b) > 1 or b[0] != 0:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    return [c / a[-1] for c in a]


def _squarefree(coeffs):
    deriv = [k * c for k, c in enumerate(coeffs)][1:]
    g = _poly_gcd(coeffs, deriv)
    if len(g) == 1:
        return coeffs
    q, _ = _poly_divmod(coeffs, g)
    return _trim(q)


def _horner(coeffs, z):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _gaussian_value(coeffs, re, im):
    # exact evaluation at re + i*im with rational parts
    ar, ai = Fraction(0), Fraction(0)
    for c in reversed(coeffs):
        ar, ai = ar * re - ai * im + c, ar * im + ai * re
    return ar, ai


def _snap(coeffs, z):
    """Exact rational (or clean Gaussian rational) root near ``z``, if any."""
    re = Fraction(z.real).limit_denominator(10 ** 6)
    im = Fraction(z.imag).limit_denominator(10 ** 6)
    if abs(complex(float(re), float(im)) - z) > 1e-6 * (1 + abs(z)):
        return None
    if _gaussian_value(coeffs, re, im) != (0, 0):
        return None
    return re if im == 0 else complex(float(re), float(im))


def _polish(coeffs, z, multiplicity=1):
    # Newton on the (m-1)-th derivative restores full accuracy at a cluster
    c = [complex(x) for x in coeffs]
    for _ in range(multiplicity - 1):
        c = [k * x for k, x in enumerate(c)][1:]
    d = [k * x for k, x in enumerate(c)][1:]
    for _ in range(50):
        fd = _horner(d, z)
        if fd == 0:
            break
        step = _horner(c, z) / fd
        z -= step
        if abs(step) <= 1e-16 * (1 + abs(z)):
            break
    return z


def _cluster(roots, tol):
    groups = []
    for r in roots:
        for g in groups:
            if abs(g[0] - r) < tol * (1 + abs(r)):
                g.append(r)
                break
        else:
            groups.append([r])
    return [(sum(g) / len(g), len(g)) for g in groups]


def polynomial_roots(coeffs):
    """Distinct roots of an ascending coefficient list."""
    coeffs = _trim(coeffs)
    if len(coeffs) <= 1:
        return []
    out = []
    if _exact_poly(coeffs):
        sq = _squarefree([Fraction(c) for c in coeffs])
        raw = np.roots([complex(c) for c in reversed(sq)])
        for r in raw:
            z = _polish(sq, complex(r))
            snapped = _snap(sq, z)
            out.append(z if snapped is None else snapped)
        return out
    raw = np.roots([complex(c) for c in reversed(coeffs)])
    for z, m in _cluster([complex(r) for r in raw], 1e-5):
        out.append(_polish(coeffs, z, m))
    return out


def _max_modulus(coeffs, window):
    xmin, xmax, ymin, ymax = window
    xs = np.linspace(xmin, xmax, 41)
    ys = np.linspace(ymin, ymax, 41)
    grid = xs[None, :] + 1j * ys[:, None]
    vals = np.polyval([complex(c) for c in reversed(coeffs)], grid)
    return float(np.max(np.abs(vals)))


def _lattice_roots(coeffs, offset, window):
    # zeros of sin/cos(q): q(s) = offset + k*pi over the reachable k
    kmax = int(math.ceil(_max_modulus(coeffs, window) / math.pi)) + 1
    out = []
    for k in range(-kmax, kmax + 1):
        shift = offset + k * math.pi
        if shift == 0:
            out.extend(polynomial_roots(coeffs))
            continue
        shifted = [complex(c) for c in coeffs]
        shifted[0] -= shift
        out.extend(polynomial_roots(shifted))
    return out


def _scan_roots(f, window, grid=24):
    """Newton grid scan for zeros of ``f`` inside ``window``."""
    xmin, xmax, ymin, ymax = window
    found = []
    for x in np.linspace(xmin, xmax, grid):
        for y in np.linspace(ymin, ymax, grid):
            z = complex(x, y)
            try:
                for _ in range(60):
                    h = 1e-7 * (1 + abs(z))
                    d = (f(z + h) - f(z - h)) / (2 * h)
                    if d == 0 or not cmath.isfinite(d):
                        break
                    step = f(z) / d
                    z -= step
                    if abs(step) <= 1e-15 * (1 + abs(z)):
                        break
                if abs(f(z)) < 1e-10 and in_window(z, window):
                    found.append(z)
            except (ex.PoleError, ValueError, OverflowError, ZeroDivisionError):
                continue
    return found


def _factor_roots(factor, window, scan_general):
    """List of (root, equation-or-None) for one denominator factor."""
    poly = ex.as_polynomial(factor)
    if poly is not None:
        return [(r, None) for r in polynomial_roots(poly)]
    if isinstance(factor, ex.Pow):
        if factor.sheet == 0 or factor.exponent > 0:
            return _factor_roots(factor.base, window, scan_general)
    if isinstance(factor, ex.Func):
        if factor.name == "exp":
            return []
        arg = ex.as_polynomial(factor.arg)
        if arg is not None:
            offset = 0.0 if factor.name == "sin" else math.pi / 2
            return [(r, None) for r in _lattice_roots(arg, offset, window)]
    if not scan_general:
        raise UnsupportedStructureError(
            f"unsupported denominator factor: {ex.to_string(factor)}")
    equation = f"{ex.to_string(factor)} = 0"
    return [(r, equation) for r in _scan_roots(lambda z: ex.evaluate(factor, z), window)]


def _merge(candidates):
    merged = []
    for z, eq in candidates:
        zc = complex(z)
        for k, (w, weq) in enumerate(merged):
            wc = complex(w)
            if abs(zc - wc) < MERGE_TOL * (1 + abs(wc)):
                # prefer exact and unannotated representatives
                if isinstance(z, Fraction) and not isinstance(w, Fraction):
                    merged[k] = (z, weq if eq is None else eq)
                elif weq is not None and eq is None:
                    merged[k] = (w, None)
                break
        else:
            merged.append((z, eq))
    return merged


def _sort_key(z):
    z = complex(z)
    return (round(z.real, 9), round(z.imag, 9))


def find_poles(p, window=DEFAULT_WINDOW, scan_general=True):
    """Poles of any component of ``p`` inside ``window``.

    Parameters
    ----------
    p : CurveParam
    window : tuple
        ``(xmin, xmax, ymin, ymax)``.
    scan_general : bool
        Search unsupported denominator factors with a Newton grid scan
        instead of raising :class:`UnsupportedStructureError`.

    Returns
    -------
    list of PoleData
        Sorted by real part, then imaginary part.
    """
    xmin, xmax, ymin, ymax = window
    if not (xmin <= xmax and ymin <= ymax):
        raise ValueError(f"invalid window {window}")
    candidates = []
    for i in range(p.dimension):
        den = p.denominator(i)
        if den is None:
            continue
        for factor in _factors(den):
            for z, eq in _factor_roots(factor, window, scan_general):
                if in_window(z, window):
                    candidates.append((z, eq))
    poles = []
    for z, eq in sorted(_merge(candidates), key=lambda t: _sort_key(t[0])):
        pole = pole_at(p, z, eq)
        if pole is not None:
            poles.append(pole)
    return poles
