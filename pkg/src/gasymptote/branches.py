"""
Infinity branches via the limit cascade.

Near a pole ``tau`` with ramification ``gamma`` we use the local uniformizer
``s = tau + h^gamma``. The component of maximal blow-up order (the pivot,
order ``N``) plays the role of ``z``; each other component is written as
``sum_j a_j z^(j/N)`` and the ``a_j`` are peeled off one at a time. Every
limit is the constant term of an exact series product, never a numeric
limit.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from scipy.optimize import least_squares

from .expr import PoleError, evaluate_mp
from .series import (INFINITY, PuiseuxSeries, compose, expand_at, pow_rational,
                     revert)

__all__ = [
    "InfinityBranch", "CascadeDivergence", "SamplingError", "COEF_TOL",
    "default_depth", "local_series", "branch_series", "branch_series_oracle",
    "infinity_point", "converge", "approach_distance", "DEFAULT_RADII",
]

COEF_TOL = 1e-9
DEFAULT_RADII = (10.0, 100.0, 1000.0, 10000.0)

# working precision for curve sampling near poles
_DPS = 50


class CascadeDivergence(ArithmeticError):
    """A cascade limit is infinite."""


class SamplingError(ArithmeticError):
    pass


@dataclass(frozen=True)
class InfinityBranch:
    """Branch at infinity of a parametrized curve.

    Attributes
    ----------
    pole : PoleData
    pivot : int
        Coordinate used as the branch variable ``z``.
    ramification_index : int
        ``N``; the series live in powers of ``z^(1/N)``.
    components : tuple of PuiseuxSeries
        One series per coordinate, centered at infinity in ``z`` (exponents
        stored for ``1/z``). The pivot entry is ``z`` itself.
    degree : int
    infinity_point : tuple
        Projective point with last coordinate 0.
    """

    pole: object
    pivot: int
    ramification_index: int
    components: tuple
    degree: int
    infinity_point: tuple

    @property
    def series(self):
        """Series of the first non-pivot coordinate (``r(z)`` in the plane)."""
        return self.components[1 if self.pivot == 0 else 0]

    def coefficients(self, i):
        """``{j: a_j}`` for coordinate ``i``, where ``a_j`` multiplies
        ``z^(j/N)``."""
        n = self.ramification_index
        return {int(-e * n): c for e, c in self.components[i].terms}

    def head(self, i):
        return {j: c for j, c in self.coefficients(i).items() if j >= 0}

    def tail(self, i):
        return {j: c for j, c in self.coefficients(i).items() if j < 0}


def default_depth(pole, tail_terms):
    top = max(max(pole.nbar), 0)
    return top + max(5, tail_terms + 2)


def local_series(p, pole, i, depth):
    """Component ``i`` in the uniformizer ``h`` to relative order ``depth``."""
    n = pole.nbar[i]
    absolute = Fraction(-n + depth, pole.gamma)
    s = expand_at(p.components[i], pole.tau, absolute)
    if s.truncation == math.inf:
        # exact (e.g. polynomial) data: roots and inverses need a finite order
        s = s.truncate(absolute)
    return s.scale_exponents(pole.gamma)


def _to_branch_series(coeffs, n, tail_terms):
    mapping = {Fraction(-j, n): c for j, c in coeffs.items()}
    return PuiseuxSeries.from_dict(mapping, Fraction(tail_terms + 1, n), INFINITY, "z")


def _degree(heads, n):
    g = n
    for head in heads:
        big = max((abs(c) for c in head.values()), default=0)
        for j, c in head.items():
            if j > 0 and abs(c) > COEF_TOL * max(big, 1e-300):
                g = math.gcd(g, j)
    return n // g


def _projective(pivot, heads, nbars, n, dim):
    coords = []
    for i in range(dim):
        if i == pivot:
            coords.append(Fraction(1))
        elif nbars[i] == n:
            coords.append(heads[i].get(n, Fraction(0)))
        else:
            coords.append(Fraction(0))
    lead = next(c for c in coords if abs(c) > COEF_TOL)
    if isinstance(lead, Fraction) and all(isinstance(c, Fraction) for c in coords):
        out = [c / lead for c in coords]
    else:
        out = [complex(c) / complex(lead) for c in coords]
    return tuple(out) + (Fraction(0),)


def _assemble(p, pole, coeffs, tail_terms):
    dim = p.dimension
    pivot = pole.pivot
    n = pole.nbar[pivot]
    comps = []
    heads = []
    for i in range(dim):
        if i == pivot:
            comps.append(PuiseuxSeries.monomial(Fraction(1), -1, INFINITY, "z"))
            heads.append({n: Fraction(1)})
            continue
        comps.append(_to_branch_series(coeffs[i], n, tail_terms))
        heads.append({j: c for j, c in coeffs[i].items() if j >= 0})
    others = [heads[i] for i in range(dim) if i != pivot]
    return InfinityBranch(
        pole=pole, pivot=pivot, ramification_index=n, components=tuple(comps),
        degree=_degree(others, n),
        infinity_point=_projective(pivot, heads, pole.nbar, n, dim))


def _check_depth(pole, tail_terms, depth):
    if tail_terms < 0:
        raise ValueError("tail_terms must be nonnegative")
    top = max(max(pole.nbar), 0)
    if depth is None:
        return Fraction(default_depth(pole, tail_terms))
    depth = Fraction(depth)
    if depth < top + tail_terms + 1:
        raise ValueError(f"depth {depth} too small; need at least {top + tail_terms + 1}")
    return depth


def branch_series(p, pole, tail_terms=3, depth=None):
    """Infinity branch at ``pole`` by the limit cascade.

    Parameters
    ----------
    p : CurveParam
    pole : PoleData
    tail_terms : int
        Number of negative-exponent terms to compute after the head.
    depth : int, optional
        Relative expansion order in the uniformizer; defaults to
        :func:`default_depth`.

    Raises
    ------
    CascadeDivergence
        If a limit has a negative leading exponent.
    """
    depth = _check_depth(pole, tail_terms, depth)
    pivot = pole.pivot
    n = pole.nbar[pivot]
    base = local_series(p, pole, pivot, depth)
    root = pow_rational(base, Fraction(1, n))
    coeffs = {}
    for i in range(p.dimension):
        if i == pivot:
            continue
        top = max(pole.nbar[i], 0)
        f = local_series(p, pole, i, depth)
        if top:
            f = f * pow_rational(base, Fraction(-top, n))
        found = {}
        for j in range(top, -tail_terms - 1, -1):
            if j != top:
                f = root * f
            if f.is_zero and f.truncation <= 0:
                raise CascadeDivergence(f"precision exhausted at coefficient {j}")
            if not f.is_zero and f.valuation < 0:
                raise CascadeDivergence(
                    f"limit for coefficient {j} of component {i + 1} diverges "
                    f"(leading exponent {f.valuation})")
            c = f.as_dict().get(Fraction(0), 0)
            if c != 0:
                found[j] = c
            f = f.drop(0)
        coeffs[i] = found
    return _assemble(p, pole, coeffs, tail_terms)


def branch_series_oracle(p, pole, tail_terms=3, depth=None):
    """Same branch as :func:`branch_series` by series reversion.

    With ``w = P^(-1/N)`` for the pivot series ``P``, solve for the
    uniformizer ``h(w)`` and substitute into every other component. The
    coefficient of ``w^(-j)`` is ``a_j``.
    """
    depth = _check_depth(pole, tail_terms, depth)
    pivot = pole.pivot
    n = pole.nbar[pivot]
    base = local_series(p, pole, pivot, depth)
    w = pow_rational(base, Fraction(-1, n))
    w = PuiseuxSeries.from_dict(dict(w.terms), w.truncation, 0, "w")
    h = revert(w, depth)
    coeffs = {}
    for i in range(p.dimension):
        if i == pivot:
            continue
        q = local_series(p, pole, i, depth)
        q = PuiseuxSeries.from_dict(dict(q.terms), q.truncation, 0, "h")
        composed = compose(q, h, cap=tail_terms + 1)
        if composed.truncation <= tail_terms:
            raise CascadeDivergence("insufficient precision in oracle composition")
        found = {}
        for e, c in composed.terms:
            if e.denominator != 1:
                raise CascadeDivergence(f"unexpected exponent {e} in oracle branch")
            j = -int(e)
            if j >= -tail_terms:
                found[j] = c
        coeffs[i] = found
    return _assemble(p, pole, coeffs, tail_terms)


def infinity_point(p, pole):
    """Projective infinity point associated with ``pole``.

    Built from the leading coefficients of the local expansions: the pivot
    coordinate is 1 and every coordinate with the same blow-up order gets
    its leading-coefficient ratio.
    """
    pivot = pole.pivot
    n = pole.nbar[pivot]
    lead = {}
    for i in range(p.dimension):
        s = local_series(p, pole, i, 1)
        lead[i] = s.leading()[1] if not s.is_zero else 0
    heads = []
    for i in range(p.dimension):
        if i == pivot:
            heads.append({n: Fraction(1)})
        elif pole.nbar[i] != n:
            heads.append({})
        elif isinstance(lead[i], Fraction) and isinstance(lead[pivot], Fraction):
            heads.append({n: lead[i] / lead[pivot]})
        else:
            heads.append({n: complex(lead[i]) / complex(lead[pivot])})
    return _projective(pivot, heads, pole.nbar, n, p.dimension)


def _close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def converge(b1, b2, tol=COEF_TOL):
    """True when the nonnegative heads agree on some pair of leaves."""
    if b1.pivot != b2.pivot or len(b1.components) != len(b2.components):
        return False
    n1, n2 = b1.ramification_index, b2.ramification_index
    big = math.lcm(n1, n2)
    dims = [i for i in range(len(b1.components)) if i != b1.pivot]
    heads1 = [{Fraction(j, n1): c for j, c in b1.head(i).items()} for i in dims]
    heads2 = [{Fraction(j, n2): c for j, c in b2.head(i).items()} for i in dims]
    for k in range(big):
        ok = True
        for h1, h2 in zip(heads1, heads2):
            for e in set(h1) | set(h2):
                # leaf k of b2: z^e picks up exp(2 pi i k e)
                rot = cmath.exp(2j * math.pi * k * float(e))
                if not _close(complex(h1.get(e, 0)), complex(h2.get(e, 0)) * rot, tol):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def _solve_radius(p, pole, radius):
    """Parameter near the pole where the pivot coordinate has modulus
    ``radius``.

    Newton runs on ``1/P(tau + h^gamma)`` in the uniformizer ``h``, which is
    regular at the pole. Starting from positive real ``h`` keeps the
    iteration on the sheet described by the local expansion. Everything is
    evaluated in extended precision since numerators often cancel near the
    pole.
    """
    pivot = pole.pivot
    n = pole.nbar[pivot]
    gamma = pole.gamma
    c = complex(local_series(p, pole, pivot, 1).leading()[1])
    comp = p.components[pivot]
    with mpmath.workdps(_DPS):
        tau = mpmath.mpc(pole.value)
        target = mpmath.mpf(radius) * mpmath.mpc(c) / abs(c)

        def g(h):
            return 1 / evaluate_mp(comp, tau + h ** gamma, _DPS) - 1 / target

        h = mpmath.mpc((abs(c) / radius) ** (1.0 / n))
        try:
            for _ in range(100):
                dh = mpmath.mpf(10) ** (-_DPS // 3) * abs(h)
                step = g(h) / ((g(h + dh) - g(h - dh)) / (2 * dh))
                h -= step
                if abs(step) <= mpmath.mpf(10) ** (-_DPS // 2) * abs(h):
                    break
            s = tau + h ** gamma
            value = evaluate_mp(comp, s, _DPS)
        except (PoleError, ZeroDivisionError) as exc:
            raise SamplingError(f"sampling failed at radius {radius}: {exc}") from exc
        if abs(value - target) > 1e-12 * radius:
            raise SamplingError(f"could not reach radius {radius}")
        point = [evaluate_mp(e, s, _DPS) for e in p.components]
    return point, complex(target)


def _polish_distance(q, point, t, steps=8):
    # Gauss-Newton in extended precision: double precision cannot resolve
    # distances below ~1e-16 times the sample size
    coords = [[mpmath.mpc(complex(c)) for c in poly] for poly in q.coordinates()]
    with mpmath.workdps(_DPS):
        t = mpmath.mpc(t)
        for _ in range(steps):
            r = [mpmath.polyval(c[::-1], t) - x for c, x in zip(coords, point)]
            d = [mpmath.polyval([j * a for j, a in enumerate(c)][:0:-1] or [0], t)
                 for c in coords]
            # columns d/du = q', d/dv = i q' of the realified residual
            ju = [v for z in d for v in (z.real, z.imag)]
            jv = [v for z in d for v in ((1j * z).real, (1j * z).imag)]
            rr = [v for z in r for v in (z.real, z.imag)]
            a11 = mpmath.fsum(x * x for x in ju)
            a12 = mpmath.fsum(x * y for x, y in zip(ju, jv))
            a22 = mpmath.fsum(y * y for y in jv)
            b1 = mpmath.fsum(x * y for x, y in zip(ju, rr))
            b2 = mpmath.fsum(x * y for x, y in zip(jv, rr))
            det = a11 * a22 - a12 * a12
            if det == 0:
                break
            t -= mpmath.mpc((a22 * b1 - a12 * b2) / det, (a11 * b2 - a12 * b1) / det)
        r = [mpmath.polyval(c[::-1], t) - x for c, x in zip(coords, point)]
        return float(mpmath.sqrt(mpmath.fsum(abs(z) ** 2 for z in r)))


def approach_distance(p, pole, q, radii=DEFAULT_RADII):
    """Distance from curve samples to the asymptote ``q`` at growing radii.

    For each radius the curve is sampled where its pivot coordinate has
    that modulus, and the nearest asymptote point is found by least squares
    started from every preimage of that coordinate, then refined in
    extended precision.
    """
    out = []
    k = q.base_exponent
    for radius in radii:
        point, target = _solve_radius(p, pole, radius)
        approx = np.array([complex(x) for x in point])

        def residual(v):
            diff = q(complex(v[0], v[1])) - approx
            return np.concatenate([diff.real, diff.imag])

        best = math.inf
        for m in range(k):
            t0 = cmath.exp((cmath.log(target) + 2j * math.pi * m) / k)
            res = least_squares(residual, [t0.real, t0.imag], method="lm",
                                xtol=1e-15, ftol=1e-15, gtol=1e-15)
            best = min(best, _polish_distance(q, point, complex(*res.x)))
        out.append(best)
    return out
