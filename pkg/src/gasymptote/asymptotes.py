"""
Generalized asymptotes from infinity branches.

The nonnegative part of a branch, ``sum_{j>=0} a_j z^(j/N)``, becomes the
polynomial parametrization ``(t^N, sum a_j t^j)`` after ``z = t^N``. Dividing
all surviving exponents by their gcd with ``N`` makes it proper.
"""

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import expr as ex
from .branches import (COEF_TOL, CascadeDivergence, branch_series,
                       local_series)
from .poles import DEFAULT_WINDOW, PoleSearchError, find_poles
from .series import SeriesError

__all__ = [
    "GAsymptote", "AsymptoteErrors", "BEYOND_HYPOTHESES",
    "asymptote_from_branch", "asymptote_at", "horizontal_asymptote",
    "vertical_asymptote", "all_asymptotes", "nd_asymptotes", "equivalent",
]

BEYOND_HYPOTHESES = "extension beyond the standard hypotheses"


@dataclass(frozen=True)
class GAsymptote:
    """Proper polynomial parametrization approaching a branch.

    The pivot coordinate is ``t^base_exponent``; every other coordinate is
    a polynomial in ``t`` given by ascending coefficients (index = power).

    Attributes
    ----------
    kind : str
        ``generic``, ``horizontal_line`` (pivot is the first coordinate and
        the rest are constant) or ``vertical_line`` (same with a later
        pivot).
    base_exponent : int
    component_polynomials : tuple of tuple
        Ascending coefficients for each non-pivot coordinate, in order.
    reduction_factor : int
    source_pole : Fraction or complex
    infinity_point : tuple
    pivot : int
    flags : tuple of str
    """

    kind: str
    base_exponent: int
    component_polynomials: tuple
    reduction_factor: int
    source_pole: object
    infinity_point: tuple
    pivot: int = 0
    flags: tuple = ()
    pole: object = field(default=None, compare=False, repr=False)

    @property
    def dimension(self):
        return len(self.component_polynomials) + 1

    def coordinates(self):
        """Ascending coefficient lists for every coordinate."""
        out = list(self.component_polynomials)
        mono = (Fraction(0),) * self.base_exponent + (Fraction(1),)
        out.insert(self.pivot, mono)
        return out

    def __call__(self, t):
        t = complex(t)
        return np.array([sum(complex(c) * t ** j for j, c in enumerate(poly))
                         for poly in self.coordinates()])

    @property
    def is_real(self):
        return all(abs(complex(c).imag) <= COEF_TOL * max(1.0, abs(c))
                   for poly in self.component_polynomials for c in poly)

    def as_curve(self):
        """The asymptote as a parametrization in ``s = 1/t``."""
        comps = []
        for poly in self.coordinates():
            e = None
            for j, c in enumerate(poly):
                if c == 0:
                    continue
                coef = ex.Const(c) if isinstance(c, Fraction) else ex.Num(complex(c))
                term = coef if j == 0 else ex.make_mul(coef, ex.make_pow(ex.S, Fraction(-j)))
                e = term if e is None else ex.make_add(e, term)
            comps.append(ex.Const(Fraction(0)) if e is None else e)
        return ex.CurveParam(tuple(comps))

    def __str__(self):
        from .series import format_coefficient
        parts = []
        for i, poly in enumerate(self.coordinates()):
            if i == self.pivot:
                parts.append("t" if self.base_exponent == 1 else f"t^{self.base_exponent}")
                continue
            terms = []
            for j, c in reversed(list(enumerate(poly))):
                if c == 0 and (j or len(poly) > 1):
                    continue
                coef = format_coefficient(c)
                terms.append(coef if j == 0 else f"{coef}*t" if j == 1 else f"{coef}*t^{j}")
            parts.append(" + ".join(terms) if terms else "0")
        return "(" + ", ".join(parts) + ")"


class AsymptoteErrors(ArithmeticError):
    """Some poles failed; carries the asymptotes that succeeded.

    Attributes
    ----------
    asymptotes : list of GAsymptote
    failures : list of (tau, exception)
    """

    def __init__(self, asymptotes, failures):
        self.asymptotes = asymptotes
        self.failures = failures
        detail = "; ".join(f"pole {tau}: {exc}" for tau, exc in failures)
        super().__init__(f"{len(failures)} pole(s) failed: {detail}")


def _line_kind(pivot):
    return "horizontal_line" if pivot == 0 else "vertical_line"


def _flags(pole):
    return (BEYOND_HYPOTHESES,) if pole.beyond_hypotheses else ()


def asymptote_from_branch(b, tol=COEF_TOL):
    """Reduced g-asymptote of the branch ``b`` (the tail is discarded).

    Head coefficients below ``tol`` times the largest one count as zero.
    """
    n = b.ramification_index
    dims = [i for i in range(len(b.components)) if i != b.pivot]
    heads = [b.head(i) for i in dims]
    big = max((abs(c) for h in heads for c in h.values()), default=0)
    threshold = tol * big
    beta = n
    for h in heads:
        for j, c in h.items():
            if j > 0 and abs(c) > threshold:
                beta = math.gcd(beta, j)
    polys = []
    for h in heads:
        top = max((j for j, c in h.items() if j > 0 and abs(c) > threshold), default=0)
        poly = [Fraction(0)] * (top // beta + 1)
        for j, c in h.items():
            if j == 0 or abs(c) > threshold:
                poly[j // beta] = c
        polys.append(tuple(poly))
    constant = all(len(poly) == 1 for poly in polys)
    kind = _line_kind(b.pivot) if constant else "generic"
    return GAsymptote(
        kind=kind, base_exponent=n // beta, component_polynomials=tuple(polys),
        reduction_factor=beta, source_pole=b.pole.tau,
        infinity_point=b.infinity_point, pivot=b.pivot, flags=_flags(b.pole),
        pole=b.pole)


def _axis_line(p, pole):
    pivot = pole.pivot
    values = []
    for i in range(p.dimension):
        if i == pivot:
            continue
        if pole.nbar[i] > 0:
            raise ValueError(f"component {i + 1} also blows up at {pole.tau}")
        s = local_series(p, pole, i, 1)
        if not s.is_zero and s.valuation < 0:
            raise ValueError(f"component {i + 1} has a pole at {pole.tau}")
        values.append((s.as_dict().get(Fraction(0), Fraction(0)),))
    point = [Fraction(0)] * (p.dimension + 1)
    point[pivot] = Fraction(1)
    return GAsymptote(
        kind=_line_kind(pivot), base_exponent=1, component_polynomials=tuple(values),
        reduction_factor=pole.nbar[pivot], source_pole=pole.tau,
        infinity_point=tuple(point), pivot=pivot, flags=_flags(pole), pole=pole)


def horizontal_asymptote(p, pole):
    """Line through the finite limits of the non-pivot coordinates.

    Raises
    ------
    ValueError
        If the first coordinate is bounded at the pole, or another
        coordinate blows up there as well.
    """
    if pole.nbar[0] < 1:
        raise ValueError(f"first component is bounded at {pole.tau}")
    return _axis_line(p, pole)


def vertical_asymptote(p, pole):
    """Line ``x = p1(tau)`` at a pole of the second coordinate only."""
    if pole.nbar[0] > 0:
        raise ValueError(f"first component also blows up at {pole.tau}")
    return _axis_line(p, pole)


def asymptote_at(p, pole, tail_terms=3, depth=None, tol=COEF_TOL):
    """Asymptote at one pole; bounded non-pivot coordinates give a line."""
    if all(pole.nbar[i] <= 0 for i in range(p.dimension) if i != pole.pivot):
        return _axis_line(p, pole)
    return asymptote_from_branch(branch_series(p, pole, tail_terms, depth), tol)


def all_asymptotes(p, window=DEFAULT_WINDOW, tail_terms=3, depth=None,
                   scan_general=True, tol=COEF_TOL):
    """One g-asymptote per infinity branch with pole inside ``window``.

    Raises
    ------
    AsymptoteErrors
        When some poles fail; the successful asymptotes travel with it.
    """
    poles = find_poles(p, window, scan_general=scan_general)
    out, failures = [], []
    for pole in poles:
        try:
            out.append(asymptote_at(p, pole, tail_terms, depth, tol))
        except (CascadeDivergence, SeriesError, PoleSearchError, ValueError) as exc:
            failures.append((pole.tau, exc))
    if failures:
        raise AsymptoteErrors(out, failures)
    return out


def nd_asymptotes(p, window=DEFAULT_WINDOW, tail_terms=3, depth=None,
                  scan_general=True, tol=COEF_TOL):
    """Space-curve version of :func:`all_asymptotes` (three or more
    coordinates); every coordinate is expanded against the same pivot."""
    if p.dimension < 3:
        raise ValueError("nd_asymptotes needs at least three components")
    return all_asymptotes(p, window, tail_terms, depth, scan_general, tol)


def _close(a, b, tol):
    return abs(complex(a) - complex(b)) <= tol * max(1.0, abs(a), abs(b))


def equivalent(a, b, tol=COEF_TOL):
    """True when ``b(t) == a(xi t)`` for a root of unity ``xi``.

    Both must be proper with the same base exponent ``k``; ``xi`` ranges
    over the ``k``-th roots of unity.
    """
    if (a.pivot != b.pivot or a.base_exponent != b.base_exponent
            or a.dimension != b.dimension):
        return False
    k = a.base_exponent
    for m in range(k):
        xi = cmath.exp(2j * math.pi * m / k)
        ok = True
        for pa, pb in zip(a.component_polynomials, b.component_polynomials):
            size = max(len(pa), len(pb))
            for j in range(size):
                ca = pa[j] if j < len(pa) else 0
                cb = pb[j] if j < len(pb) else 0
                if not _close(complex(ca) * xi ** j, cb, tol):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False
