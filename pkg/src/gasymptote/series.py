"""
Truncated Puiseux series with rational exponents.

A :class:`PuiseuxSeries` stores finitely many terms ``c * h^e`` together with
a truncation order ``T``: the true expansion equals the stored terms plus
``O(h^T)``. Exact series (polynomials, monomials) carry ``T = inf``.

Coefficients stay :class:`fractions.Fraction` as long as every operation on
them is exact and fall back to ``complex`` otherwise, so rational inputs give
rational branch coefficients.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from . import expr as ex

__all__ = [
    "PuiseuxSeries", "INFINITY", "SeriesError", "ZeroSeriesError",
    "EssentialSingularityError", "ExpansionError", "expand_at", "valuation",
    "add", "sub", "mul", "div", "pow_rational", "leading", "compose",
    "revert", "format_coefficient", "ZERO_TOL",
]

# relative pruning threshold for inexact coefficients
ZERO_TOL = 1e-10

# growth schedule of the internal order when an expansion falls short
_MAX_ROUNDS = 12


class SeriesError(ArithmeticError):
    pass


class ZeroSeriesError(SeriesError):
    """The series vanishes to its truncation order."""


class EssentialSingularityError(SeriesError):
    pass


class ExpansionError(SeriesError):
    """Requested truncation order could not be reached."""


class _PointAtInfinity:

    def __repr__(self):
        return "oo"

    def __reduce__(self):
        return (_point_at_infinity, ())


def _point_at_infinity():
    return INFINITY


INFINITY = _PointAtInfinity()


def _exact(c):
    return isinstance(c, (int, Fraction))


def _is_zero(c):
    return c == 0


def format_coefficient(c):
    """Coefficient text: exact rationals as ``p/q``, others to 15 digits."""
    if _exact(c):
        return str(Fraction(c))
    c = complex(c)
    re_, im_ = float(f"{c.real:.15g}") + 0.0, float(f"{c.imag:.15g}") + 0.0
    if im_ == 0:
        return f"{re_:.15g}"
    if re_ == 0:
        return f"{im_:.15g}*I"
    sign = "+" if im_ >= 0 else "-"
    return f"({re_:.15g}{sign}{abs(im_):.15g}*I)"


def _fmt_exponent(e):
    e = Fraction(e)
    return str(e.numerator) if e.denominator == 1 else f"({e})"


# ======
# Series
# ======

@dataclass(frozen=True, eq=False)
class PuiseuxSeries:
    """Truncated Puiseux series around ``center``.

    Parameters
    ----------
    terms : tuple of (Fraction, coefficient)
        Strictly increasing exponents with nonzero coefficients.
    truncation : Fraction or float
        Exponents at or above this are unknown. ``math.inf`` for exact data.
    center : complex, Fraction or INFINITY
        Expansion point. At ``INFINITY`` the exponents refer to ``1/z``.
    """

    terms: tuple
    truncation: object = math.inf
    center: object = 0
    variable: str = "s"

    @classmethod
    def from_dict(cls, mapping, truncation=math.inf, center=0, variable="s"):
        if truncation != math.inf:
            truncation = Fraction(truncation)
        items = [(Fraction(e), c) for e, c in mapping.items()
                 if Fraction(e) < truncation and not _is_zero(c)]
        inexact = [abs(c) for _, c in items if not _exact(c)]
        if inexact:
            threshold = ZERO_TOL * max(1.0, max(abs(c) for _, c in items))
            items = [(e, c) for e, c in items if _exact(c) or abs(c) > threshold]
        items.sort(key=lambda t: t[0])
        return cls(tuple(items), truncation, center, variable)

    @classmethod
    def constant(cls, c, center=0, variable="s"):
        return cls.from_dict({0: c}, math.inf, center, variable)

    @classmethod
    def monomial(cls, c, e, center=0, variable="s"):
        return cls.from_dict({Fraction(e): c}, math.inf, center, variable)

    # --- inspection -------------------------------------------------------

    @property
    def exact(self):
        return self.truncation == math.inf

    @property
    def is_zero(self):
        """True when no term is known to be nonzero."""
        return not self.terms

    @property
    def valuation(self):
        return self.terms[0][0] if self.terms else self.truncation

    @property
    def ramification(self):
        n = 1
        for e, _ in self.terms:
            n = math.lcm(n, e.denominator)
        return n

    def as_dict(self):
        return dict(self.terms)

    def coefficient(self, e):
        e = Fraction(e)
        if e >= self.truncation:
            raise SeriesError(f"coefficient of exponent {e} is beyond truncation")
        return self.as_dict().get(e, 0)

    def leading(self):
        if not self.terms:
            raise ZeroSeriesError("series is zero to its truncation order")
        return self.terms[0]

    def _like(self, mapping, truncation):
        return PuiseuxSeries.from_dict(mapping, truncation, self.center, self.variable)

    def _check(self, other):
        if not isinstance(other, PuiseuxSeries):
            return PuiseuxSeries.constant(other, self.center, self.variable)
        if other.center is not self.center and other.center != self.center:
            raise SeriesError("series have different centers")
        return other

    # --- arithmetic -------------------------------------------------------

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms}, self.truncation)

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for e, c in other.terms:
            out[e] = out[e] + c if e in out else c
        return self._like(out, min(self.truncation, other.truncation))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries):
            if _is_zero(other):
                return self._like({}, math.inf)
            return self._like({e: c * other for e, c in self.terms}, self.truncation)
        other = self._check(other)
        trunc = min(self.valuation + other.truncation, other.valuation + self.truncation)
        out = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                if e < trunc:
                    out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return self._like(out, trunc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return self * (1 / Fraction(other) if _exact(other) else 1 / complex(other))
        return div(self, other)

    def shift(self, q):
        """Multiply by ``h^q``."""
        q = Fraction(q)
        return self._like({e + q: c for e, c in self.terms}, self.truncation + q)

    def truncate(self, order):
        return self._like(dict(self.terms), min(self.truncation, Fraction(order)))

    def drop(self, e):
        """Remove the term of exponent ``e`` (subtract it exactly)."""
        e = Fraction(e)
        return self._like({k: c for k, c in self.terms if k != e}, self.truncation)

    def scale_exponents(self, factor):
        """Substitute ``h -> h^factor`` (exponents and truncation scale)."""
        factor = Fraction(factor)
        if factor <= 0:
            raise ValueError("factor must be positive")
        return self._like({e * factor: c for e, c in self.terms}, self.truncation * factor)

    def __call__(self, h):
        """Sum of the stored terms at ``h`` (principal powers)."""
        h = complex(h)
        total = 0j
        for e, c in self.terms:
            if e.denominator == 1:
                total += complex(c) * h ** e.numerator
            else:
                total += complex(c) * cmath.exp(float(e) * cmath.log(h))
        return total

    def __repr__(self):
        trunc = "inf" if self.exact else str(self.truncation)
        return f"PuiseuxSeries({self}, truncation={trunc})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            coef = format_coefficient(c)
            if self.center is INFINITY:
                parts.append(f"{coef} * {self.variable}^{_fmt_exponent(-e)}")
            else:
                center = format_coefficient(self.center)
                parts.append(f"{coef} * ({self.variable}-{center})^{_fmt_exponent(e)}")
        return " + ".join(parts)


# ===================
# Functional versions
# ===================

def add(a, b):
    return a + b


def sub(a, b):
    return a - b


def mul(a, b):
    return a * b


def leading(a):
    """``(exponent, coefficient)`` of the first known-nonzero term."""
    return a.leading()


def _power_of_constant(c, r, sheet=0):
    r = Fraction(r)
    if _exact(c):
        c = Fraction(c)
        if r.denominator == 1:
            return c ** r.numerator
        if c > 0 and sheet == 0:
            num = _exact_root(c.numerator, r.denominator)
            den = _exact_root(c.denominator, r.denominator)
            if num is not None and den is not None:
                return Fraction(num, den) ** r.numerator
    elif r.denominator == 1:
        return complex(c) ** r.numerator
    return cmath.exp(float(r) * (cmath.log(complex(c)) + 2j * math.pi * sheet))


def _exact_root(n, q):
    root = round(n ** (1.0 / q))
    for cand in (root - 1, root, root + 1):
        if cand >= 0 and cand ** q == n:
            return cand
    return None


def _grid(a):
    """Split ``a = c * h^v * (1 + sum_k d_k h^(k/N))``; returns (c, v, N, d)."""
    v, c = a.leading()
    rel = [(e - v, coef) for e, coef in a.terms[1:]]
    n = 1
    for e, _ in rel:
        n = math.lcm(n, e.denominator)
    if _exact(c):
        d = {int(e * n): coef / c for e, coef in rel}
    else:
        d = {int(e * n): coef / complex(c) for e, coef in rel}
    return c, v, n, d


def _n_terms(relative, n):
    # number of grid indices k with k/n < relative
    return math.ceil(relative * n)


def _miller_power(d, r, m):
    """Coefficients g_0..g_{m-1} of (1 + sum d_k x^k)^r (J.C.P. Miller)."""
    g = [Fraction(1)]
    exact = all(_exact(v) for v in d.values())
    r1 = r + 1
    for n in range(1, m):
        acc = 0
        for k in range(1, n + 1):
            dk = d.get(k)
            if dk is None or _is_zero(g[n - k]):
                continue
            acc += (r1 * k - n) * dk * g[n - k]
        g.append(acc / n if exact else acc / n)
    return g


def pow_rational(a, r, cap=None, sheet=0):
    """``a^r`` for rational ``r``.

    The leading coefficient takes the principal root (or the given sheet).
    ``cap`` bounds the truncation order when the result would otherwise be
    an infinite series built from exact data.
    """
    r = Fraction(r)
    if a.is_zero:
        if a.exact and r > 0:
            return a._like({}, math.inf)
        raise ZeroSeriesError("power of a series that is zero to truncation")
    if r.denominator == 1 and r >= 0 and a.exact:
        out = PuiseuxSeries.constant(Fraction(1), a.center, a.variable)
        base, k = a, r.numerator
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out
    c, v, n, d = _grid(a)
    lead = _power_of_constant(c, r, sheet)
    if not d:
        return a._like({v * r: lead}, v * r + (a.truncation - v))
    relative = a.truncation - v
    if relative == math.inf:
        if cap is None:
            raise SeriesError("cap required to truncate an infinite expansion")
        relative = Fraction(cap) - v * r
    elif cap is not None:
        relative = min(relative, Fraction(cap) - v * r)
    if relative <= 0:
        return a._like({}, v * r + max(relative, 0))
    m = _n_terms(relative, n)
    g = _miller_power(d, r, m)
    out = {v * r + Fraction(k, n): lead * gk for k, gk in enumerate(g)}
    return a._like(out, v * r + relative)


def div(a, b, cap=None):
    """``a / b``; ``cap`` bounds infinite expansions of ``1/b``."""
    b = a._check(b)
    if b.is_zero:
        raise ZeroSeriesError("division by a series that is zero to truncation")
    if a.is_zero and a.exact:
        return a._like({}, math.inf)
    inv_cap = None if cap is None else Fraction(cap) - a.valuation
    if cap is None and b.exact and len(b.terms) > 1:
        # bound the relative precision by the numerator's
        rel = a.truncation - a.valuation if not a.exact else None
        if rel is None:
            raise SeriesError("cap required to divide exact series")
        inv_cap = rel - b.valuation
    return a * pow_rational(b, -1, inv_cap)


# ===================
# Elementary functions
# ===================

def _entire(u, name, cap):
    """exp/sin/cos of ``u``, which must have nonnegative valuation."""
    if not u.is_zero and u.valuation < 0:
        raise EssentialSingularityError(f"{name} of a series with a pole")
    c0 = u.as_dict().get(Fraction(0), 0)
    w = u.drop(0)
    trunc = u.truncation if cap is None else min(u.truncation, Fraction(cap))
    if trunc == math.inf:
        raise SeriesError("cap required to truncate an infinite expansion")
    if w.is_zero:
        s_w = {0: Fraction(0)}
        c_w = {0: Fraction(1)}
        e_w = {0: Fraction(1)}
        n = 1
        m = 1
    else:
        n = w.ramification
        dw = {int(e * n): c for e, c in w.terms}
        m = max(_n_terms(trunc, n), 1)
        exact = all(_exact(c) for c in dw.values())
        one = Fraction(1) if exact else 1 + 0j
        zero = Fraction(0) if exact else 0j
        if name == "exp":
            g = [one]
            for k in range(1, m):
                acc = zero
                for j in range(1, k + 1):
                    if j in dw:
                        acc += j * dw[j] * g[k - j]
                g.append(acc / k)
            e_w = dict(enumerate(g))
        else:
            sn, cs = [zero], [one]
            for k in range(1, m):
                acc_s, acc_c = zero, zero
                for j in range(1, k + 1):
                    if j in dw:
                        acc_s += j * dw[j] * cs[k - j]
                        acc_c -= j * dw[j] * sn[k - j]
                sn.append(acc_s / k)
                cs.append(acc_c / k)
            s_w, c_w = dict(enumerate(sn)), dict(enumerate(cs))

    def build(coeffs, factor):
        return u._like({Fraction(k, n): factor * c for k, c in coeffs.items()}, trunc)

    if name == "exp":
        lead = Fraction(1) if _is_zero(c0) else cmath.exp(complex(c0))
        return build(e_w, lead)
    if _is_zero(c0):
        return build(s_w, 1) if name == "sin" else build(c_w, 1)
    s0, k0 = cmath.sin(complex(c0)), cmath.cos(complex(c0))
    if name == "sin":
        return build(s_w, k0) + build(c_w, s0)
    return build(c_w, k0) - build(s_w, s0)


# =========
# Expansion
# =========

def _expand(e, tau, cap, cache):
    hit = cache.get(e)
    if hit is not None:
        return hit
    out = _expand_node(e, tau, cap, cache)
    cache[e] = out
    return out


def _expand_node(e, tau, cap, cache):
    const = PuiseuxSeries.constant
    if isinstance(e, ex.Const):
        return const(e.value, tau)
    if isinstance(e, ex.Num):
        return const(e.value, tau)
    if isinstance(e, ex.ImagUnit):
        return const(1j, tau)
    if isinstance(e, ex.PiConst):
        return const(math.pi, tau)
    if isinstance(e, ex.Var):
        return PuiseuxSeries.from_dict({0: tau, 1: Fraction(1)}, math.inf, tau)
    if isinstance(e, ex.Neg):
        return -_expand(e.operand, tau, cap, cache)
    if isinstance(e, ex.Func):
        return _entire(_expand(e.arg, tau, cap, cache), e.name, cap)
    if isinstance(e, ex.Pow):
        return pow_rational(_expand(e.base, tau, cap, cache), e.exponent, cap, e.sheet)
    a = _expand(e.left, tau, cap, cache)
    b = _expand(e.right, tau, cap, cache)
    if isinstance(e, ex.Add):
        return a + b
    if isinstance(e, ex.Sub):
        return a - b
    if isinstance(e, ex.Mul):
        out = a * b
        return out if out.exact else out.truncate(max(cap, out.valuation + 1))
    if isinstance(e, ex.Div):
        return div(a, b, cap)
    raise TypeError(f"not an expression: {e!r}")


def _normalize_center(tau):
    if isinstance(tau, (int, Fraction)):
        return Fraction(tau)
    tau = complex(tau)
    return tau


def expand_at(e, tau, depth):
    """Puiseux expansion of ``e`` at ``s = tau`` to truncation >= ``depth``.

    The internal working order grows until the requested absolute order is
    reached, which absorbs cancellations and divisions by vanishing factors.

    Raises
    ------
    EssentialSingularityError
        For ``exp``/``sin``/``cos`` of an argument with a pole.
    ExpansionError
        When the order cannot be reached (e.g. an identically zero divisor).
    """
    if isinstance(e, str):
        e = ex.parse(e)
    tau = _normalize_center(tau)
    depth = Fraction(depth)
    extra = Fraction(2)
    last = None
    for _ in range(_MAX_ROUNDS):
        try:
            out = _expand(e, tau, depth + extra, {})
        except ZeroSeriesError as exc:
            last = exc
            extra = 2 * extra + 4
            continue
        if out.truncation >= depth:
            if out.truncation != math.inf and out.truncation > depth:
                out = out.truncate(depth)
            return out
        extra += (depth - out.truncation) + 2
    raise ExpansionError(f"could not expand {ex.to_string(e)} at {tau} "
                         f"to order {depth}" + (f": {last}" if last else ""))


def valuation(e, tau, max_depth=64):
    """Leading exponent of ``e`` at ``tau`` (inf when it vanishes to
    ``max_depth``)."""
    depth = 4
    while depth <= max_depth:
        s = expand_at(e, tau, depth)
        if not s.is_zero:
            return s.valuation
        depth *= 2
    return math.inf


# ============================
# Composition and reversion
# ============================

def compose(outer, inner, cap=None):
    """``outer(inner)`` where ``inner`` has positive valuation.

    Terms of ``outer`` are raised with :func:`pow_rational`, so negative and
    fractional exponents are allowed.
    """
    if inner.is_zero or inner.valuation <= 0:
        raise SeriesError("inner series must have positive valuation")
    v = inner.valuation
    trunc = outer.truncation * v if outer.truncation != math.inf else math.inf
    if cap is not None:
        trunc = min(trunc, Fraction(cap))
    total = PuiseuxSeries.from_dict({}, trunc, inner.center, inner.variable)
    for e, c in outer.terms:
        if e * v >= trunc:
            break
        term = pow_rational(inner, e, None if trunc == math.inf else trunc)
        total = total + term * c
    return total.truncate(trunc) if trunc != math.inf else total


def revert(w, order):
    """Solve ``w = W(h)`` for ``h`` as a series in ``w``.

    ``W`` must have valuation exactly 1. Returns ``h(w)`` with truncation at
    least ``order`` when ``W`` is known far enough.
    """
    if w.is_zero:
        raise ZeroSeriesError("cannot revert a zero series")
    v, c1 = w.leading()
    if v != 1:
        raise SeriesError(f"reversion needs valuation 1, got {v}")
    order = Fraction(order)
    rest = w.drop(1)
    inv_c1 = 1 / c1 if _exact(c1) else 1 / complex(c1)
    ident = PuiseuxSeries.monomial(Fraction(1), 1, 0, "w")
    h = ident.truncate(order) * inv_c1
    # fixed point h = (w - rest(h)) / c1; each pass fixes at least one more
    # grid step of the ramification
    step = min((e - 1 for e, _ in rest.terms), default=order)
    rounds = int(math.ceil(order / step)) + 2 if step > 0 else 2
    for _ in range(rounds):
        r = compose(rest, h, cap=order + 1) if not rest.is_zero else None
        nxt = ident.truncate(order)
        if r is not None:
            nxt = nxt - r
        h_new = nxt * inv_c1
        trunc = min(order, w.truncation - v + 1)
        h_new = h_new.truncate(trunc)
        if _same(h_new, h):
            return h_new
        h = h_new
    return h


def _same(a, b):
    if a.truncation != b.truncation or len(a.terms) != len(b.terms):
        return False
    for (e1, c1), (e2, c2) in zip(a.terms, b.terms):
        if e1 != e2 or abs(c1 - c2) > 1e-14 * max(1.0, abs(c1)):
            return False
    return True
