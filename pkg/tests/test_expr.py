import cmath
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings, strategies as st
from numpy.testing import assert_allclose

from gasymptote import expr as ex
from gasymptote.expr import (CurveParam, ParseError, PoleError, evaluate, parse,
                             split, substitute_power, to_string)

# -- random expressions -------------------------------------------------------

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exponents = st.sampled_from([Fraction(k, d) for k in range(-3, 4) for d in (1, 2, 3)
                             if Fraction(k, d) != 0])
leaves = st.one_of(
    st.just(ex.S), st.just(ex.S), st.just(ex.I), st.just(ex.PI),
    small_rationals.map(ex.Const),
)


def _combine(children):
    def build(op, a, b):
        try:
            return op(a, b)
        except ZeroDivisionError:
            return a
    binary = st.tuples(st.sampled_from([ex.make_add, ex.make_sub, ex.make_mul, ex.make_div]),
                       children, children).map(lambda t: build(*t))
    power = st.tuples(children, exponents).map(lambda t: _safe_pow(*t))
    func = st.tuples(st.sampled_from(["sin", "cos", "exp"]), children).map(
        lambda t: ex.Func(t[0], t[1]))
    neg = children.map(ex.make_neg)
    return st.one_of(binary, power, func, neg)


def _safe_pow(base, r):
    try:
        return ex.make_pow(base, r)
    except ZeroDivisionError:
        return base


expressions = st.recursive(leaves, _combine, max_leaves=8)

# points inside the sector where (s^g)^r == s^(g r) holds for g <= 3
sector_points = st.builds(
    lambda r, a: cmath.rect(r, a),
    st.floats(0.5, 2.0), st.floats(-math.pi / 3 + 0.05, math.pi / 3 - 0.05))


class TestParse:

    def test_rational_example(self):
        e = parse("(2*s^2-7*s+2)/((s-1)*s^2)")
        num, den = split(e)
        assert ex.as_polynomial(num) == [2, -7, 2]
        assert len(ex.as_polynomial(den)) - 1 == 3

    def test_variable(self):
        assert parse("s") == ex.S

    def test_sin_remainder(self):
        # value frozen from a 50-digit evaluation
        with mpmath.workdps(50):
            z = mpmath.mpf("0.001")
            ref = float(mpmath.sin(z) / z - 1)
        assert_allclose(evaluate(parse("sin(s)/s - 1"), 0.001).real, ref, rtol=1e-6)
        assert_allclose(ref, -1.6666665833e-07, rtol=1e-9)

    def test_decimal_literals_are_exact(self):
        assert parse("0.25") == ex.Const(Fraction(1, 4))
        assert parse("1e-2") == ex.Const(Fraction(1, 100))

    def test_precedence(self):
        assert parse("-s^2") == ex.make_neg(ex.make_pow(ex.S, Fraction(2)))
        assert parse("2^3^2") == ex.Const(Fraction(512))
        assert parse("s^-2") == ex.make_pow(ex.S, Fraction(-2))

    def test_sheet_power(self):
        e = parse("pow(s, 1/2, 1)")
        assert e.sheet == 1
        assert_allclose(evaluate(e, 4), -2)
        assert parse("pow(s, 2, 5)") == parse("s^2")

    @pytest.mark.parametrize("text, pos", [
        ("s +", 3), ("(s", 2), ("s $ 2", 2), ("foo(s)", 0), ("s^s", 1),
        ("1/0", 1), ("s^pi", 1), ("pow(s, 1/2, 1/2)", 12),
    ])
    def test_errors_carry_position(self, text, pos):
        with pytest.raises(ParseError) as info:
            parse(text)
        assert info.value.position == pos

    def test_zero_denominator_after_folding(self):
        with pytest.raises(ParseError):
            parse("s/(2-2)")

    @settings(max_examples=200, deadline=None)
    @given(expressions)
    def test_round_trip(self, e):
        text = to_string(e)
        assert parse(text) == e
        assert to_string(parse(text)) == text


class TestEvaluate:

    def test_polynomial(self):
        assert evaluate(parse("s^2+s+5"), 1) == 7

    def test_rational_at_i(self):
        assert_allclose(evaluate(parse("(2*s^2-7*s+2)/((s-1)*s^2)"), 1j), 3.5 - 3.5j)

    def test_sin_pi(self):
        assert_allclose(evaluate(parse("sin(pi*s)"), 0.5), 1)

    def test_principal_branch(self):
        assert_allclose(evaluate(parse("sqrt(s)"), -4), 2j)
        assert_allclose(evaluate(parse("s^(1/3)"), -1), cmath.exp(1j * math.pi / 3))

    def test_pole_errors(self):
        with pytest.raises(PoleError):
            evaluate(parse("1/s"), 0)
        with pytest.raises(PoleError):
            evaluate(parse("s^(-1/2)"), 0)
        with pytest.raises(PoleError):
            evaluate(parse("exp(s)"), 1000)

    def test_extended_precision_agrees(self):
        e = parse("(cos(s)-1)/s^2")
        assert_allclose(complex(ex.evaluate_mp(e, 1e-9)), -0.5, rtol=1e-15)
        assert_allclose(complex(ex.evaluate_mp(e, 0.3)), evaluate(e, 0.3), rtol=1e-12)


class TestSubstitutePower:

    def test_sqrt(self):
        assert substitute_power(parse("sqrt(s)"), 2) == ex.S

    def test_exponent_arithmetic(self):
        assert substitute_power(parse("s^(3/2)"), 4) == parse("s^6")

    def test_sqrt_sin_curve(self):
        p1, p2 = (parse(t) for t in ("(sqrt(s)+1)/(sqrt(s)*sin(s))", "(s^2+s+5)/sin(s)"))
        assert substitute_power(p1, 2) == parse("(s+1)/(s*sin(s^2))")
        assert substitute_power(p2, 2) == parse("(s^4+s^2+5)/sin(s^2)")

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            substitute_power(ex.S, 0)

    @settings(max_examples=200, deadline=None)
    @given(expressions, st.integers(1, 3), sector_points)
    def test_matches_evaluation(self, e, gamma, z):
        try:
            lhs = evaluate(substitute_power(e, gamma), z)
            rhs = evaluate(e, z ** gamma)
        except (PoleError, OverflowError, ValueError):
            assume(False)
        assume(abs(rhs) < 1e8)
        # exp/sin of huge arguments lose relative accuracy on either side
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs)) * 100


class TestSplit:

    def test_structural(self):
        num, den = split(parse("(s+1)/(s*sin(s^2))"))
        assert num == parse("s+1")
        assert den == parse("s*sin(s^2)")

    def test_negative_power_moves_down(self):
        num, den = split(parse("s^(-3/2)*(s+1)"))
        assert den == parse("s^(3/2)")

    def test_no_denominator(self):
        assert split(parse("s^2+1"))[1] == ex.Const(Fraction(1))

    @settings(max_examples=200, deadline=None)
    @given(expressions, sector_points)
    def test_quotient(self, e, z):
        num, den = split(e)
        try:
            value = evaluate(e, z)
            n = evaluate(num, z)
            d = evaluate(den, z)
        except (PoleError, OverflowError, ValueError):
            assume(False)
        assume(d != 0 and abs(value) < 1e8)
        assert abs(n / d - value) <= 1e-8 * max(1.0, abs(value))


class TestCurveParam:

    def test_needs_two_components(self):
        with pytest.raises(ValueError):
            CurveParam.from_strings("s")

    def test_split_cached(self):
        p = CurveParam.from_strings("1/s", "s/(s-1)")
        assert p.dimension == 2
        assert p.denominator(1) == parse("s-1")
        assert_allclose(p(2.0), [0.5, 2.0])
