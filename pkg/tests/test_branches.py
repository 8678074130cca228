import itertools
import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from gasymptote.asymptotes import asymptote_at
from gasymptote.branches import (CascadeDivergence, SamplingError, approach_distance,
                                 branch_series, branch_series_oracle, converge,
                                 default_depth, infinity_point, local_series)
from gasymptote.poles import PoleData, find_poles, pole_at

from golden import (COS_SIN, RATIONAL, SPACE, SQRT_SIN, UNIT, curve, planted_curve)

GOLDEN = [(RATIONAL, (-10, 10, -10, 10)), (SQRT_SIN, UNIT), (COS_SIN, UNIT), (SPACE, UNIT)]


def golden_branches():
    out = []
    for texts, window in GOLDEN:
        p = curve(texts)
        for pole in find_poles(p, window):
            out.append((p, pole, branch_series(p, pole)))
    return out


@pytest.fixture(scope="module")
def corpus():
    return golden_branches()


def assert_branches_agree(b1, b2, tol=1e-9):
    assert b1.ramification_index == b2.ramification_index
    for i in range(len(b1.components)):
        c1, c2 = b1.coefficients(i), b2.coefficients(i)
        scale = max([1.0] + [abs(c) for c in c1.values()])
        for j in set(c1) | set(c2):
            assert abs(complex(c1.get(j, 0)) - complex(c2.get(j, 0))) <= tol * scale, (i, j)


class TestCascade:

    def test_rational_simple_pole_tail(self):
        p = curve(RATIONAL)
        b = branch_series(p, pole_at(p, 1))
        assert b.coefficients(1) == {1: -2, 0: 17, -1: Fraction(-261, 4),
                                     -2: Fraction(-2241, 8), -3: Fraction(1899, 2)}

    def test_rational_complex_pole_tail(self):
        p = curve(RATIONAL)
        b = branch_series(p, pole_at(p, 1j))
        assert_allclose(complex(b.coefficients(1)[-1]), complex(-127, 15) / 8, atol=1e-12)
        assert_allclose(complex(b.coefficients(1)[0]), 3.5 - 3.5j, atol=1e-12)

    def test_fractional_pole_is_exact(self):
        p = curve(SQRT_SIN)
        (pole,) = find_poles(p, UNIT)
        b = branch_series(p, pole)
        assert b.ramification_index == 3 and b.degree == 3
        # tail frozen from the reversion oracle
        assert b.coefficients(1) == {2: 5, 1: Fraction(-10, 3), 0: Fraction(8, 3),
                                     -1: Fraction(-50, 81), -2: Fraction(691, 486),
                                     -3: Fraction(2, 3)}
        assert str(b.series).startswith("5 * z^(2/3) + -10/3 * z^(1/3) + 8/3 * z^0")

    def test_vanishing_constant_term(self):
        p = curve(COS_SIN)
        (pole,) = find_poles(p, UNIT)
        head = branch_series(p, pole).head(1)
        assert_allclose(complex(head[1]), -6.283185307179586, rtol=1e-12)
        assert abs(head.get(0, 0)) < 1e-9

    def test_tail_length(self):
        p = curve(RATIONAL)
        b = branch_series(p, pole_at(p, 1), tail_terms=5)
        assert min(b.tail(1)) == -5

    def test_pivot_component_is_z(self):
        p = curve(("1/s", "1/s^2"))
        b = branch_series(p, pole_at(p, 0))
        assert b.pivot == 1
        # z = y carries exponent 2/2; x = z^(1/2)
        assert b.coefficients(1) == {2: 1}
        assert b.coefficients(0) == {1: 1}

    def test_depth_validation(self):
        p = curve(RATIONAL)
        pole = pole_at(p, 0)
        assert default_depth(pole, 3) == 3 + 5
        with pytest.raises(ValueError):
            branch_series(p, pole, tail_terms=3, depth=6)
        branch_series(p, pole, tail_terms=3, depth=7)

    def test_divergence_on_wrong_pivot(self):
        # claim the first coordinate dominates when the second has the higher order
        p = curve(("1/s", "1/s^2"))
        fake = PoleData(0, ((Fraction(0), Fraction(1)), (Fraction(0), Fraction(2))), 1, (2, 1))
        with pytest.raises(CascadeDivergence):
            branch_series(p, fake)

    def test_local_series_order(self):
        p = curve(SQRT_SIN)
        (pole,) = find_poles(p, UNIT)
        s = local_series(p, pole, 0, 4)
        assert s.valuation == -3 and s.truncation == 1


class TestOracle:

    def test_golden(self, corpus):
        for p, pole, b in corpus:
            assert_branches_agree(b, branch_series_oracle(p, pole))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2 ** 32))
    def test_planted(self, seed):
        texts, n, q = planted_curve(random.Random(seed))
        p = curve(texts)
        pole = pole_at(p, 0)
        b = branch_series(p, pole)
        assert_branches_agree(b, branch_series_oracle(p, pole))
        # the head is q read in powers of z^(1/n)
        assert {j: c for j, c in b.head(1).items() if c} == {j: c for j, c in enumerate(q) if c}


class TestInvariants:

    def test_ramification_matches_order(self, corpus):
        for p, pole, b in corpus:
            assert b.ramification_index == pole.nbar[pole.pivot]
            assert b.ramification_index % b.degree == 0

    def test_infinity_point_from_leading_terms(self, corpus):
        for p, pole, b in corpus:
            for x, y in zip(infinity_point(p, pole), b.infinity_point):
                assert abs(complex(x) - complex(y)) < 1e-9

    def test_infinity_points(self, corpus):
        p = curve(RATIONAL)
        assert branch_series(p, pole_at(p, 1)).infinity_point == (1, -2, 0)
        assert branch_series(p, pole_at(p, 0)).infinity_point == (1, 0, 0)
        (p, pole, b), = [t for t in corpus if len(t[2].components) == 3]
        assert_allclose([complex(c) for c in b.infinity_point], [1, 0, 7.475659479661408, 0],
                        atol=1e-12)

    def test_converge_is_equivalence(self, corpus):
        branches = [b for _, _, b in corpus]
        for b in branches:
            assert converge(b, b)
        for a, b in itertools.product(branches, repeat=2):
            assert converge(a, b) == converge(b, a)
        for a, b, c in itertools.product(branches, repeat=3):
            if converge(a, b) and converge(b, c):
                assert converge(a, c)

    def test_convergent_branches_share_infinity_point(self, corpus):
        branches = [b for _, _, b in corpus]
        for a, b in itertools.product(branches, repeat=2):
            if converge(a, b):
                assert all(abs(complex(x) - complex(y)) < 1e-9
                           for x, y in zip(a.infinity_point, b.infinity_point))

    def test_converge_across_leaves(self):
        # the same cubic branch read on another leaf of z^(1/3)
        p = curve(("1/s^3", "1/s^2 + 2/s"))
        q = curve(("1/s^3", "(-1/2 + sqrt(3)/2*I)^2/s^2 + 2*(-1/2 + sqrt(3)/2*I)/s"))
        b1, b2 = (branch_series(c, pole_at(c, 0)) for c in (p, q))
        assert converge(b1, b2)
        r = curve(("1/s^3", "1/s^2"))
        assert not converge(b1, branch_series(r, pole_at(r, 0)))

    def test_branch_of_asymptote_converges(self, corpus):
        for p, pole, b in corpus:
            a = asymptote_at(p, pole)
            if a.kind != "generic":
                continue
            c = a.as_curve()
            assert converge(b, branch_series(c, pole_at(c, 0)))


class TestApproach:

    def test_decay(self):
        p = curve(SQRT_SIN)
        (pole,) = find_poles(p, UNIT)
        d = approach_distance(p, pole, asymptote_at(p, pole))
        assert all(x > y for x, y in zip(d[1:], d[2:]))
        assert d[-1] < 0.05
        # frozen from the 50-digit sampler
        assert_allclose(d, [0.0681156539427, 0.0496464752441, 0.0445616363258,
                            0.0252297711002], rtol=1e-6)

    def test_wrong_line_diverges(self):
        p = curve(RATIONAL)
        pole = pole_at(p, 1)
        a = asymptote_at(p, pole)
        wrong = replace(a, component_polynomials=((17, 2),))
        d = approach_distance(p, pole, wrong)
        assert all(x < y for x, y in zip(d, d[1:]))
        assert d[-1] > 1e4

    def test_polynomial_curve_against_itself(self):
        p = curve(("1/s^3", "1/s^2 - 1/s + 4"))
        pole = pole_at(p, 0)
        d = approach_distance(p, pole, asymptote_at(p, pole))
        assert max(d) < 1e-9

    def test_unreachable_radius(self):
        p = curve(SQRT_SIN)
        (pole,) = find_poles(p, UNIT)
        with pytest.raises(SamplingError):
            approach_distance(p, pole, asymptote_at(p, pole), radii=(1e-30,))
