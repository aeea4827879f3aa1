import math

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from binombounds import DomainError
from binombounds.entropy import (
    a_function,
    b_function,
    entropy_curvature,
    lattice_deviation,
    relative_entropy,
    sign_of,
)

prob = st.floats(min_value=1e-12, max_value=1 - 1e-12)
unit = st.floats(min_value=0.0, max_value=1.0)


def mp_entropy(x, p):
    x, p = mpmath.mpf(x), mpmath.mpf(p)
    total = mpmath.mpf(0)
    if x > 0:
        total += x * mpmath.log(x / p)
    if x < 1:
        total += (1 - x) * mpmath.log((1 - x) / (1 - p))
    return total


class TestRelativeEntropy:
    def test_zero_on_diagonal(self):
        assert relative_entropy(0.3, 0.3) == 0.0

    def test_endpoint_convention(self):
        assert relative_entropy(1.0, 0.5) == pytest.approx(math.log(2.0), rel=1e-15)
        assert relative_entropy(0.0, 0.25) == pytest.approx(-math.log(0.75), rel=1e-15)

    def test_reference_value(self):
        # 0.4 ln 0.8 + 0.6 ln 1.2 at 50 digits: 0.0201355135506888...
        assert relative_entropy(0.4, 0.5) == pytest.approx(0.020135513550688873, rel=1e-15)

    def test_matches_mpmath_including_near_diagonal(self, mp50):
        cases = [(0.5, 0.5 + 1e-9), (0.3 + 1e-14, 0.3), (1e-10, 0.2), (0.999, 1e-6), (0.01, 0.99),
                 (0.4, 0.400001), (0.0, 1e-12), (1.0, 1 - 1e-12)]
        for x, p in cases:
            exact = mp_entropy(x, p)
            assert relative_entropy(x, p) == pytest.approx(float(exact), rel=1e-13), (x, p)

    def test_subnormal_reference(self, mp50):
        for p in (5e-324, 1e-310, 2.5e-308):
            assert relative_entropy(0.5, p) == pytest.approx(float(mp_entropy(0.5, p)), rel=1e-14)

    @given(unit, prob)
    def test_non_negative(self, x, p):
        assert relative_entropy(x, p) >= 0.0

    @given(prob, prob)
    def test_relative_accuracy(self, x, p):
        with mpmath.workdps(40):
            exact = mp_entropy(x, p)
        if exact > 0:
            assert abs(relative_entropy(x, p) - exact) <= 1e-13 * exact

    @pytest.mark.parametrize("x, p", [(-0.1, 0.5), (1.1, 0.5), (0.5, 0.0), (0.5, 1.0)])
    def test_domain(self, x, p):
        with pytest.raises(DomainError):
            relative_entropy(x, p)


class TestCurvature:
    def test_limit_at_zero_deviation(self):
        p = 0.3
        assert entropy_curvature(p, 1 - p, p, 1 - p, 0.0) == pytest.approx(1 / (2 * p * (1 - p)), rel=1e-15)

    @given(prob, prob)
    def test_is_entropy_over_squared_deviation(self, x, p):
        d = x - p
        assume(abs(d) > 1e-6)
        value = entropy_curvature(x, 1 - x, p, 1 - p, d)
        assert value * d * d == pytest.approx(relative_entropy(x, p), rel=1e-12)


class TestLatticeDeviation:
    def test_exact_hit_is_zero(self):
        assert lattice_deviation(2, 8, 0.25) == 0.0
        assert lattice_deviation(50, 100, 0.5) == 0.0
        # the double nearest 0.3 sits just below 3/10
        assert lattice_deviation(3, 10, 0.3) > 0.0

    @given(st.integers(min_value=1, max_value=10**6), st.data(), prob)
    def test_sign_is_exact(self, n, data, p):
        from fractions import Fraction

        k = data.draw(st.integers(min_value=0, max_value=n))
        exact = Fraction(k, n) - Fraction(p)
        d = lattice_deviation(k, n, p)
        assert sign_of(d) == sign_of(exact)


class TestSign:
    @pytest.mark.parametrize("x, s", [(0.0, 0), (-0.0, 0), (-3.2, -1), (1e-300, 1), (5e-324, 1)])
    def test_values(self, x, s):
        assert sign_of(x) == s


class TestBAndA:
    def test_zero_at_alpha(self):
        assert b_function(0.37, 0.37) == 0.0
        assert a_function(0.37, 0.37) == 0.0

    def test_reference_values(self):
        # 0.5 ln(0.5/0.4) + 0.5 ln(0.5/0.6) = 0.0204109972601275651...
        assert b_function(0.4, 0.5) == pytest.approx(0.020410997260127565, rel=1e-15)
        assert a_function(0.4, 0.5) == pytest.approx(math.sqrt(2 * 0.020410997260127565), rel=1e-15)
        assert a_function(0.4, 0.5) == pytest.approx(0.20204453598218173, rel=1e-15)

    @given(prob, prob)
    def test_b_non_negative_and_a_squares_to_2b(self, z, alpha):
        b = b_function(z, alpha)
        a = a_function(z, alpha)
        assert b >= 0.0
        assert a * a / 2 == pytest.approx(b, rel=1e-12, abs=1e-300)

    @given(prob, prob)
    def test_a_sign(self, z, alpha):
        assert sign_of(a_function(z, alpha)) == sign_of(alpha - z)

    def test_b_decreases_then_increases(self):
        alpha = 0.3
        left = [b_function(i / 1000, alpha) for i in range(1, 301)]
        right = [b_function(i / 1000, alpha) for i in range(300, 1000)]
        assert all(a > b for a, b in zip(left, left[1:]))
        assert all(a < b for a, b in zip(right, right[1:]))
