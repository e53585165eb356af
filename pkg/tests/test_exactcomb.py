from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freemoments.exactcomb import (
    LOG_SERIES_CAP,
    alternating_binomial_sum_check,
    binomial,
    falling_factorial,
    generalized_binomial,
    rising_factorial,
    stirling_first,
    stirling_via_log_series,
    verify_stirling_identity,
)


def falling_factorial_coefficients(n: int) -> list[int]:
    """Coefficients of x(x-1)...(x-n+1), built by polynomial convolution.

    Independent oracle for the Stirling table: the k-th coefficient is
    s(n, k) by definition.
    """
    coeffs = [1]
    for j in range(n):
        # multiply by (x - j)
        shifted = [0] + coeffs
        scaled = [-j * c for c in coeffs] + [0]
        coeffs = [a + b for a, b in zip(shifted, scaled)]
    return coeffs


class TestStirlingFirst:
    def test_matches_falling_factorial_expansion(self):
        for n in range(21):
            oracle = falling_factorial_coefficients(n)
            for k in range(n + 1):
                assert stirling_first(n, k) == oracle[k]

    def test_hand_anchors(self):
        assert stirling_first(3, 2) == -3
        assert stirling_first(4, 2) == 11
        assert stirling_first(5, 1) == 24
        assert stirling_first(0, 0) == 1

    def test_out_of_range_is_zero(self):
        assert stirling_first(4, 7) == 0
        assert stirling_first(5, 0) == 0

    def test_negative_indices_rejected(self):
        with pytest.raises(ValueError):
            stirling_first(-1, 0)
        with pytest.raises(ValueError):
            stirling_first(3, -2)

    def test_row_sums(self):
        # sum_k s(n,k) = falling factorial at 1 = 0 for n >= 2;
        # sum_k |s(n,k)| = n! (permutations by cycle count)
        import math

        for n in range(2, 18):
            row = [stirling_first(n, k) for k in range(n + 1)]
            assert sum(row) == 0
            assert sum(abs(v) for v in row) == math.factorial(n)

    @given(st.integers(min_value=0, max_value=40), st.integers(min_value=0, max_value=41))
    def test_recurrence(self, n: int, k: int):
        assert stirling_first(n + 1, k) == (
            (stirling_first(n, k - 1) if k >= 1 else 0) - n * stirling_first(n, k)
        )

    @given(
        st.integers(min_value=0, max_value=12),
        st.fractions(min_value=-8, max_value=8),
    )
    def test_generates_falling_factorial(self, n: int, x: Fraction):
        expansion = sum(stirling_first(n, k) * x**k for k in range(n + 1))
        assert expansion == falling_factorial(x, n)


class TestLogSeriesRoute:
    def test_agrees_with_table(self):
        for n in range(21):
            for k in range(n + 1):
                assert stirling_via_log_series(n, k) == stirling_first(n, k)

    def test_cap_enforced(self):
        with pytest.raises(ValueError, match="cap"):
            stirling_via_log_series(10, 2, cap=5)
        assert LOG_SERIES_CAP >= 512

    def test_k_above_n_rejected(self):
        with pytest.raises(ValueError):
            stirling_via_log_series(3, 4)


class TestStirlingIdentity:
    def test_small_anchors(self):
        low = verify_stirling_identity(1, 1)
        assert low.equal and low.lhs == 2

        # s(2, 4) = 0, so both sides vanish
        degenerate = verify_stirling_identity(3, 1)
        assert degenerate.equal and degenerate.lhs == 0

        # 2*2*s(4,3) = -24
        mixed = verify_stirling_identity(2, 3)
        assert mixed.equal and mixed.lhs == -24

    def test_sweep(self):
        for l in range(1, 11):
            for m in range(1, 11):
                outcome = verify_stirling_identity(l, m)
                assert outcome.equal, (l, m, outcome)

    def test_range_validation(self):
        with pytest.raises(ValueError):
            verify_stirling_identity(0, 3)


class TestBinomials:
    def test_binomial_matches_comb(self):
        import math

        for n in range(13):
            for k in range(n + 3):
                expected = math.comb(n, k) if k <= n else 0
                assert binomial(n, k) == expected
        with pytest.raises(ValueError):
            binomial(3, -1)

    def test_generalized_integer_inputs_stay_exact(self):
        assert generalized_binomial(3, 2) == Fraction(3)
        assert isinstance(generalized_binomial(3, 2), Fraction)

    def test_generalized_half(self):
        assert generalized_binomial(Fraction(1, 2), 2) == Fraction(-1, 8)

    def test_generalized_complex(self):
        assert generalized_binomial(1j, 1) == 1j

    def test_rising_falling(self):
        assert rising_factorial(1, 4) == 24
        assert rising_factorial(-3, 5) == 0
        assert rising_factorial(Fraction(1, 2), 2) == Fraction(3, 4)
        assert falling_factorial(5, 2) == 20

    @given(
        st.fractions(min_value=-6, max_value=6),
        st.integers(min_value=0, max_value=10),
    )
    def test_rising_falling_reflection(self, x: Fraction, n: int):
        assert falling_factorial(x, n) == (-1) ** n * rising_factorial(-x, n)


class TestAlternatingBinomialSum:
    @settings(max_examples=60)
    @given(st.integers(min_value=1, max_value=30), st.data())
    def test_partial_sums(self, N: int, data):
        k = data.draw(st.integers(min_value=0, max_value=N))
        assert alternating_binomial_sum_check(N, k)

    def test_domain(self):
        with pytest.raises(ValueError):
            alternating_binomial_sum_check(0, 0)
        with pytest.raises(ValueError):
            alternating_binomial_sum_check(3, 5)
