from __future__ import annotations

import io
import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.integrate

from freemoments.freeconv import (
    DensityGrid,
    SubordinationError,
    cauchy_semicircle,
    cauchy_uniform,
    density_grid,
    detect_support,
    exp_pushforward_density,
    expansion_moments,
    free_lognormal_support,
    free_sum_cauchy,
    grid_moments,
)
from freemoments.moments import free_lognormal_moment, semicircle_uniform_moment


def quad_transform(density, lo: float, hi: float, z: complex) -> complex:
    """Brute-force Cauchy transform by quadrature — the independent oracle."""
    real, _ = scipy.integrate.quad(
        lambda x: (density(x) * (z - x).real) / abs(z - x) ** 2, lo, hi, limit=200
    )
    imag, _ = scipy.integrate.quad(
        lambda x: (-density(x) * z.imag) / abs(z - x) ** 2, lo, hi, limit=200
    )
    return complex(real, imag)


class TestCauchyTransforms:
    def test_semicircle_anchor(self):
        # G(i) for radius 2: -i (sqrt 5 - 1)/2
        value = cauchy_semicircle(1j, 2.0)
        assert value.real == pytest.approx(0.0, abs=1e-15)
        assert value.imag == pytest.approx(-(math.sqrt(5) - 1) / 2, rel=1e-14)

    def test_uniform_anchor(self):
        assert cauchy_uniform(1j, -1, 1) == pytest.approx(-1j * math.pi / 4, rel=1e-14)

    def test_semicircle_against_quadrature(self):
        for radius in (1.0, 2.5):
            density = lambda x: (2 / (math.pi * radius**2)) * math.sqrt(
                max(radius**2 - x * x, 0.0)
            )
            for z in (0.3 + 0.7j, -1.2 + 0.1j, 2.0 + 2.0j):
                ours = cauchy_semicircle(z, radius)
                ref = quad_transform(density, -radius, radius, z)
                assert ours == pytest.approx(ref, rel=1e-8)

    def test_uniform_against_quadrature(self):
        lo, hi = -0.5, 1.5
        density = lambda x: 1.0 / (hi - lo)
        for z in (0.2 + 0.4j, 1.0 + 1.0j):
            ours = cauchy_uniform(z, lo, hi)
            ref = quad_transform(density, lo, hi, z)
            assert ours == pytest.approx(ref, rel=1e-9)

    def test_point_interval_collapses_to_resolvent(self):
        assert cauchy_uniform(2j, 0.5, 0.5) == pytest.approx(1 / (2j - 0.5), rel=1e-15)

    def test_upper_half_plane_required(self):
        with pytest.raises(ValueError):
            cauchy_semicircle(1.0 - 0.5j, 2.0)
        with pytest.raises(ValueError):
            cauchy_uniform(complex(1.0, 0.0), -1, 1)

    def test_large_argument_asymptotics(self):
        # z G(z) -> 1, including far from the support where naive branch
        # combinations cancel catastrophically
        for y in (10.0, 1e3, 1e5):
            z = complex(0.7, y)
            assert abs(z * cauchy_semicircle(z, 2.0) - 1) < 5 / y
            assert abs(z * cauchy_uniform(z, -1, 1) - 1) < 5 / y


class TestFreeSumCauchy:
    def test_herglotz_and_symmetry(self):
        xs = np.linspace(-4, 4, 9)
        for x in xs:
            z = complex(x, 0.05)
            g = free_sum_cauchy(z, 2.0, -1.0, 1.0)
            assert g.imag < 0
            # real measure: G(-conj z) = -conj G(z); here the law is even
            mirrored = free_sum_cauchy(complex(-x, 0.05), 2.0, -1.0, 1.0)
            assert mirrored == pytest.approx(-g.conjugate(), rel=1e-9)

    def test_degenerate_interval_is_shifted_semicircle(self):
        for z in (0.5 + 0.3j, -1.0 + 1.0j):
            combined = free_sum_cauchy(z, 2.0, 0.75, 0.75)
            assert combined == pytest.approx(cauchy_semicircle(z - 0.75, 2.0), rel=1e-11)

    def test_moments_via_expansion_ladder(self):
        t = 1.0
        radius = 2.0 * math.sqrt(t)
        transform = lambda z: free_sum_cauchy(z, radius, -t, 0.0)
        estimates = expansion_moments(transform, 4, y_start=8.0, levels=5)
        for n in range(5):
            exact = float(semicircle_uniform_moment(n, t, -t, 0))
            assert abs(estimates[n] - exact) <= 1e-5 * max(1.0, abs(exact))

    def test_non_convergence_raises(self):
        with pytest.raises(SubordinationError):
            free_sum_cauchy(0.1 + 1e-9j, 2.0, -1.0, 1.0, max_iterations=3)

    def test_ladder_depth_validation(self):
        with pytest.raises(ValueError):
            expansion_moments(lambda z: 1 / z, 8, levels=2)


class TestDensityGrid:
    def test_semicircle_center_value(self):
        # degenerate uniform: pure semicircle, density 1/pi at 0 for radius 2
        grid = density_grid(2.0, 0.0, 0.0, -2.6, 2.6, 2000, 1e-3)
        mid = grid.values[np.argmin(np.abs(grid.abscissae))]
        assert mid == pytest.approx(1 / math.pi, abs=2e-3)

    def test_uniform_dominated_plateau(self):
        # negligible semicircle: density ~ 1/2 inside [-1, 1]
        grid = density_grid(0.01, -1.0, 1.0, -1.5, 1.5, 3000, 1e-3)
        inside = np.abs(grid.abscissae) < 0.5
        assert np.allclose(grid.values[inside], 0.5, atol=5e-3)

    def test_mass_estimate_near_one(self):
        t = 1.0
        edge = math.log(free_lognormal_support(t).upper)
        grid = density_grid(2.0, -0.5, 0.5, -edge - 0.25, edge + 0.25, 2000, 1e-3)
        assert 0.98 <= grid.mass_estimate <= 1.02

    def test_validation(self):
        with pytest.raises(ValueError):
            DensityGrid(np.array([1.0, 0.5]), np.array([0.1, 0.1]), 1e-3, 1.0)
        with pytest.raises(ValueError):
            DensityGrid(np.array([0.0, 1.0]), np.array([-0.1, 0.1]), 1e-3, 1.0)
        with pytest.raises(ValueError):
            DensityGrid(np.array([0.0, 1.0]), np.array([0.1, 0.1]), 0.0, 1.0)
        with pytest.raises(ValueError):
            density_grid(2.0, 0.0, 0.0, 1.0, -1.0, 100, 1e-3)

    def test_csv_round_trip_is_bit_exact(self):
        grid = density_grid(2.0, -0.5, 0.5, -3.0, 3.0, 64, 1e-2)
        buffer = io.StringIO()
        grid.to_csv(buffer)
        text = buffer.getvalue()
        assert text.startswith("x,density\n")
        parsed = DensityGrid.from_csv(io.StringIO(text), eta=grid.eta)
        assert np.array_equal(parsed.abscissae, grid.abscissae)
        assert np.array_equal(parsed.values, grid.values)

    def test_json_round_trip(self):
        grid = density_grid(1.0, -0.25, 0.25, -2.0, 2.0, 32, 1e-2)
        parsed = DensityGrid.from_json(grid.to_json())
        assert np.array_equal(parsed.abscissae, grid.abscissae)
        assert np.array_equal(parsed.values, grid.values)
        assert parsed.mass_estimate == grid.mass_estimate


class TestGridMoments:
    def test_matches_exact_engine(self):
        t = 1.0
        radius = 2.0 * math.sqrt(t)
        lo, hi = -t, 0.0
        window_lo = -(radius + t) - 0.3
        window_hi = radius + 0.3
        estimates = grid_moments(radius, lo, hi, window_lo, window_hi, 4000, 1e-3, 6)
        for n in range(7):
            exact = float(semicircle_uniform_moment(n, t, -t, 0))
            assert abs(estimates[n] - exact) <= 1e-3 * max(abs(exact), 1e-2), n

    def test_contour_correction_beats_plain_trapezoid(self):
        # same grid, same eta: the plain x^n rho_eta quadrature carries the
        # documented O(eta) spreading bias, the contour version cancels it
        t = 1.0
        radius = 2.0
        grid = density_grid(radius, -t, 0.0, -3.3, 2.3, 4000, 1e-3)
        contour = grid_moments(radius, -t, 0.0, -3.3, 2.3, 4000, 1e-3, 4)
        exact = float(semicircle_uniform_moment(4, t, -t, 0))
        assert abs(contour[4] - exact) < abs(grid.moment(4) - exact) / 50


class TestPushforwardAndSupport:
    def test_pushforward_preserves_mass_and_first_moment(self):
        t = 1.0
        edge = math.log(free_lognormal_support(t).upper)
        log_grid = density_grid(2.0, -0.5, 0.5, -edge - 0.25, edge + 0.25, 4000, 1e-3)
        pushed = exp_pushforward_density(log_grid)
        assert pushed.mass_estimate == pytest.approx(log_grid.mass_estimate, abs=1e-3)
        assert pushed.moment(1) == pytest.approx(
            free_lognormal_moment(1, t), rel=1e-3
        )

    def test_support_endpoints_multiply_to_one(self):
        for t in (0.1, 0.5, 1.0, 2.0, 8.0):
            support = free_lognormal_support(t)
            assert support.lower * support.upper == pytest.approx(1.0, rel=1e-12)
            assert support.lower < 1 < support.upper

    def test_support_collapses_at_small_time(self):
        support = free_lognormal_support(1e-12)
        assert support.lower == pytest.approx(1.0, abs=1e-5)
        assert support.upper == pytest.approx(1.0, abs=1e-5)

    def test_support_closed_form_at_two(self):
        support = free_lognormal_support(2.0)
        r = math.sqrt(2.0)
        assert support.lower == pytest.approx((3 - 2 * r) * math.exp(-r), rel=1e-14)
        assert support.upper == pytest.approx((3 + 2 * r) * math.exp(r), rel=1e-14)

    def test_detect_support_on_synthetic_triangle(self):
        xs = np.linspace(-2.0, 2.0, 4001)
        values = np.clip(1.0 - np.abs(xs), 0.0, None)
        grid = DensityGrid(xs, values, 1e-3, 1.0)
        # a relative threshold q on a unit-slope triangle sits q inside the edge
        found = detect_support(grid, threshold=1e-2)
        assert found.lower == pytest.approx(-1.0, abs=1.2e-2)
        assert found.upper == pytest.approx(1.0, abs=1.2e-2)

    def test_multiplicative_detection_needs_positive_axis(self):
        xs = np.linspace(-1.0, 1.0, 11)
        grid = DensityGrid(xs, np.ones_like(xs), 1e-3, 2.0)
        with pytest.raises(ValueError):
            detect_support(grid, multiplicative=True)

    def test_threshold_validated(self):
        xs = np.linspace(0.5, 1.5, 11)
        grid = DensityGrid(xs, np.ones_like(xs), 1e-3, 1.0)
        with pytest.raises(ValueError):
            detect_support(grid, threshold=0.0)
