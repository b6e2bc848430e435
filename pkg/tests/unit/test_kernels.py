"""Unit tests for spectral kernels, covariance grids and process integrals."""

import io
import math
import unittest

import numpy as np
from scipy.special import erf

from src.lib import algebra
from src.lib.hermite import hermite_fourier, hermite_xi
from src.lib.hilbert_scale import h_norm, p_norm
from src.lib.kernels import (
    CovarianceGrid,
    apply_Sm,
    brownian_covariance,
    calibrate_fbm,
    covariance_grid,
    covariance_quadrature,
    covariance_series,
    differentiability_check,
    embed_X,
    fbm_covariance,
    indicator_coeff,
    indicator_coefficients,
    process_integral,
)
from src.lib.multi_index import MultiIndex
from src.lib.scalars import FLOAT
from src.lib.spectral import brownian_density, fbm_density, power_law_density
from src.utils.error_handlers import DomainViolation, NoConvergence, TailDivergence

GRID = [0.1 * k for k in range(1, 11)]


class TestClosedForms(unittest.TestCase):
    """Test cases for the reference kernels and the coefficient embedding."""

    def test_reference_kernels(self):
        self.assertEqual(brownian_covariance(0.3, 0.7), 0.3)
        self.assertAlmostEqual(fbm_covariance(0.5, 0.3, 0.7), 0.3)
        self.assertAlmostEqual(fbm_covariance(0.25, 1.0, 1.0), 1.0)

    def test_embed_is_isometric(self):
        coefficients = np.array([0.5, -1.25, 0.0, 2.0])
        element = embed_X(coefficients)
        self.assertEqual(element.coefficient(MultiIndex.generator(2)), -1.25)
        self.assertTrue(element.coefficient(MultiIndex.generator(3)) == 0)
        self.assertAlmostEqual(h_norm(element, 0), float(np.linalg.norm(coefficients)))
        self.assertAlmostEqual(p_norm(element, 2), float(np.linalg.norm(coefficients)))


class TestIndicatorCoefficients(unittest.TestCase):
    """Test cases for the Hermite coefficients of S_m 1_[0,t]."""

    def test_brownian_low_orders(self):
        t = 1.0
        expected0 = math.pi ** -0.25 * math.sqrt(math.pi / 2) * erf(t / math.sqrt(2))
        expected1 = math.sqrt(2.0) * math.pi ** -0.25 * (1.0 - math.exp(-0.5 * t * t))
        self.assertAlmostEqual(indicator_coeff(brownian_density(), 0, t), expected0, places=9)
        self.assertAlmostEqual(indicator_coeff(brownian_density(), 1, t), expected1, places=9)

    def test_zero_time(self):
        np.testing.assert_allclose(indicator_coefficients(brownian_density(), 0.0, 10), 0.0, atol=1e-15)

    def test_inadmissible_density(self):
        with self.assertRaises(DomainViolation):
            indicator_coefficients(power_law_density(1.5), 0.5, 4)
        with self.assertRaises(ValueError):
            indicator_coeff(brownian_density(), -1, 0.5)

    def test_fock_convergence(self):
        density = brownian_density()
        for t, s in ((0.3, 0.7), (0.5, 0.5), (0.9, 0.2)):
            reference = covariance_quadrature(density, t, s)
            errors = [abs(covariance_series(density, t, s, N) - reference) for N in (25, 50, 100, 200)]
            for coarse, fine in zip(errors, errors[1:]):
                self.assertLess(fine, coarse, (t, s, errors))
            self.assertLess(errors[-1], 5e-2)
        self.assertEqual(covariance_series(density, 0.3, 0.7, 0), 0.0)

    def test_partial_sums_nondecreasing_on_diagonal(self):
        sums = [covariance_series(brownian_density(), 0.5, 0.5, N) for N in (25, 50, 100, 200)]
        self.assertEqual(sums, sorted(sums))
        self.assertLess(sums[-1], 0.5 + 1e-9)

    def test_coefficients_decay_over_octaves(self):
        coefficients = np.abs(indicator_coefficients(brownian_density(), 2.0, 256))
        peaks = [coefficients[2**k : 2 ** (k + 1)].max() for k in range(4, 8)]
        self.assertEqual(peaks, sorted(peaks, reverse=True))


class TestApplySm(unittest.TestCase):
    """Test cases for the spectral multiplier on a uniform grid."""

    def test_brownian_is_identity(self):
        x = np.array([0.0, 0.5, 1.5])
        values = apply_Sm(brownian_density(), lambda u: math.sqrt(2 * math.pi) * np.exp(-0.5 * u * u), x)
        np.testing.assert_allclose(values.real, np.exp(-0.5 * x * x), atol=1e-10)
        np.testing.assert_allclose(values.imag, 0.0, atol=1e-10)

    def test_hermite_functions_are_fixed(self):
        x = np.linspace(-2.0, 2.0, 9)
        values = apply_Sm(brownian_density(), lambda u: hermite_fourier(3, u), x)
        np.testing.assert_allclose(values.real, hermite_xi(3, x), atol=1e-10)
        np.testing.assert_allclose(values.imag, 0.0, atol=1e-10)

    def test_scalar_point(self):
        value = apply_Sm(brownian_density(), lambda u: math.sqrt(2 * math.pi) * np.exp(-0.5 * u * u), 0.0)
        self.assertEqual(np.shape(value), ())
        self.assertAlmostEqual(complex(value).real, 1.0, places=10)

    def test_growing_spectrum_rejected(self):
        with self.assertRaises(DomainViolation):
            apply_Sm(power_law_density(-1.5), lambda u: (1.0 + u * u) ** -0.5, np.array([0.0]))


class TestCovarianceQuadrature(unittest.TestCase):
    """Test cases for the quadrature kernel against closed forms."""

    def test_brownian_grid(self):
        grid = covariance_grid(brownian_density(), GRID, GRID, workers=4)
        expected = np.minimum.outer(np.array(GRID), np.array(GRID))
        self.assertLess(np.abs(grid.values - expected).max(), 1e-5)
        self.assertTrue(grid.is_symmetric(1e-8))
        self.assertTrue(grid.is_psd())

    def test_fbm_grids(self):
        times = [0.25, 0.5, 0.75, 1.0]
        for hurst in (0.25, 0.75):
            grid = covariance_grid(fbm_density(hurst), times, times)
            expected = np.array([[fbm_covariance(hurst, t, s) for t in times] for s in times])
            self.assertLess(np.abs(grid.values - expected).max(), 1e-3, f"H={hurst}")

    def test_half_hurst_matches_brownian(self):
        times = [0.2, 0.6, 1.0]
        bm = covariance_grid(brownian_density(), times, times)
        fbm = covariance_grid(fbm_density(0.5), times, times)
        np.testing.assert_allclose(fbm.values, bm.values, atol=1e-12)

    def test_zero_time(self):
        self.assertEqual(covariance_quadrature(brownian_density(), 0.0, 0.4), 0.0)

    def test_divergent_tail(self):
        with self.assertRaises(TailDivergence):
            covariance_quadrature(power_law_density(1.2), 0.5, 0.5)

    def test_calibration(self):
        for hurst in (0.25, 0.75):
            calibration = calibrate_fbm(hurst)
            self.assertLess(calibration.relative_gap, 1e-3, f"H={hurst}")

    def test_series_mode(self):
        grid = covariance_grid(brownian_density(), [0.5, 1.0], [0.5], mode="series", N=200)
        self.assertEqual(grid.values.shape, (1, 2))
        self.assertLess(np.abs(grid.values - np.array([[0.5, 0.5]])).max(), 5e-2)
        self.assertFalse(grid.is_square)

    def test_invalid_arguments(self):
        with self.assertRaises(ValueError):
            covariance_grid(brownian_density(), [0.5], [0.5], mode="exact")
        with self.assertRaises(ValueError):
            covariance_grid(brownian_density(), [0.5, 0.2], [0.5])
        with self.assertRaises(ValueError):
            covariance_grid(brownian_density(), [], [0.5])


class TestCovarianceGrid(unittest.TestCase):
    """Test cases for grid diagnostics and CSV output."""

    def setUp(self):
        times = np.array([0.5, 1.0])
        self.grid = CovarianceGrid(times, times, np.array([[0.5, 0.5], [0.5, 1.0]]))

    def test_csv(self):
        buffer = io.StringIO()
        self.grid.to_csv(buffer)
        self.assertEqual(buffer.getvalue(), "s\t0.5\t1\n0.5\t0.5\t0.5\n1\t0.5\t1\n")

    def test_diagnostics(self):
        self.assertTrue(self.grid.is_square)
        self.assertTrue(self.grid.is_symmetric())
        self.assertAlmostEqual(self.grid.min_eigenvalue(), (1.5 - math.sqrt(1.25)) / 2)
        self.assertTrue(self.grid.is_psd())
        indefinite = CovarianceGrid(self.grid.t_values, self.grid.s_values, np.array([[0.0, 1.0], [1.0, 0.0]]))
        self.assertFalse(indefinite.is_psd())

    def test_rectangular_eigenvalues(self):
        grid = CovarianceGrid(np.array([0.5, 1.0]), np.array([0.5]), np.array([[0.5, 0.5]]))
        with self.assertRaises(ValueError):
            grid.min_eigenvalue()


class TestDifferentiability(unittest.TestCase):
    """Test cases for the finite-difference check of t -> X S_m 1_[0,t]."""

    def test_first_order_convergence(self):
        report = differentiability_check(brownian_density(), 0.5, 1, N=200)
        self.assertEqual(list(report.columns), ["h", "error", "ratio"])
        self.assertTrue(np.isnan(report["ratio"].iloc[0]))
        self.assertTrue((report["ratio"].iloc[1:] >= 5).all(), report)

    def test_fbm_first_order_convergence(self):
        report = differentiability_check(fbm_density(0.75), 0.5, 1, N=200)
        self.assertTrue((report["ratio"].iloc[1:] >= 5).all(), report)

    def test_empty_truncation(self):
        report = differentiability_check(brownian_density(), 0.5, 1, N=0)
        self.assertTrue((report["error"] == 0).all())


class TestProcessIntegral(unittest.TestCase):
    """Test cases for integrals of Grassmann-valued processes."""

    def test_linear_integrand(self):
        result = process_integral(lambda t: algebra.scalar(t, FLOAT), lambda t: algebra.generator(1, FLOAT), p=2)
        expected = algebra.scale(0.5, algebra.generator(1, FLOAT))
        self.assertLess(h_norm(algebra.sub(result.value, expected), -2), 1e-8)
        self.assertEqual(result.vage_violations, 0)
        self.assertEqual(result.intervals, 2)

    def test_constant_integrand(self):
        result = process_integral(lambda t: algebra.one(FLOAT), lambda t: algebra.generator(1, FLOAT), p=1)
        self.assertLess(h_norm(algebra.sub(result.value, algebra.generator(1, FLOAT)), -1), 1e-12)

    def test_quadratic_integrand(self):
        result = process_integral(
            lambda t: algebra.scalar(t * t, FLOAT), lambda t: algebra.generator(1, FLOAT), p=1, q=0
        )
        coefficient = complex(result.value.coefficient(MultiIndex.generator(1)))
        self.assertLess(abs(coefficient.real - 1.0 / 3.0), 1e-7)
        self.assertGreater(result.intervals, 2)

    def test_grid_input(self):
        nodes = [algebra.scalar(k / 4, FLOAT) for k in range(5)]
        result = process_integral(nodes, lambda t: algebra.generator(2, FLOAT), p=1)
        self.assertLess(h_norm(algebra.sub(result.value, algebra.scale(0.5, algebra.generator(2, FLOAT))), -1), 1e-8)

    def test_grid_too_coarse(self):
        nodes = [algebra.scalar((k / 4) ** 2, FLOAT) for k in range(5)]
        with self.assertRaises(NoConvergence):
            process_integral(nodes, lambda t: algebra.generator(1, FLOAT), p=1)

    def test_invalid_arguments(self):
        with self.assertRaises(ValueError):
            process_integral([algebra.one()] * 4, [algebra.one()] * 4, p=1)
        with self.assertRaises(ValueError):
            process_integral(lambda t: algebra.one(), lambda t: algebra.one(), p=1, q=1)


if __name__ == '__main__':
    unittest.main()
