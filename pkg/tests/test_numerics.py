import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate as sp_integrate

from horoxform.errors import NumericalFailure, PreconditionError
from horoxform.numerics import (SampledCurve, TailModel, cgl_nodes, gauss_jacobi_left, gauss_legendre,
                                integrate, integrate_log_singular, integrate_semi_infinite, richardson_limit,
                                spectral_derivative, sphere_quadrature)


class TestGaussRules:
    def test_legendre_examples(self):
        assert gauss_legendre(2).integrate(lambda x: x ** 2) == pytest.approx(2 / 3, abs=1e-15)
        assert gauss_legendre(3).integrate(lambda x: x ** 4) == pytest.approx(2 / 5, abs=1e-15)
        assert gauss_legendre(20).integrate(np.exp) == pytest.approx(math.e - 1 / math.e, abs=1e-14)

    @pytest.mark.parametrize("m", [1, 2, 5, 12])
    def test_legendre_exactness(self, m):
        rule = gauss_legendre(m)
        assert np.all(rule.weights > 0) and np.all(np.abs(rule.nodes) < 1)
        for k in range(2 * m):
            exact = 0.0 if k % 2 else 2.0 / (k + 1)
            assert rule.integrate(lambda x: x ** k) == pytest.approx(exact, abs=1e-13)

    def test_legendre_rejects_empty(self):
        with pytest.raises(PreconditionError):
            gauss_legendre(0)

    def test_jacobi_examples(self):
        assert gauss_jacobi_left(3, -0.5).integrate(lambda u: np.ones_like(u)) == pytest.approx(2.0, abs=1e-14)
        assert gauss_jacobi_left(3, -0.5).integrate(lambda u: u) == pytest.approx(2 / 3, abs=1e-14)
        assert gauss_jacobi_left(3, 0.5).integrate(lambda u: u ** 2) == pytest.approx(2 / 7, abs=1e-14)

    @given(st.floats(-0.95, 3.0), st.integers(1, 8))
    def test_jacobi_exactness(self, gamma, m):
        rule = gauss_jacobi_left(m, gamma)
        assert np.all(rule.weights > 0)
        for k in range(2 * m):
            assert rule.integrate(lambda u: u ** k) == pytest.approx(1.0 / (k + gamma + 1), rel=1e-11)

    def test_jacobi_rejects_nonintegrable_weight(self):
        with pytest.raises(PreconditionError):
            gauss_jacobi_left(4, -1.0)


class TestAdaptive:
    def test_semi_infinite_examples(self):
        assert integrate_semi_infinite(lambda s: np.exp(-s), 1.0, math.inf, 1e-10) == pytest.approx(
            math.exp(-1), rel=1e-10)
        assert integrate_semi_infinite(lambda s: s ** -3.0, 1.0, 3.0, 1e-10) == pytest.approx(0.5, rel=1e-10)

    def test_semi_infinite_endpoint_singularity(self):
        # int_1^inf (s-1)^(-1/2) e^-s ds = sqrt(pi)/e
        val = integrate_semi_infinite(lambda s: np.exp(-s), 1.0, math.inf, 1e-10, gl=-0.5)
        assert val == pytest.approx(math.sqrt(math.pi) / math.e, rel=1e-10)
        assert val == pytest.approx(0.6520493321732922, rel=1e-12)

    def test_semi_infinite_slow_power_tail(self):
        val = integrate_semi_infinite(lambda s: s ** -1.5, 1.0, 1.5, 1e-10)
        assert val == pytest.approx(2.0, rel=1e-9)

    def test_semi_infinite_error_estimate_covers_error(self):
        val, err = integrate_semi_infinite(lambda s: np.exp(-s) / s, 1.0, math.inf, 1e-10, full_output=True)
        exact = sp_integrate.quad(lambda s: math.exp(-s) / s, 1, np.inf, epsabs=0, epsrel=1e-13)[0]
        assert abs(val - exact) <= max(err, 1e-15)

    def test_semi_infinite_preconditions(self):
        with pytest.raises(PreconditionError):
            integrate_semi_infinite(lambda s: 1 / s, 1.0, 1.0)
        with pytest.raises(NumericalFailure) as info:
            # a tail declared faster than the truth never closes
            integrate_semi_infinite(lambda s: s ** -1.01, 1.0, math.inf, 1e-12, max_chunks=12)
        assert info.value.value > 0

    def test_log_singular_examples(self):
        assert integrate_log_singular(np.log, 0.0, 1.0, 0.0) == pytest.approx(-1.0, abs=1e-10)
        assert integrate_log_singular(lambda u: u * np.log(u), 0.0, 1.0, 0.0) == pytest.approx(-0.25, abs=1e-10)
        val = integrate_log_singular(lambda u: np.log(np.abs(u - 1.0)), 0.0, 2.0, 1.0)
        assert val == pytest.approx(-2.0, abs=1e-10)

    def test_panel_integrator_with_breaks(self):
        val = integrate(np.abs, -1.0, 2.0, breaks=(0.0,))
        assert val == pytest.approx(2.5, rel=1e-13)


class TestSphereRule:
    @pytest.mark.parametrize("n", range(2, 8))
    def test_normalized_moments(self, n):
        rule = sphere_quadrature(n, 8)
        assert rule.weights.sum() == pytest.approx(1.0, abs=1e-14)
        assert np.allclose(np.linalg.norm(rule.nodes, axis=1), 1.0)
        assert rule.integrate(lambda w: w[:, -1]) == pytest.approx(0.0, abs=1e-14)
        assert rule.integrate(lambda w: w[:, -1] ** 2) == pytest.approx(1.0 / n, abs=1e-14)
        assert rule.integrate(lambda w: w[:, 0] ** 2 * w[:, -1] ** 2) == pytest.approx(
            1.0 / (n * (n + 2)), abs=1e-14)

    def test_unsupported_dimension(self):
        with pytest.raises(PreconditionError):
            sphere_quadrature(8, 4)


class TestSpectral:
    def test_examples(self):
        c = SampledCurve.from_function(lambda s: s ** 2, 0.0, 2.0, 8)
        assert np.allclose(spectral_derivative(c).values, 2 * c.grid, atol=1e-12)
        e = SampledCurve.from_function(np.exp, 1.0, 3.0, 32)
        assert np.max(np.abs(spectral_derivative(e, 2).values - np.exp(e.grid))) <= 1e-9 * np.exp(3)
        k = SampledCurve.from_function(lambda s: np.full_like(s, 4.0), 1.0, 3.0, 16)
        assert np.allclose(spectral_derivative(k, 3).values, 0.0, atol=1e-9)

    def test_interpolant_reproduces_samples(self):
        g = cgl_nodes(20, 1.0, 4.0)
        c = SampledCurve(g, np.sin(g))
        assert np.allclose(c(g), np.sin(g), atol=1e-13)
        spline = SampledCurve(np.linspace(1, 4, 20), np.cos(np.linspace(1, 4, 20)), "spline")
        assert np.allclose(spline(spline.grid), spline.values, atol=1e-15)

    def test_composition_matches_second_derivative(self):
        c = SampledCurve.from_function(lambda s: np.sin(2 * s), 0.0, 3.0, 40)
        twice = spectral_derivative(spectral_derivative(c))
        assert np.allclose(twice.values, spectral_derivative(c, 2).values, atol=1e-8)

    def test_errors(self):
        c = SampledCurve.from_function(np.exp, 1.0, 2.0, 6)
        with pytest.raises(PreconditionError):
            spectral_derivative(c, 5)
        with pytest.raises(PreconditionError):
            SampledCurve(np.array([1.0, 0.5]), np.array([0.0, 1.0]), "spline")
        with pytest.raises(PreconditionError):
            c(np.array([5.0]))

    def test_tail_extension(self):
        c = SampledCurve.from_function(lambda s: s ** -3.0, 1.0, 4.0, 32, tail=TailModel.power(4.0, 4.0 ** -3, 3.0))
        assert c(np.array([8.0]))[0] == pytest.approx(8.0 ** -3, rel=1e-12)
        d = c.derivative()
        assert d(np.array([8.0]))[0] == pytest.approx(-3 * 8.0 ** -4, rel=1e-12)


class TestRichardson:
    def test_examples(self):
        assert richardson_limit([3.1, 3.025], [0.1, 0.025]).value == pytest.approx(3.0, abs=1e-13)
        assert richardson_limit([2.01, 2.0025], [0.1, 0.05], p=2).value == pytest.approx(2.0, abs=1e-13)
        hs = 0.1 * 4.0 ** -np.arange(4)
        res = richardson_limit(np.exp(hs), hs)
        assert res.value == pytest.approx(1.0, abs=1e-6)
        assert not res.warning

    def test_warning_flag_on_erratic_sequence(self):
        res = richardson_limit([1.0, 1.0001, 1.02, 1.5], [0.05, 0.1, 0.2, 0.4])
        assert res.warning and math.isfinite(res.value)

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            richardson_limit([1.0], [0.1])
        with pytest.raises(PreconditionError):
            richardson_limit([1.0, 2.0], [0.1, -0.1])
