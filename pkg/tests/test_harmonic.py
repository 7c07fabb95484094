import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import loggamma

from horoxform.errors import PreconditionError
from horoxform.fields import RadialProfile, ScalarField, compact_bump, smooth_bump
from horoxform.harmonic import (SpectralParam, convolution_transform_check, fourier_transform, log_gamma,
                                q_alpha_hat, spherical_function, spherical_function_angular, spherical_transform)
from horoxform.lorentz import HPoint
from horoxform.oracles import spherical_function_n3
from horoxform.potentials import even_curve, q_alpha_profile, radial_laplacian


class TestLogGamma:
    @given(st.floats(-6.0, 8.0), st.floats(-8.0, 8.0))
    def test_against_scipy_modulus(self, re, im):
        z = complex(re, im)
        if abs(im) < 1e-3 and abs(re - round(re)) < 1e-3 and re <= 0.5:
            return
        assert log_gamma(z).real == pytest.approx(loggamma(z).real, abs=1e-11 * max(1.0, abs(loggamma(z))))

    @given(st.floats(0.6, 8.0), st.floats(-8.0, 8.0))
    def test_principal_branch_right_half_plane(self, re, im):
        z = complex(re, im)
        assert abs(cmath.exp(log_gamma(z) - loggamma(z)) - 1.0) <= 1e-11

    def test_identities(self):
        z = complex(0.3, 1.7)
        # duplication: Gamma(z) Gamma(z + 1/2) = 2^{1-2z} sqrt(pi) Gamma(2z)
        lhs = log_gamma(z) + log_gamma(z + 0.5)
        rhs = (1 - 2 * z) * math.log(2) + 0.5 * math.log(math.pi) + log_gamma(2 * z)
        assert abs(cmath.exp(lhs - rhs) - 1) <= 1e-12
        assert log_gamma(5.0).real == pytest.approx(math.log(24.0), abs=1e-13)

    def test_pole(self):
        with pytest.raises(PreconditionError):
            log_gamma(-2.0)


class TestSphericalFunction:
    def test_origin(self):
        for n in (2, 3, 6):
            assert spherical_function(1.3, 0.0, n) == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
    def test_three_dimensional_closed_form(self, lam, r):
        assert spherical_function(lam, r, 3) == pytest.approx(spherical_function_n3(lam, r), abs=1e-8)

    def test_zero_parameter_limit(self):
        assert spherical_function(0.0, 1.0, 3) == pytest.approx(1.0 / math.sinh(1.0), abs=1e-8)
        assert spherical_function(0.0, 1.0, 3) == pytest.approx(0.850918, abs=1e-6)

    @pytest.mark.parametrize("n", [2, 4, 5])
    def test_angular_form_is_real_and_matches(self, n):
        for lam, r in [(0.7, 0.4), (1.5, 1.8)]:
            z = spherical_function_angular(lam, r, n)
            assert abs(z.imag) <= 1e-10
            assert z.real == pytest.approx(spherical_function(lam, r, n), abs=1e-9)

    def test_even_in_parameter(self):
        r = np.linspace(0.1, 3.0, 9)
        assert np.allclose(spherical_function(1.4, r, 4), spherical_function(-1.4, r, 4), atol=1e-14)

    @pytest.mark.parametrize("n,lam", [(2, 0.8), (3, 1.5), (5, 0.3)])
    def test_eigenfunction(self, n, lam):
        curve = even_curve(lambda r: spherical_function(lam, r, n), 2.5, 64)
        r = np.linspace(0.5, 2.0, 7)
        delta = SpectralParam(lam, n).delta
        expected = -(lam ** 2 + delta ** 2) * spherical_function(lam, r, n)
        assert np.allclose(radial_laplacian(curve, r, n), expected, rtol=1e-4)

    def test_negative_radius(self):
        with pytest.raises(PreconditionError):
            spherical_function(1.0, -0.5, 3)


class TestTransforms:
    def test_kernel_transform_at_zero(self):
        assert spherical_transform(q_alpha_profile(3, 1.0), 0.0, 3) == pytest.approx(math.pi, rel=1e-5)
        assert q_alpha_hat(0.0, 1.0, 3) == pytest.approx(math.pi, rel=1e-14)

    def test_kernel_transform_closed_form_value(self):
        # |Gamma(1/2 + i)|^2 / |Gamma(1 + i)|^2 = (pi / cosh pi) / (pi / sinh pi)
        assert q_alpha_hat(1.0, 1.0, 3) == pytest.approx(math.tanh(math.pi), rel=1e-13)
        assert q_alpha_hat(1.0, 1.0, 3) == pytest.approx(0.99627207622075, rel=1e-12)
        assert q_alpha_hat(-1.0, 1.0, 3) == q_alpha_hat(1.0, 1.0, 3)

    @pytest.mark.parametrize("n,alpha", [(3, 0.5), (3, 1.0), (4, 1.5), (5, 2.5)])
    @pytest.mark.parametrize("lam", [0.0, 0.7, 2.0])
    def test_kernel_transform_matches_quadrature(self, n, alpha, lam):
        val = spherical_transform(q_alpha_profile(n, alpha), lam, n)
        assert val == pytest.approx(q_alpha_hat(lam, alpha, n), rel=1e-5)

    def test_kernel_order_outside_range(self):
        with pytest.raises(PreconditionError):
            q_alpha_hat(0.0, 2.0, 3)
        with pytest.raises(PreconditionError):
            q_alpha_hat(0.0, 0.0, 3)

    def test_zero_profile(self):
        zero = RadialProfile(lambda s: np.zeros_like(np.asarray(s, dtype=float)), math.inf, 2.0, label="zero")
        assert spherical_transform(zero, 0.5, 3) == 0.0
        assert fourier_transform(ScalarField.zero(3), 0.5, [0, 0, 1.0]) == 0

    def test_fourier_of_zonal_is_direction_free(self):
        f = ScalarField.from_profile(compact_bump(1.0), 3)
        a = fourier_transform(f, 0.8, [0.0, 0.0, 1.0])
        b = fourier_transform(f, 0.8, [0.6, 0.8, 0.0])
        assert abs(a - b) <= 1e-8 * abs(a)

    def test_fourier_general_path_on_shifted_bump(self):
        center = HPoint.on_axis(3, 1.0)
        f = ScalarField.shifted(smooth_bump(1.0), center)
        dense = fourier_transform(f, 0.5, [0.0, 0.0, 1.0])
        ref = spherical_transform(smooth_bump(1.0), 0.5, 3)
        assert abs(dense - ref) <= 1e-6 * abs(ref)

    def test_fourier_at_zero_parameter(self):
        prof = compact_bump(1.0)
        lhs = fourier_transform(ScalarField.from_profile(prof, 3), 0.0, [1.0, 0.0, 0.0])
        from horoxform.horo import integrate_hn_zonal
        weighted = RadialProfile(lambda s: prof(s) * spherical_function(0.0, np.arccosh(np.maximum(s, 1.0)), 3),
                                 math.inf, prof.support_bound)
        assert lhs.real == pytest.approx(integrate_hn_zonal(weighted, 3), rel=1e-6)


class TestConvolutionTheorem:
    def test_zero(self):
        zero = RadialProfile(lambda s: np.zeros_like(np.asarray(s, dtype=float)), math.inf, 2.0, label="zero")
        assert convolution_transform_check(q_alpha_profile(3, 1.0), zero, 0.0, 3) == (0.0, 0.0)

    @pytest.mark.parametrize("lam", [0.0, 1.0])
    def test_kernel_against_bump(self, lam):
        lhs, rhs = convolution_transform_check(q_alpha_profile(3, 1.0), compact_bump(1.0), lam, 3)
        assert abs(lhs - rhs) <= 1e-4 * abs(rhs)
