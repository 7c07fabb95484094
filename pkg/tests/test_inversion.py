import math

import numpy as np
import pytest

from horoxform.constants import lambda_n
from horoxform.errors import PreconditionError
from horoxform.fields import HoroField, ScalarField, compact_bump, exp_bump, integrate_gamma, spherical_mean
from horoxform.horo import dual_zonal, forward_field
from horoxform.inversion import (BLConfig, MeanValueConfig, fuglede_check, invert_bl, invert_mean_value,
                                 mean_from_curve, mean_value_curve)
from horoxform.lorentz import HPoint
from horoxform.potentials import even_curve, laplacian_curve


def _roundtrip(profile, n):
    f = ScalarField.from_profile(profile, n)
    return f, forward_field(f)


class TestMeanValueInversion:
    @pytest.mark.parametrize("n,tol", [(2, 2e-2), (3, 1e-2)])
    @pytest.mark.parametrize("h", [1.0, 1.5, 2.0])
    def test_reconstructs_exponential_bump(self, n, tol, h):
        f, hf = _roundtrip(exp_bump(3.0), n)
        x = HPoint.on_axis(n, h)
        assert invert_mean_value(hf, x).value == pytest.approx(f(x), rel=tol)

    def test_recovered_curve_is_the_spherical_mean(self):
        f, hf = _roundtrip(exp_bump(3.0), 3)
        x = HPoint.on_axis(3, 1.5)
        mean = mean_from_curve(mean_value_curve(hf, x), 3)
        s = np.array([1.2, 1.8, 3.0])
        assert np.allclose(mean(s), spherical_mean(f, x, s), rtol=1e-4)

    def test_stable_under_halving_offset(self):
        _, hf = _roundtrip(exp_bump(3.0), 3)
        x = HPoint.on_axis(3, 1.5)
        a = invert_mean_value(hf, x).value
        b = invert_mean_value(hf, x, MeanValueConfig(eta=5e-4)).value
        assert abs(a - b) <= 1e-3 * abs(a)

    def test_even_dimension_forms_agree(self):
        f, hf = _roundtrip(exp_bump(3.0), 2)
        x = HPoint.on_axis(2, 1.5)
        first = invert_mean_value(hf, x, MeanValueConfig(form="first")).value
        second = invert_mean_value(hf, x, MeanValueConfig(form="second")).value
        strong = invert_mean_value(hf, x, MeanValueConfig(form="strong")).value
        assert first == pytest.approx(second, rel=1e-3)
        assert strong == pytest.approx(f(x), rel=2e-2)

    def test_limit_samples_approach_value(self):
        f, hf = _roundtrip(exp_bump(3.0), 3)
        x = HPoint.on_axis(3, 1.0)
        res = invert_mean_value(hf, x)
        gaps = np.abs(np.asarray(res.samples) - f(x))
        assert np.all(np.diff(gaps) > 0)

    def test_zero(self):
        assert invert_mean_value(HoroField.zero(3), HPoint.origin(3)).value == 0.0


class TestBeltramiLaplaceInversion:
    @pytest.mark.parametrize("n,tol,heights", [(2, 5e-2, (1.0, 1.3)), (3, 1e-2, (1.0, 1.3, 1.6)),
                                               (5, 5e-2, (1.0, 1.3))])
    def test_reconstructs_compact_bump(self, n, tol, heights):
        f, hf = _roundtrip(compact_bump(1.0), n)
        for h in heights:
            x = HPoint.on_axis(n, h)
            assert invert_bl(hf, x) == pytest.approx(f(x), rel=tol)

    def test_three_dimensional_formula(self):
        # f = -(1/2 pi) (Delta + 1) H* phi
        f, hf = _roundtrip(compact_bump(1.0), 3)
        x = HPoint.on_axis(3, 1.3)
        r = math.acosh(1.3)
        c = even_curve(lambda rs: np.array([dual_zonal(hf, float(ri), 3) for ri in rs]), r + 2.0, 64)
        manual = -(float(laplacian_curve(c, 3)(r)) + float(c(r))) / (2 * math.pi)
        assert lambda_n(3) == pytest.approx(1 / (2 * math.pi))
        assert manual == pytest.approx(f(x), rel=1e-2)
        assert invert_bl(hf, x) == pytest.approx(manual, rel=1e-6)

    def test_methods_agree(self):
        _, hf = _roundtrip(exp_bump(3.0), 3)
        x = HPoint.on_axis(3, 1.5)
        assert invert_bl(hf, x) == pytest.approx(invert_mean_value(hf, x).value, rel=2e-2)

    @pytest.mark.xfail(strict=True, reason="the mass correction carries the wrong sign; see decisions ledger")
    def test_planar_inversion_with_added_mass(self):
        f, hf = _roundtrip(compact_bump(1.0), 2)
        x = HPoint.on_axis(2, 1.3)
        flipped = invert_bl(hf, x) + 2.0 * integrate_gamma(hf) / (4.0 * math.pi)
        assert flipped == pytest.approx(f(x), rel=5e-2)

    def test_non_zonal_rejected(self):
        phi = HoroField(3, lambda t, w: np.exp(-np.asarray(t) ** 2) * (1 + 0.1 * np.asarray(w)[..., 0]))
        with pytest.raises(PreconditionError):
            invert_bl(phi, HPoint.origin(3))

    def test_zero(self):
        assert invert_bl(HoroField.zero(3), HPoint.origin(3)) == 0.0

    def test_more_nodes_do_not_hurt(self):
        f, hf = _roundtrip(compact_bump(1.0), 3)
        x = HPoint.on_axis(3, 1.3)
        assert invert_bl(hf, x, BLConfig(nodes=96)) == pytest.approx(f(x), rel=1e-2)


class TestComposition:
    @pytest.mark.parametrize("h", [1.0, 1.5, 2.0])
    def test_dual_of_transform_is_potential(self, h):
        lhs, rhs = fuglede_check(ScalarField.from_profile(compact_bump(1.0), 3), HPoint.on_axis(3, h))
        assert lhs == pytest.approx(rhs, rel=1e-4)

    def test_zero(self):
        assert fuglede_check(ScalarField.zero(3), HPoint.origin(3)) == (0.0, 0.0)

    def test_inverse_constant(self):
        assert 1.0 / lambda_n(3) == pytest.approx(2 * math.pi, rel=1e-15)
