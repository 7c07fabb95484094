import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from horoxform.errors import PreconditionError
from horoxform.fields import compact_bump, exp_bump
from horoxform.fractional import (FracOrder, form_agreement, power_weighted_check, rl_derivative,
                                  rl_halfinteger_derivative, rl_integral, roundtrip_check, semigroup_check)
from horoxform.numerics import SampledCurve, TailModel, cgl_nodes, fit_tail


def decaying_exp(s):
    return np.exp(-np.asarray(s, dtype=float))


def inverse_fourth(s):
    return np.asarray(s, dtype=float) ** -4.0


def _exp_curve(a=1.0, b=12.0, nodes=64):
    g = cgl_nodes(nodes, a, b)
    return SampledCurve(g, np.exp(-g), "chebyshev", TailModel.exponential(b, math.exp(-b), 1.0))


class TestFracOrder:
    @pytest.mark.parametrize("alpha,m,alpha0", [(0.5, 0, 0.5), (1.0, 1, 0.0), (2.75, 2, 0.75), (3.0, 3, 0.0)])
    def test_split(self, alpha, m, alpha0):
        order = FracOrder(alpha)
        assert (order.m, order.alpha0) == (m, pytest.approx(alpha0))
        assert order.m + order.alpha0 == alpha

    def test_rejects_nonpositive(self):
        with pytest.raises(PreconditionError):
            FracOrder(0.0)


class TestIntegral:
    @given(st.floats(0.1, 4.0), st.floats(1.0, 6.0))
    def test_exponential_is_fixed_point(self, alpha, r):
        assert rl_integral(decaying_exp, alpha, r) == pytest.approx(math.exp(-r), rel=1e-9)

    @pytest.mark.parametrize("alpha,mu", [(0.5, 4.0), (1.5, 4.0), (1.0, 2.5), (2.5, 3.0)])
    def test_power(self, alpha, mu):
        for r in (1.0, 2.0, 5.0):
            ref = math.gamma(mu - alpha) / math.gamma(mu) * r ** (alpha - mu)
            val = rl_integral(lambda s: np.asarray(s) ** -mu, alpha, r, tail_mu=mu)
            assert val == pytest.approx(ref, rel=1e-9)

    def test_truncated_unit(self):
        one = lambda s: np.where(np.asarray(s) <= 4.0, 1.0, 0.0)
        assert rl_integral(one, 1.0, 1.5, support=4.0) == pytest.approx(2.5, rel=1e-12)

    def test_vectorized_and_profile_input(self):
        rs = np.array([1.0, 1.5, 3.0])
        vals = rl_integral(exp_bump(1.0), 0.5, rs)
        assert np.allclose(vals, np.exp(-(rs - 1.0)), rtol=1e-9)

    def test_divergent_tail_rejected(self):
        with pytest.raises(PreconditionError):
            rl_integral(lambda s: np.asarray(s) ** -0.5, 0.5, 1.0, tail_mu=0.5)
        with pytest.raises(PreconditionError):
            rl_integral(decaying_exp, -1.0, 1.0)

    def test_sampled_curve_matches_callable(self):
        c = _exp_curve()
        rs = np.array([1.0, 2.0, 7.0, 14.0])
        assert np.allclose(rl_integral(c, 0.5, rs), np.exp(-rs), rtol=1e-8)


class TestDerivative:
    def test_integer_order(self):
        c = _exp_curve()
        d = rl_derivative(c, 1.0)
        s = np.linspace(1.0, 10.0, 19)
        assert np.allclose(d(s), np.exp(-s), rtol=1e-8)

    def test_half_order_fixed_point(self):
        d = rl_derivative(_exp_curve(), 0.5)
        s = np.linspace(1.1, 6.0, 21)
        assert np.max(np.abs(d(s) / np.exp(-s) - 1.0)) <= 1e-6

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
    def test_roundtrip_inverse_fourth(self, alpha):
        assert roundtrip_check(inverse_fourth, alpha, 4.0) <= 1e-4

    @pytest.mark.parametrize("alpha", [0.5, 1.5, 2.5])
    def test_roundtrip_exponential(self, alpha):
        assert roundtrip_check(decaying_exp, alpha) <= 1e-4

    def test_roundtrip_compact_bump(self):
        bump = compact_bump(2.0, 6)
        assert roundtrip_check(bump, 0.5, math.inf, grid=(1.1, 3.0), window=(1.1, 2.5)) <= 1e-4

    @pytest.mark.parametrize("alpha", [0.5, 1.5])
    def test_strong_mode_agrees(self, alpha):
        assert roundtrip_check(decaying_exp, alpha, mode="strong") <= 1e-4

    def test_halfinteger_first_step(self):
        g = cgl_nodes(64, 1.1, 12.0)
        h = rl_integral(decaying_exp, 0.5, g)
        curve = SampledCurve(g, h, "chebyshev", fit_tail(g, h))
        d = rl_halfinteger_derivative(curve, 1)
        s = np.linspace(1.1, 5.0, 21)
        assert np.max(np.abs(d(s) / np.exp(-s) - 1.0)) <= 1e-5

    @pytest.mark.parametrize("alpha", [1.5, 2.5])
    def test_two_forms_agree(self, alpha):
        assert form_agreement(decaying_exp, alpha) <= 1e-6

    def test_slow_tail_rejected(self):
        g = cgl_nodes(32, 1.0, 10.0)
        curve = SampledCurve(g, g ** -0.5, "chebyshev", TailModel.power(10.0, 10.0 ** -0.5, 0.5))
        with pytest.raises(PreconditionError):
            rl_halfinteger_derivative(curve, 1)

    def test_missing_tail_and_bad_arguments(self):
        g = cgl_nodes(16, 1.0, 3.0)
        bare = SampledCurve(g, np.exp(-g))
        with pytest.raises(PreconditionError):
            rl_derivative(bare, 0.5)
        with pytest.raises(PreconditionError):
            rl_halfinteger_derivative(_exp_curve(), 2)
        with pytest.raises(PreconditionError):
            rl_derivative(_exp_curve(), 1.5, "j", 3)


class TestCompositionRules:
    @pytest.mark.parametrize("alpha,beta", [(0.5, 0.5), (0.5, 1.0), (1.0, 1.0)])
    def test_semigroup(self, alpha, beta):
        for r in (1.0, 2.5):
            lhs, rhs = semigroup_check(decaying_exp, alpha, beta, r)
            assert lhs == pytest.approx(rhs, rel=1e-6)

    def test_power_weighted(self):
        for r in (1.0, 2.0):
            lhs, rhs = power_weighted_check(decaying_exp, 0.5, 0.5, r)
            assert lhs == pytest.approx(rhs, rel=1e-6)
