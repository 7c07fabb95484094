"""One PASS/FAIL line per acceptance criterion, with the pinned tolerances and time limits."""

import math
import time

import numpy as np
import pytest

from horoxform.fields import ScalarField, compact_bump, darboux_check, exp_bump, integrate_hn, power_profile, smooth_bump
from horoxform.fractional import form_agreement, roundtrip_check
from horoxform.harmonic import q_alpha_hat, spherical_transform
from horoxform.horo import (SemyanistyiKernel, dual, duality_check, duality_unit_order, forward, forward_field,
                            fourier_slice_check, semyanistyi_dual)
from horoxform.inversion import fuglede_check, invert_bl, invert_mean_value
from horoxform.lorentz import HoroPoint, HPoint, point_from_polar
from horoxform.oracles import compact_light_cone_bump, dual_pair_fields, non_injectivity_witness, oracle_dual_pairs
from horoxform.potentials import (BLPolynomial, DAlphaOp, b_operator, even_curve, q_alpha_profile, q_potential,
                                  q_potential_log, radial_laplacian)
from horoxform.suites import alpha_drift

NORTH3 = np.array([0.0, 0.0, 1.0])
BUMP = compact_bump(1.0)


@pytest.fixture
def verdict(capsys):
    def record(k, label, worst, limit, seconds=None, time_limit=None):
        ok = worst <= limit and (time_limit is None or seconds < time_limit)
        timing = "" if time_limit is None else f", {seconds:.2f}s (limit {time_limit}s)"
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {k}: {label}: worst {worst:.3e} (limit {limit:.0e}){timing}")
        assert worst <= limit
        if time_limit is not None:
            assert seconds < time_limit
    return record


def _rel(a, b):
    return abs(a - b) / abs(b)


def _timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


def test_criterion_01_closed_form_forward(verdict):
    f = ScalarField.from_profile(power_profile(3.0), 3)

    def run():
        return max(_rel(forward(f, HoroPoint(t, NORTH3)), math.pi * math.exp(-t) / math.cosh(t) ** 2)
                   for t in (-1.0, 0.0, 1.0))
    worst, secs = _timed(run)
    verdict(1, "forward transform of x_4^-3", worst, 1e-6, secs, 1.0)


def test_criterion_02_spherical_transform_of_kernel(verdict):
    def run():
        return max(_rel(spherical_transform(q_alpha_profile(3, a), lam, 3), q_alpha_hat(lam, a, 3))
                   for a in (0.5, 1.0, 1.5) for lam in (0.0, 1.0, 2.0))
    worst, secs = _timed(run)
    verdict(2, "spherical transform of q_alpha against the Gamma ratio", worst, 1e-5, secs, 10.0)


def test_criterion_03_dualities(verdict):
    errs = []
    for n in (2, 3):
        lhs, rhs = duality_check(ScalarField.from_profile(compact_bump(1.0), n), compact_light_cone_bump(n))
        errs.append(_rel(lhs, rhs))
        lhs, rhs = duality_unit_order(ScalarField.from_profile(exp_bump(3.0), n))
        errs.append(_rel(lhs, rhs))
    verdict(3, "general and unit-order dualities, n = 2, 3", max(errs), 1e-6)


def test_criterion_04_power_pair_duals(verdict):
    errs = []
    for alpha in (0.5, 1.0, 1.5):
        phi, psi = dual_pair_fields(alpha, 3)
        for h in (1.2, 2.0, 4.0):
            x = HPoint.on_axis(3, h)
            ref = oracle_dual_pairs(alpha, x, "A")
            a, b = dual(phi, x), dual(psi, x)
            errs += [_rel(a, ref), _rel(b, ref), _rel(a, b)]
    verdict(4, "two kernels share one closed-form dual", max(errs), 1e-6)


def test_criterion_05_composition_identity(verdict):
    f = ScalarField.from_profile(compact_bump(1.0), 3)

    def run():
        return max(_rel(*fuglede_check(f, HPoint.on_axis(3, h))) for h in (1.0, 1.5, 2.0))
    worst, secs = _timed(run)
    verdict(5, "dual of transform against scaled potential, n = 3", worst, 1e-4, secs, 30.0)


def test_criterion_06_fractional_roundtrips(verdict):
    decaying = lambda s: np.exp(-np.asarray(s, dtype=float))
    fourth = lambda s: np.asarray(s, dtype=float) ** -4.0
    worst = max(max(roundtrip_check(decaying, a), roundtrip_check(fourth, a, 4.0)) for a in (0.5, 1.0, 1.5))
    verdict(6, "fractional derivative inverts fractional integral on [1.1, 5]", worst, 1e-4)
    forms = max(form_agreement(decaying, 1.5), form_agreement(fourth, 1.5, 4.0), form_agreement(decaying, 2.5))
    verdict(6, "outer and inner derivative forms agree", forms, 1e-6)


def test_criterion_07_fourier_slice(verdict):
    f = ScalarField.from_profile(compact_bump(1.0), 3)
    errs = []
    for lam in (0.0, 1.0):
        lhs, rhs = fourier_slice_check(f, lam, NORTH3)
        errs.append(abs(lhs - rhs) / abs(lhs))
    verdict(7, "Fourier slice identity, n = 3", max(errs), 1e-5)


@pytest.mark.parametrize("n,tol", [(2, 2e-2), (3, 1e-2)])
def test_criterion_08_mean_value_inversion(verdict, n, tol):
    f = ScalarField.from_profile(exp_bump(3.0), n)

    def run():
        hf = forward_field(f)
        return max(_rel(invert_mean_value(hf, HPoint.on_axis(n, h)).value, f(HPoint.on_axis(n, h)))
                   for h in (1.0, 1.5, 2.0))
    worst, secs = _timed(run)
    verdict(8, f"mean-value inversion, n = {n}", worst, tol, secs, 60.0)


@pytest.mark.parametrize("n,tol,heights", [(3, 1e-2, (1.0, 1.3, 1.6)), (2, 5e-2, (1.0, 1.3)), (5, 5e-2, (1.0, 1.3))])
def test_criterion_09_laplacian_inversion(verdict, n, tol, heights):
    f = ScalarField.from_profile(compact_bump(1.0), n)
    hf = forward_field(f)
    worst = max(_rel(invert_bl(hf, HPoint.on_axis(n, h)), f(HPoint.on_axis(n, h))) for h in heights)
    verdict(9, f"Laplacian-polynomial inversion, n = {n}", worst, tol)


def test_criterion_10_kernel_families(verdict):
    f = ScalarField.from_profile(compact_bump(1.0), 3)
    hf = forward_field(f)
    x = HPoint.on_axis(3, 1.5)
    errs = [_rel(semyanistyi_dual(hf, x, SemyanistyiKernel(a, 3, v)), q_potential(f, a + 2.0, x))
            for a in (0.5, 1.5) for v in (1, 2)]
    verdict(10, "kernel-weighted dual of transform equals potential", max(errs), 1e-4)
    factors = [alpha_drift(3, family=fam)[1] for fam in ("dual", "forward")]
    verdict(10, "small-order drift is linear (worst ratio factor)", max(factors), 2.0)


def _radial(fn, n):
    return even_curve(lambda r: np.array([fn(HPoint.on_axis(n, math.cosh(float(ri)))) for ri in r]), 2.5, 64)


def test_criterion_11_structural_invariants(verdict):
    f3, f4 = ScalarField.from_profile(BUMP, 3), ScalarField.from_profile(BUMP, 4)
    q2_3 = _radial(lambda x: q_potential(f3, 2.0, x), 3)
    q4_3 = _radial(lambda x: q_potential(f3, 4.0, x), 3)
    rs = (0.0, 0.5, 1.0)
    lowering = max(_rel(float(DAlphaOp(4.0, 3).on_curve(q4_3)(r)), float(q2_3(r))) for r in rs)
    verdict(11, "order-lowering operator maps Q^4 to Q^2, n = 3", lowering, 1e-3)
    inverse = max(_rel(float(BLPolynomial(1, 3).on_curve(q2_3)(r)), float(BUMP(math.cosh(r)))) for r in rs)
    verdict(11, "Laplacian polynomial inverts Q^2, n = 3", inverse, 1e-2)

    q2_4 = _radial(lambda x: q_potential(f4, 2.0, x), 4)
    qlog_4 = _radial(lambda x: q_potential_log(f4, x), 4)
    b4 = _radial(lambda x: b_operator(f4, x), 4)
    log_gap = max(abs(float(DAlphaOp(4.0, 4).on_curve(qlog_4)(r)) - float(q2_4(r) - b4(r))) / abs(float(q2_4(r)))
                  for r in (0.3, 0.8))
    verdict(11, "log potential lowers to Q^2 - B, n = 4", log_gap, 1e-3)
    eigen = max(_rel(-radial_laplacian(b4, r, 4), 2.0 * float(b4(r))) for r in rs)
    verdict(11, "B f is a Laplacian eigenfunction, n = 4", eigen, 1e-3)
    killed = max(np.max(np.abs(DAlphaOp(a, 4).on_curve(b4).values[16:-16])) for a in (2.0, 4.0))
    verdict(11, "B f is annihilated by the lowering operators", killed / np.max(np.abs(b4.values)), 1e-3)

    f2 = ScalarField.from_profile(BUMP, 2)
    qlog_2 = _radial(lambda x: q_potential_log(f2, x), 2)
    mass = integrate_hn(f2) / (4.0 * math.pi)
    planar = max(_rel(-radial_laplacian(qlog_2, r, 2), float(BUMP(math.cosh(r))) + mass) for r in rs)
    verdict(11, "planar log potential: -Laplacian gives f plus mass", planar, 1e-3)

    darboux = max(_rel(*darboux_check(smooth_bump(3.0), n, 0.6, 0.8)) for n in (2, 3, 4))
    verdict(11, "Darboux equation, n = 2, 3, 4", darboux, 1e-4)

    rng = np.random.default_rng(20240611)
    witness = 0.0
    for n in (2, 3, 4):
        w = rng.standard_normal(n)
        witness = max(witness, abs(dual(non_injectivity_witness(n), point_from_polar(1.1, w / np.linalg.norm(w)))))
    verdict(11, "nonzero light-cone field with vanishing dual", witness, 1e-8)
