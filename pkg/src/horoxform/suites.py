"""Verification suites: oracle cases, parallel execution, CSV/JSON reports."""

from __future__ import annotations

import csv
import functools
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .constants import c_beta, gamma_alpha, gamma_prime, half_dim, lambda_n, zeta, zeta_prime
from .errors import PreconditionError
from .fields import (HoroField, ScalarField, compact_bump, darboux_check, exp_bump, integrate_gamma,
                     integrate_hn, mean_upper, power_profile, spherical_mean)
from .fractional import form_agreement, power_weighted_check, roundtrip_check, semigroup_check
from .harmonic import (convolution_transform_check, q_alpha_hat, spherical_function, spherical_transform)
from .horo import (SemyanistyiKernel, dual, dual_log, dual_zonal, duality_check, duality_power_pair,
                   duality_unit_order, forward, forward_field, forward_zonal, fourier_slice_check,
                   semyanistyi_dual, semyanistyi_forward, shifted_dual)
from .inversion import BLConfig, MeanValueConfig, fuglede_check, invert_bl, invert_mean_value
from .lorentz import (HoroCoords, HoroPoint, HPoint, geodesic_distance, dist_point_horosphere, horospherical_of_point,
                      minkowski_form, point_from_horospherical, point_from_polar)
from .numerics import gauss_jacobi_left, gauss_legendre, integrate_semi_infinite, richardson_limit
from .oracles import (compact_light_cone_bump, composition_constant_check, dual_pair_b_field, dual_pair_fields,
                      non_injectivity_witness, oracle_dual_pairs, oracle_hf_power, spherical_function_n3)
from .potentials import (BLPolynomial, DAlphaOp, b_operator, even_curve, q_alpha_profile, q_potential,
                         q_potential_log, radial_laplacian)

SCHEMA_VERSION = 1
SUITES = ("geometry", "fractional", "harmonic", "transform", "duality", "inversion")
COLUMNS = ("schema_version", "id", "computed", "reference", "abs_err", "rel_err", "tol", "status",
           "wall_time", "note")


@dataclass(frozen=True)
class OracleCase:
    """``compute()`` against ``reference()``; ``kind`` selects relative or absolute tolerance."""

    id: str
    anchor: str
    compute: object
    reference: object
    tolerance: float
    parameters: dict = field(default_factory=dict)
    kind: str = "rel"

    def __post_init__(self):
        if not self.tolerance >= 0:
            raise PreconditionError("tolerance must be non-negative")
        if self.kind not in ("rel", "abs"):
            raise PreconditionError("kind must be 'rel' or 'abs'")


@dataclass(frozen=True)
class CaseResult:
    id: str
    computed: float
    reference: float
    abs_err: float
    rel_err: float
    tol: float
    status: str
    wall_time: float
    note: str = ""

    def row(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "id": self.id, "computed": self.computed,
                "reference": self.reference, "abs_err": self.abs_err, "rel_err": self.rel_err,
                "tol": self.tol, "status": self.status, "wall_time": self.wall_time, "note": self.note}


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    results: tuple
    seed: int = 0

    @property
    def passed(self) -> bool:
        return all(r.status == "PASS" for r in self.results)

    @property
    def exit_status(self) -> int:
        return 0 if self.passed else 1

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\r\n")
        w.writeheader()
        for r in self.results:
            w.writerow({k: _fmt(v) for k, v in r.row().items()})
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"schema_version": SCHEMA_VERSION, "suite": self.suite, "seed": self.seed,
                           "passed": self.passed, "rows": [_jsonable(r.row()) for r in self.results]},
                          indent=2)


def _fmt(v):
    return repr(v) if isinstance(v, float) else v


def _jsonable(row):
    return {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in row.items()}


def evaluate_case(case: OracleCase) -> CaseResult:
    t0 = time.perf_counter()
    try:
        computed = float(np.real(case.compute()))
        reference = float(np.real(case.reference()))
    except Exception as exc:  # recorded, not fatal
        return CaseResult(case.id, math.nan, math.nan, math.nan, math.nan, case.tolerance, "FAIL",
                          time.perf_counter() - t0, f"{type(exc).__name__}: {exc}")
    wall = time.perf_counter() - t0
    abs_err = abs(computed - reference)
    if reference != 0:
        rel_err = abs_err / abs(reference)
    else:
        rel_err = 0.0 if abs_err == 0 else math.inf
    err = rel_err if case.kind == "rel" else abs_err
    ok = math.isfinite(err) and err <= case.tolerance
    return CaseResult(case.id, computed, reference, abs_err, rel_err, case.tolerance,
                      "PASS" if ok else "FAIL", wall)


def worker_limit() -> int:
    env = os.environ.get("HOROXFORM_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise PreconditionError("HOROXFORM_WORKERS must be an integer") from exc
    return max(1, min(4, os.cpu_count() or 1))


def run_cases(cases, suite: str = "custom", seed: int = 0, workers: int | None = None) -> SuiteReport:
    cases = list(cases)
    ids = [c.id for c in cases]
    if len(set(ids)) != len(ids):
        raise PreconditionError("case ids must be unique")
    workers = workers or worker_limit()
    if workers == 1 or len(cases) <= 1:
        results = [evaluate_case(c) for c in cases]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate_case, cases))
    return SuiteReport(suite, tuple(results), seed)


def build_suite(suite: str, seed: int = 0) -> list:
    if suite == "all":
        return [c for s in SUITES for c in build_suite(s, seed)]
    if suite not in SUITES:
        raise PreconditionError(f"unknown suite {suite!r}; choose from {SUITES + ('all',)}")
    return _BUILDERS[suite](seed)


def run_suite(suite: str = "all", seed: int = 0, workers: int | None = None) -> SuiteReport:
    """Run every case of ``suite`` and collect a report."""
    return run_cases(build_suite(suite, seed), suite, seed, workers)


# -- helpers -------------------------------------------------------------------------------


def _zonal(prof, n):
    return ScalarField.from_profile(prof, n)


def _axis(n, h):
    return HPoint.on_axis(n, h)


def _const(v):
    return lambda: v


def _random_points(rng, n, k, r_max=3.0):
    r = rng.uniform(0.0, r_max, size=k)
    th = rng.normal(size=(k, n))
    th /= np.linalg.norm(th, axis=1, keepdims=True)
    return [point_from_polar(float(ri), ti) for ri, ti in zip(r, th)]


def _random_dirs(rng, n, k):
    w = rng.normal(size=(k, n))
    return w / np.linalg.norm(w, axis=1, keepdims=True)


def _radial_curve(fn, n, R=2.5, nodes=64):
    return even_curve(lambda r: np.array([fn(_axis(n, math.cosh(float(ri)))) for ri in r]), R, nodes)


# -- geometry (lorentz core and numerics) --------------------------------------------------------


def _geometry(seed):
    rng = np.random.default_rng(seed)
    cases = []
    for n in (2, 3, 5):
        pts = _random_points(rng, n, 8)
        vecs = rng.normal(size=(3, n + 1))

        def symmetry(pts=pts):
            return max(abs(minkowski_form(x.components, y.components) - minkowski_form(y.components, x.components))
                       for x in pts for y in pts)

        def bilinear(v=vecs):
            a, b = 0.7, -1.3
            return abs(minkowski_form(a * v[0] + b * v[1], v[2])
                       - a * minkowski_form(v[0], v[2]) - b * minkowski_form(v[1], v[2]))

        def polar_roundtrip(pts=pts):
            worst = 0.0
            for x in pts:
                c = x.components
                r = math.acosh(c[-1])
                if r < 1e-8:
                    continue
                th = c[:-1] / math.sinh(r)
                worst = max(worst, float(np.max(np.abs(point_from_polar(r, th).components - c))))
            return worst

        def horo_roundtrip(pts=pts):
            return max(float(np.max(np.abs(point_from_horospherical(horospherical_of_point(x)).components
                                           - x.components)) / max(1.0, x.height)) for x in pts)

        def bracket_positive(pts=pts, n=n):
            dirs = _random_dirs(rng, n, 8)
            return sum(1.0 for x in pts for w in dirs
                       if not minkowski_form(x.components, HoroPoint(0.3, w).components) > 0)

        cases += [
            OracleCase(f"geometry.form_symmetry.n{n}", "Minkowski form symmetry", symmetry, _const(0.0), 1e-12,
                       {"n": n}, "abs"),
            OracleCase(f"geometry.form_bilinear.n{n}", "Minkowski form bilinearity", bilinear, _const(0.0), 1e-12,
                       {"n": n}, "abs"),
            OracleCase(f"geometry.polar_roundtrip.n{n}", "polar coordinates", polar_roundtrip, _const(0.0), 1e-10,
                       {"n": n}, "abs"),
            OracleCase(f"geometry.horo_roundtrip.n{n}", "horospherical coordinates", horo_roundtrip, _const(0.0),
                       1e-10, {"n": n}, "abs"),
            OracleCase(f"geometry.bracket_positive.n{n}", "[x, xi] > 0 on H^n x Gamma_+", bracket_positive,
                       _const(0.0), 0.0, {"n": n}, "abs"),
        ]
    cases += [
        OracleCase("geometry.distance_polar", "geodesic distance of a polar point",
                   lambda: geodesic_distance(HPoint.origin(3), point_from_polar(1.7, np.array([0.0, 0.6, 0.8]))),
                   _const(1.7), 1e-12),
        OracleCase("geometry.distance_horosphere", "distance from the origin to e^t b(w)",
                   lambda: dist_point_horosphere(HPoint.origin(3), HoroPoint(-0.8, np.array([0.0, 0.0, 1.0]))),
                   _const(0.8), 1e-12),
        OracleCase("geometry.horo_point_height", "x_{n+1} of n_v a_t x_0",
                   lambda: point_from_horospherical(HoroCoords(np.array([0.5, -0.2]), 0.4)).height,
                   _const(math.cosh(0.4) + 0.5 * 0.29 * math.exp(-0.4)), 1e-13),
        OracleCase("numerics.gauss_legendre_exact", "Gauss-Legendre degree 2m-1",
                   lambda: gauss_legendre(6).integrate(lambda x: x ** 10 + x ** 3), _const(2.0 / 11.0), 1e-13),
        OracleCase("numerics.gauss_jacobi_exact", "Gauss-Jacobi endpoint weight",
                   lambda: gauss_jacobi_left(8, -0.5).integrate(lambda u: u ** 7), _const(1.0 / 7.5), 1e-13),
        OracleCase("numerics.semi_infinite", "int_1^inf (s-1)^{-1/2} e^{-s} ds",
                   lambda: integrate_semi_infinite(lambda s: np.exp(-s), 1.0, math.inf, gl=-0.5),
                   _const(math.sqrt(math.pi) / math.e), 1e-10),
        OracleCase("numerics.richardson", "polynomial error model",
                   lambda: richardson_limit([1 + h + 3 * h * h for h in (0.1, 0.05, 0.025)], [0.1, 0.05, 0.025]).value,
                   _const(1.0), 1e-12),
    ]
    return cases


# -- fractional ------------------------------------------------------------------------------------


def _fractional(seed):
    ge = lambda s: np.exp(-np.asarray(s, dtype=float))
    gp = lambda s: np.asarray(s, dtype=float) ** -4.0
    cases = []
    for name, g, mu in (("exp", ge, math.inf), ("pow4", gp, 4.0)):
        for a in (0.5, 1.0, 1.5):
            cases.append(OracleCase(f"fractional.roundtrip.{name}.a{a:g}", "D^alpha I^alpha g = g",
                                    lambda g=g, a=a, mu=mu: roundtrip_check(g, a, mu), _const(0.0), 1e-4,
                                    {"alpha": a}, "abs"))
        cases.append(OracleCase(f"fractional.forms.{name}", "j = 0 and j = m forms agree",
                                lambda g=g, mu=mu: form_agreement(g, 1.5, mu), _const(0.0), 1e-6, {"alpha": 1.5},
                                "abs"))
    cases.append(OracleCase("fractional.strong_form.exp", "strong form round trip",
                            lambda: roundtrip_check(ge, 1.5, mode="strong"), _const(0.0), 1e-4, {}, "abs"))
    for a, b in ((0.5, 0.5), (0.5, 1.0), (1.0, 1.0)):
        res = {}

        def sg(a=a, b=b, res=res):
            res["v"] = semigroup_check(ge, a, b, 1.5)
            return res["v"][0]
        cases.append(OracleCase(f"fractional.semigroup.a{a:g}.b{b:g}", "I^a I^b = I^(a+b)", sg,
                                lambda a=a, b=b: float(np.exp(-1.5)), 1e-6))
    cases.append(OracleCase("fractional.power_weighted", "power-weighted composition",
                            lambda: power_weighted_check(ge, 0.5, 0.5, 1.5)[0],
                            lambda: power_weighted_check(ge, 0.5, 0.5, 1.5)[1], 1e-6))
    return cases


# -- harmonic --------------------------------------------------------------------------------------


def _harmonic(seed):
    cases = []
    for a in (0.5, 1.0, 1.5):
        for lam in (0.0, 1.0, 2.0):
            cases.append(OracleCase(f"harmonic.q_hat.n3.a{a:g}.l{lam:g}", "spherical transform of q_alpha",
                                    lambda a=a, lam=lam: spherical_transform(q_alpha_profile(3, a), lam, 3).real,
                                    lambda a=a, lam=lam: q_alpha_hat(lam, a, 3), 1e-5, {"alpha": a, "lambda": lam}))
    for n, a in ((2, 0.5), (4, 1.5), (5, 2.5)):
        cases.append(OracleCase(f"harmonic.q_hat.n{n}", "spherical transform of q_alpha",
                                lambda n=n, a=a: spherical_transform(q_alpha_profile(n, a), 1.0, n).real,
                                lambda n=n, a=a: q_alpha_hat(1.0, a, n), 1e-5, {"alpha": a}))
    for lam in (0.0, 1.0, 3.0):
        for r in (0.5, 2.0, 6.0):
            cases.append(OracleCase(f"harmonic.phi_n3.l{lam:g}.r{r:g}", "elementary form at n = 3",
                                    lambda lam=lam, r=r: spherical_function(lam, r, 3),
                                    lambda lam=lam, r=r: spherical_function_n3(lam, r), 1e-10))
    for n in (2, 3, 4):
        d = half_dim(n)

        def eig(n=n):
            c = even_curve(lambda r: spherical_function(1.0, r, n), 3.0, 64)
            return max(abs(radial_laplacian(c, r, n) + (1.0 + half_dim(n) ** 2) * float(c(r)))
                       / abs(float(c(r))) for r in (0.5, 1.0, 2.0))
        cases.append(OracleCase(f"harmonic.eigenfunction.n{n}", "Delta Phi = -(lambda^2 + delta^2) Phi", eig,
                                _const(0.0), 1e-4, {"n": n}, "abs"))
        cases.append(OracleCase(f"harmonic.phi_origin.n{n}", "Phi_lambda(0) = 1",
                                lambda n=n: spherical_function(2.0, 0.0, n), _const(1.0), 1e-14))
        cases.append(OracleCase(f"harmonic.phi_even.n{n}", "Phi even in lambda",
                                lambda n=n: spherical_function(-1.3, 1.1, n),
                                lambda n=n: spherical_function(1.3, 1.1, n), 1e-14))
    cases.append(OracleCase("harmonic.convolution", "convolution theorem",
                            lambda: convolution_transform_check(q_alpha_profile(3, 1.0), compact_bump(1.0), 1.0, 3)[0].real,
                            lambda: convolution_transform_check(q_alpha_profile(3, 1.0), compact_bump(1.0), 1.0, 3)[1].real,
                            1e-5))
    return cases


# -- transform ------------------------------------------------------------------------------------------


def alpha_drift(n: int = 3, alphas=(1e-1, 1e-2, 1e-3), family: str = "dual") -> tuple:
    """Drifts ``|S_alpha - lambda_n S_0|`` of the kernel families and the worst deviation factor from
    linear scaling across consecutive ``alphas``."""
    f = _zonal(compact_bump(1.0), n)
    hf = forward_field(f)
    if family == "dual":
        x = _axis(n, 1.5)
        limit = lambda_n(n) * dual(hf, x)
        vals = [semyanistyi_dual(hf, x, SemyanistyiKernel(a, n)) for a in alphas]
    else:
        xi = HoroPoint(0.3, np.eye(n)[-1])
        limit = lambda_n(n) * math.exp((1 - n) * 0.3) * forward(f, xi)
        vals = [semyanistyi_forward(f, xi, SemyanistyiKernel(a, n)) for a in alphas]
    drifts = [abs(v - limit) for v in vals]
    factors = []
    for i in range(1, len(alphas)):
        observed = drifts[i - 1] / drifts[i]
        expected = alphas[i - 1] / alphas[i]
        factors.append(max(observed / expected, expected / observed))
    return tuple(drifts), max(factors)


def _transform(seed):
    rng = np.random.default_rng(seed + 1)
    cases = []
    f3 = _zonal(power_profile(3.0), 3)
    for t in (-1.0, 0.0, 1.0):
        cases.append(OracleCase(f"transform.power_n3.t{t:g}", "transform of x^-3",
                                lambda t=t: forward(f3, HoroPoint(t, np.array([0.0, 0.0, 1.0]))),
                                lambda t=t: oracle_hf_power(3.0, t, 3), 1e-6, {"t": t}))
        cases.append(OracleCase(f"transform.power_n3_closed.t{t:g}", "pi e^{-t} / cosh^2 t",
                                lambda t=t: oracle_hf_power(3.0, t, 3),
                                lambda t=t: math.pi * math.exp(-t) / math.cosh(t) ** 2, 1e-14))
    f2 = _zonal(power_profile(1.0), 2)
    cases.append(OracleCase("transform.power_n2", "transform of x^-1 at n = 2",
                            lambda: forward(f2, HoroPoint(0.0, np.array([0.0, 1.0]))),
                            _const(2.0 * math.pi / math.sqrt(2.0)), 1e-6))
    cases.append(OracleCase("transform.c_beta_n3", "c_3 at n = 3", lambda: c_beta(3.0, 3), _const(4 * math.pi), 1e-14))
    for n in (2, 3):
        fb = _zonal(compact_bump(1.0), n)
        dirs = _random_dirs(rng, n, 2)
        cases.append(OracleCase(f"transform.zonal_vs_general.n{n}", "zonal and general paths agree",
                                lambda fb=fb, n=n, w=dirs[0]: forward(fb, HoroPoint(0.4, w), general=True),
                                lambda fb=fb, n=n: float(forward_zonal(fb.profile, 0.4, n)), 1e-6))
        cases.append(OracleCase(f"transform.zonal_invariance.n{n}", "Hf depends on xi_{n+1} only",
                                lambda fb=fb, w=dirs[0]: forward(fb, HoroPoint(-0.3, w), general=True),
                                lambda fb=fb, w=dirs[1]: forward(fb, HoroPoint(-0.3, w), general=True), 1e-8))
        center = point_from_polar(0.6, dirs[1])
        shifted = ScalarField.shifted(compact_bump(1.0), center)
        xi = HoroPoint(0.2, dirs[0])
        cases.append(OracleCase(f"transform.shifted_center.n{n}", "H of f0([., a]) is Hf0 at log [a, xi]",
                                lambda shifted=shifted, xi=xi: forward(shifted, xi),
                                lambda n=n, xi=xi, center=center: float(forward_zonal(
                                    compact_bump(1.0), math.log(minkowski_form(center.components, xi.components)),
                                    n)), 1e-6))
    # dual examples
    for h in (1.0, 2.0, 4.0):
        phi = HoroField.from_profile(lambda u: u ** -1.5, 3, None)
        cases.append(OracleCase(f"transform.dual_example_n3.h{h:g}", "H* of u^{-3/2}",
                                lambda phi=phi, h=h: dual(phi, _axis(3, h)),
                                lambda h=h: math.sqrt(2.0) / math.sqrt(h + 1.0), 1e-6))
    cases.append(OracleCase("transform.dual_b_origin", "variant B at the origin",
                            lambda: dual(dual_pair_b_field(1.0, 3), HPoint.origin(3)), _const(0.25), 1e-8))
    cases.append(OracleCase("transform.dual_constant", "H* 1 = 1",
                            lambda: dual(HoroField.from_profile(lambda u: np.ones_like(u), 3, None), _axis(3, 2.5)),
                            _const(1.0), 1e-12))
    for n in (2, 3, 4):
        x = _axis(n, 1.7)
        cases.append(OracleCase(f"transform.non_injectivity.n{n}", "dual kernel witness",
                                lambda n=n, x=x: dual(non_injectivity_witness(n), x), _const(0.0), 1e-8, {}, "abs"))
        cb = compact_light_cone_bump(n)
        cases.append(OracleCase(f"transform.dual_zonal_vs_general.n{n}", "zonal and sphere-rule duals agree",
                                lambda cb=cb, x=x: dual(cb, x, general=True, order=48),
                                lambda cb=cb, x=x: dual(cb, x), 1e-6))
    # shifted dual of Hf: (2 pi e^{-t})^delta I^delta M_x f (cosh t)
    fb3 = _zonal(compact_bump(1.0), 3)
    hf3 = forward_field(fb3)
    for h, t in ((1.0, 0.3), (1.5, 0.3), (1.5, 1.0)):
        def mean_side(h=h, t=t):
            from .fractional import rl_integral
            x = _axis(3, h)
            m = lambda s: spherical_mean(fb3, x, np.asarray(s))
            return (2 * math.pi * math.exp(-t)) * rl_integral(m, 1.0, math.cosh(t), support=mean_upper(fb3, x))
        cases.append(OracleCase(f"transform.shifted_dual_mean.h{h:g}.t{t:g}", "shifted dual of Hf via means",
                                lambda h=h, t=t: shifted_dual(hf3, _axis(3, h), t), mean_side, 1e-5))
    for lam in (0.0, 1.0):
        cases.append(OracleCase(f"transform.fourier_slice.l{lam:g}", "Fourier slice identity",
                                lambda lam=lam: fourier_slice_check(fb3, lam, np.array([0.0, 0.0, 1.0]))[0].real,
                                lambda lam=lam: fourier_slice_check(fb3, lam, np.array([0.0, 0.0, 1.0]))[1].real,
                                1e-5, {"lambda": lam}))
    # kernel families
    for a in (0.5, 1.5):
        for v in (1, 2):
            for h in (1.0, 1.5):
                cases.append(OracleCase(f"transform.semyanistyi.a{a:g}.v{v}.h{h:g}", "composition with Q^{alpha+n-1}",
                                        lambda a=a, v=v, h=h: semyanistyi_dual(hf3, _axis(3, h),
                                                                               SemyanistyiKernel(a, 3, v)),
                                        lambda a=a, h=h: q_potential(fb3, a + 2.0, _axis(3, h)), 1e-4))
    for fam in ("dual", "forward"):
        cases.append(OracleCase(f"transform.alpha_limit.{fam}", "O(alpha) drift of the kernel family",
                                lambda fam=fam: alpha_drift(3, family=fam)[1], _const(1.0), 1.0, {}, "rel"))
    # log-kernel dual: H*1 Hf = Q^n f + Phi
    for n in (2, 4):
        fb = _zonal(compact_bump(1.0), n)
        hf = forward_field(fb)
        x = _axis(n, 1.3)

        def log_side(fb=fb, hf=hf, x=x):
            return dual_log(hf, x)

        def pot_side(fb=fb, x=x, n=n):
            from .constants import gamma_tilde
            return q_potential_log(fb, x) + gamma_tilde(n) * b_operator(fb, x) / zeta_prime(n)
        cases.append(OracleCase(f"transform.log_dual.n{n}", "H*1 Hf = Q^n f + Phi", log_side, pot_side, 1e-3))
        cases.append(OracleCase(f"transform.phi_term.n{n}", "Phi as an H^n and a cone integral",
                                lambda fb=fb, hf=hf, x=x: phi_cone(hf, x),
                                lambda fb=fb, x=x, n=n: phi_hn(fb, x), 1e-6))
    return cases


def phi_hn(f: ScalarField, x: HPoint) -> float:
    """``gamma~ int f(y) ([x,y]+1)^{1-n/2} dy``."""
    from .constants import gamma_tilde
    return gamma_tilde(f.n) * b_operator(f, x) / zeta_prime(f.n)


def phi_cone(phi: HoroField, x: HPoint) -> float:
    """``2^{1-n/2} gamma~ int phi(xi) [x,xi]^{-n/2} d xi``."""
    from .constants import gamma_tilde
    from .horo import cone_reduction
    n = phi.n
    w = lambda s: np.exp((0.5 * n - 1.0) * np.asarray(s))
    return 2.0 ** (1 - 0.5 * n) * gamma_tilde(n) * cone_reduction(phi, x, w)


# -- duality -------------------------------------------------------------------------------------------


def _duality(seed):
    cases = []
    for n in (2, 3):
        fb = _zonal(compact_bump(1.0), n)
        cb = compact_light_cone_bump(n)
        cases.append(OracleCase(f"duality.general.n{n}", "int phi Hf = int f H* phi",
                                lambda fb=fb, cb=cb: duality_check(fb, cb)[0],
                                lambda fb=fb, cb=cb: duality_check(fb, cb)[1], 1e-6))
        for name, prof in (("compact", compact_bump(1.0)), ("exp", exp_bump(3.0))):
            f = _zonal(prof, n)
            cases.append(OracleCase(f"duality.unit_order.{name}.n{n}", "alpha = 1 weighted duality",
                                    lambda f=f: duality_unit_order(f)[0], lambda f=f: duality_unit_order(f)[1], 1e-6))
        for a in (0.5, 1.5):
            cases.append(OracleCase(f"duality.pair_first.a{a:g}.n{n}", "first kernel against closed form",
                                    lambda fb=fb, a=a: duality_power_pair(fb, a)[0],
                                    lambda fb=fb, a=a: duality_power_pair(fb, a)[2], 1e-5))
            cases.append(OracleCase(f"duality.pair_second.a{a:g}.n{n}", "second kernel against closed form",
                                    lambda fb=fb, a=a: duality_power_pair(fb, a)[1],
                                    lambda fb=fb, a=a: duality_power_pair(fb, a)[2], 1e-5))
    for a in (0.5, 1.0, 1.5):
        for h in (1.2, 2.0, 4.0):
            n = 3
            x = _axis(n, h)
            phi, psi = dual_pair_fields(a, n)
            cases.append(OracleCase(f"duality.example_phi.a{a:g}.h{h:g}", "H* phi closed form",
                                    lambda phi=phi, x=x: dual(phi, x),
                                    lambda a=a, x=x: oracle_dual_pairs(a, x, "A"), 1e-6))
            cases.append(OracleCase(f"duality.example_psi.a{a:g}.h{h:g}", "H* psi = H* phi",
                                    lambda psi=psi, x=x: dual(psi, x), lambda phi=phi, x=x: dual(phi, x), 1e-6))
            cases.append(OracleCase(f"duality.example_b.a{a:g}.h{h:g}", "variant B closed form",
                                    lambda a=a, x=x: dual(dual_pair_b_field(a, 3), x),
                                    lambda a=a, x=x: oracle_dual_pairs(a, x, "B"), 1e-6))
    for n in (2, 4):
        x = _axis(n, 2.0)
        phi, psi = dual_pair_fields(0.5, n)
        cases.append(OracleCase(f"duality.example_phi.n{n}", "H* phi closed form",
                                lambda phi=phi, x=x: dual(phi, x), lambda x=x: oracle_dual_pairs(0.5, x, "A"), 1e-6))
    cases.append(OracleCase("duality.cone_mass", "int Hf over Gamma_+ equals int f",
                            lambda: integrate_gamma(forward_field(_zonal(compact_bump(1.0), 3))),
                            lambda: integrate_hn(_zonal(compact_bump(1.0), 3)), 1e-8))
    return cases


# -- inversion ---------------------------------------------------------------------------------------------


def _inversion(seed):
    cases = []
    f3b = _zonal(compact_bump(1.0), 3)
    for h in (1.0, 1.5, 2.0):
        cases.append(OracleCase(f"inversion.fuglede.h{h:g}", "H* H f = Q^{n-1} f / lambda_n",
                                lambda h=h: fuglede_check(f3b, _axis(3, h))[0],
                                lambda h=h: fuglede_check(f3b, _axis(3, h))[1], 1e-4))
    cases.append(OracleCase("inversion.lambda3", "1 / lambda_3 = 2 pi", lambda: 1.0 / lambda_n(3),
                            _const(2 * math.pi), 1e-14))
    for n in (3, 4, 5):
        cases.append(OracleCase(f"inversion.lambda_two_paths.n{n}", "c1 / c2 = 1 / lambda_n",
                                lambda n=n: composition_constant_check(n)[0],
                                lambda n=n: composition_constant_check(n)[1], 1e-13))
    tol_a = {2: 2e-2, 3: 1e-2}
    for n in (2, 3):
        f = _zonal(exp_bump(3.0), n)
        hf = forward_field(f)
        for h in (1.0, 1.5, 2.0):
            cases.append(OracleCase(f"inversion.method_a.n{n}.h{h:g}", "mean-value inversion",
                                    lambda hf=hf, n=n, h=h: invert_mean_value(hf, _axis(n, h)).value,
                                    lambda f=f, n=n, h=h: f(_axis(n, h)), tol_a[n]))
    f3e = _zonal(exp_bump(3.0), 3)
    hf3e = forward_field(f3e)
    cases.append(OracleCase("inversion.method_a.eta_stability", "limit stable under halving eta",
                            lambda: invert_mean_value(hf3e, _axis(3, 1.5), MeanValueConfig(eta=5e-4)).value,
                            lambda: invert_mean_value(hf3e, _axis(3, 1.5)).value, 1e-3))
    f2e = _zonal(exp_bump(3.0), 2)
    hf2e = forward_field(f2e)
    cases.append(OracleCase("inversion.method_a.even_forms", "first and second forms agree at n = 2",
                            lambda: invert_mean_value(hf2e, _axis(2, 1.5), MeanValueConfig(form="first")).value,
                            lambda: invert_mean_value(hf2e, _axis(2, 1.5), MeanValueConfig(form="second")).value,
                            1e-3))
    cases.append(OracleCase("inversion.method_a.strong_form", "strong form at n = 2",
                            lambda: invert_mean_value(hf2e, _axis(2, 1.5), MeanValueConfig(form="strong")).value,
                            lambda: f2e(_axis(2, 1.5)), 2e-2))
    tol_b = {2: 5e-2, 3: 1e-2, 5: 5e-2}
    for n in (2, 3, 5):
        f = _zonal(compact_bump(1.0), n)
        hf = forward_field(f)
        for h in ((1.0, 1.3) if n != 3 else (1.0, 1.3, 1.6)):
            cases.append(OracleCase(f"inversion.method_b.n{n}.h{h:g}", "Beltrami-Laplace inversion",
                                    lambda hf=hf, n=n, h=h: invert_bl(hf, _axis(n, h)),
                                    lambda f=f, n=n, h=h: f(_axis(n, h)), tol_b[n]))
    f3 = _zonal(exp_bump(3.0), 3)
    hf3 = forward_field(f3)
    cases.append(OracleCase("inversion.methods_agree", "methods A and B agree",
                            lambda: invert_mean_value(hf3, _axis(3, 1.5)).value,
                            lambda: invert_bl(hf3, _axis(3, 1.5)), 2e-2))
    # structural identities
    cases += _structural()
    return cases


@functools.lru_cache(maxsize=None)
def _structural_curve(kind: str, n: int):
    """Radial samples of the potentials used by the structural cases (compact bump, width 1)."""
    f = _zonal(compact_bump(1.0), n)
    if kind == "log":
        return _radial_curve(lambda x: q_potential_log(f, x), n)
    if kind == "b":
        return _radial_curve(lambda x: b_operator(f, x), n)
    return _radial_curve(lambda x: q_potential(f, float(kind), x), n)


def _structural():
    cases = []
    f3 = _zonal(compact_bump(1.0), 3)
    for r in (0.0, 0.5, 1.0):
        cases.append(OracleCase(f"structural.d4q4.r{r:g}", "D_4 Q^4 f = Q^2 f at n = 3",
                                lambda r=r: float(DAlphaOp(4.0, 3).on_curve(_structural_curve("4", 3))(r)),
                                lambda r=r: float(_structural_curve("2", 3)(r)), 1e-3))
        cases.append(OracleCase(f"structural.p1q2.r{r:g}", "P_1 Q^2 f = f at n = 3",
                                lambda r=r: float(BLPolynomial(1, 3).on_curve(_structural_curve("2", 3))(r)),
                                lambda r=r: float(f3.profile(math.cosh(r))), 1e-2))
    for r in (0.0, 0.5, 1.0):
        cases.append(OracleCase(f"structural.b_eigen.r{r:g}", "-Delta Bf = n(n-2)/4 Bf at n = 4",
                                lambda r=r: -radial_laplacian(_structural_curve("b", 4), r, 4),
                                lambda r=r: 2.0 * float(_structural_curve("b", 4)(r)), 1e-3))

    def annihilated(k):
        c = _structural_curve("b", 4)
        out = DAlphaOp(float(k), 4).on_curve(c).values[16:-16]
        return float(np.max(np.abs(out))) / float(np.max(np.abs(c.values)))

    for k in (2, 4):
        cases.append(OracleCase(f"structural.d{k}_b", "D Bf = 0 at n = 4", lambda k=k: annihilated(k),
                                _const(0.0), 1e-3, {}, "abs"))
    for r in (0.3, 0.8):
        cases.append(OracleCase(f"structural.dnqn_n4.r{r:g}", "D_n Q^n f = Q^{n-2} f - Bf at n = 4",
                                lambda r=r: float(DAlphaOp(4.0, 4).on_curve(_structural_curve("log", 4))(r)),
                                lambda r=r: float(_structural_curve("2", 4)(r)) - float(_structural_curve("b", 4)(r)),
                                1e-3))
    f2 = _zonal(compact_bump(1.0), 2)
    for r in (0.0, 0.5, 1.0):
        cases.append(OracleCase(f"structural.n2_laplacian.r{r:g}", "-Delta Q^2 f = f + (1/4 pi) int f at n = 2",
                                lambda r=r: -radial_laplacian(_structural_curve("log", 2), r, 2),
                                lambda r=r: float(f2.profile(math.cosh(r))) + integrate_hn(f2) / (4 * math.pi),
                                1e-3))
    for n in (2, 3):
        for rho, r in ((0.7, 0.5), (1.0, 1.2)):
            cases.append(OracleCase(f"structural.darboux.n{n}.rho{rho:g}.r{r:g}", "Darboux equation",
                                    lambda n=n, rho=rho, r=r: darboux_check(compact_bump(1.5), n, rho, r)[0],
                                    lambda n=n, rho=rho, r=r: darboux_check(compact_bump(1.5), n, rho, r)[1], 1e-4))
    eps = 1e-7
    for n in (2, 3, 4):
        cases.append(OracleCase(f"structural.zeta_prime_limit.n{n}", "zeta' as a residue of zeta",
                                lambda n=n: -0.5 * eps * zeta(n, n - eps), lambda n=n: zeta_prime(n), 1e-5))
        cases.append(OracleCase(f"structural.gamma_prime_limit.n{n}", "gamma' as a residue of gamma_alpha",
                                lambda n=n: eps * gamma_alpha(1.0 + eps, n), lambda n=n: gamma_prime(n), 1e-5))
    return cases


_BUILDERS = {"geometry": _geometry, "fractional": _fractional, "harmonic": _harmonic,
             "transform": _transform, "duality": _duality, "inversion": _inversion}
