"""Reconstruction of f from its horospherical transform."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import half_dim, lambda_n
from .errors import NumericalFailure, PreconditionError
from .fields import HoroField, ScalarField, integrate_gamma
from .fractional import rl_derivative
from .horo import dual, dual_log, dual_zonal, forward_field, shifted_dual
from .lorentz import HPoint
from .numerics import SampledCurve, TailModel, cgl_nodes, fit_tail, richardson_limit
from .numerics.quadrature import DEFAULT_REL_TOL
from .potentials import BL_NODES, BL_NODES_HIGH, BLPolynomial, even_curve, laplacian_curve, q_potential


@dataclass(frozen=True)
class MeanValueConfig:
    """Grid and limit settings for the mean-value inversion."""

    eta: float = 1e-3
    tau_max: float = math.cosh(4.0)
    nodes: int = 64
    form: str = "auto"  # "first", "second", "strong" or "auto"
    limit_points: int = 5
    decay_mu: float = math.inf
    rel_tol: float = DEFAULT_REL_TOL


@dataclass(frozen=True)
class MeanValueResult:
    value: float
    error: float
    samples: tuple
    steps: tuple
    warning: bool


def mean_value_curve(phi: HoroField, x: HPoint, cfg: MeanValueConfig = MeanValueConfig()) -> SampledCurve:
    """``psi_x(tau) = (2 pi e^{-t})^{-delta} (H*_x phi)(t)`` at ``t = arccosh tau`` on a Chebyshev grid."""
    n = phi.n
    d = half_dim(n)
    grid = cgl_nodes(cfg.nodes, 1.0 + cfg.eta, cfg.tau_max)
    t = np.arccosh(grid)
    scale = max(abs(shifted_dual(phi, x, 0.0, rel_tol=cfg.rel_tol)), 1e-300)
    sd = np.array([shifted_dual(phi, x, float(ti), rel_tol=cfg.rel_tol, abs_tol=1e-14 * scale) for ti in t])
    vals = (2.0 * math.pi * np.exp(-t)) ** (-d) * sd
    scale = float(np.max(np.abs(vals))) if vals.size else 0.0
    if scale == 0.0 or abs(vals[-1]) <= 1e-14 * scale:
        tail = TailModel.zero(float(grid[-1]))
    else:
        tail = fit_tail(grid, vals, cfg.decay_mu if math.isfinite(cfg.decay_mu) else None)
    return SampledCurve(grid, vals, "chebyshev", tail)


def _form(n, cfg):
    if cfg.form != "auto":
        return cfg.form
    if n % 2 == 0 and cfg.decay_mu > 0.5 * n:
        return "strong"
    return "first"


def mean_from_curve(psi: SampledCurve, n: int, form: str = "first", rel_tol=DEFAULT_REL_TOL) -> SampledCurve:
    """``D^delta psi``, the spherical mean ``s -> M_x f(s)``."""
    d = half_dim(n)
    if n % 2 == 1:
        return rl_derivative(psi, d, rel_tol=rel_tol)
    if form == "strong":
        return rl_derivative(psi, d, "strong", rel_tol=rel_tol)
    m = int(round(d - 0.5))
    j = 0 if form == "first" else m
    return rl_derivative(psi, d, "j", j, rel_tol=rel_tol)


def invert_mean_value(phi: HoroField, x: HPoint, cfg: MeanValueConfig = MeanValueConfig()) -> MeanValueResult:
    """``f(x)`` as the ``s -> 1`` limit of the spherical means recovered from the shifted dual."""
    n = phi.n
    if phi.is_zero():
        return MeanValueResult(0.0, 0.0, (), (), False)
    psi = mean_value_curve(phi, x, cfg)
    mean = mean_from_curve(psi, n, _form(n, cfg), cfg.rel_tol)
    steps = cfg.eta * 2.0 ** np.arange(cfg.limit_points)
    vals = np.asarray(mean(1.0 + steps), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NumericalFailure("non-finite spherical means", diagnostics={"values": vals.tolist()})
    res = richardson_limit(vals, steps, p=1)
    scale = max(float(np.max(np.abs(vals))), 1e-300)
    if res.warning and res.error > 1e-3 * scale:
        raise NumericalFailure("mean-value limit did not converge", value=res.value, error=res.error,
                               diagnostics={"values": vals.tolist(), "steps": steps.tolist()})
    return MeanValueResult(res.value, res.error, tuple(vals), tuple(steps), res.warning)


# -- Method B -------------------------------------------------------------------


@dataclass(frozen=True)
class BLConfig:
    radius_margin: float = 2.0
    nodes: int | None = None
    rel_tol: float = DEFAULT_REL_TOL


def _dual_curve(phi: HoroField, R: float, nodes: int, rel_tol, log: bool) -> SampledCurve:
    n = phi.n
    if log:
        fn = lambda r: np.array([dual_log(phi, HPoint.on_axis(n, math.cosh(float(ri))), rel_tol) for ri in r])
    else:
        fn = lambda r: np.array([dual_zonal(phi, float(ri), n, rel_tol=rel_tol) for ri in r])
    return even_curve(fn, R, nodes)


def invert_bl(phi: HoroField, x: HPoint, cfg: BLConfig = BLConfig()) -> float:
    """``f(x)`` by a Beltrami-Laplace polynomial applied to a dual transform (zonal inputs).

    Odd ``n``: ``lambda_n P_{(n-1)/2}(Delta) H* phi``.  ``n = 2``:
    ``-Delta H*1 phi - (1/4 pi) int phi``, since ``-Delta Q^2 f = f + (1/4 pi) int f``
    (``Delta log(cosh r - 1) = 1`` off the diagonal).  Even ``n >= 4``:
    ``P_{n/2}(Delta) H*1 phi`` with the log-kernel dual ``H*1``.
    """
    n = phi.n
    if not phi.zonal:
        raise PreconditionError("the Beltrami-Laplace inversion path accepts zonal light-cone fields only")
    if phi.is_zero():
        return 0.0
    r = math.acosh(max(x.height, 1.0))
    R = r + cfg.radius_margin
    ell = (n - 1) // 2 if n % 2 else n // 2
    nodes = cfg.nodes or (BL_NODES_HIGH if ell >= 2 else BL_NODES)
    if n % 2:
        c = _dual_curve(phi, R, nodes, cfg.rel_tol, False)
        out = BLPolynomial(ell, n).on_curve(c)
        return lambda_n(n) * float(out(r))
    c = _dual_curve(phi, R, nodes, cfg.rel_tol, True)
    if n == 2:
        lap = laplacian_curve(c, n)
        return -float(lap(r)) - integrate_gamma(phi, cfg.rel_tol) / (4.0 * math.pi)
    return float(BLPolynomial(ell, n).on_curve(c)(r))


def fuglede_check(f: ScalarField, x: HPoint, rel_tol: float = DEFAULT_REL_TOL):
    """``(H* H f (x), lambda_n^{-1} Q^{n-1} f (x))``."""
    n = f.n
    if f.is_zero():
        return 0.0, 0.0
    lhs = dual(forward_field(f, rel_tol), x, rel_tol=rel_tol)
    rhs = q_potential(f, n - 1.0, x, rel_tol) / lambda_n(n)
    return lhs, rhs
