"""Upper-limit Riemann-Liouville integrals ``I^alpha_-`` and their left inverses."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from .errors import PreconditionError
from .fields import RadialProfile
from .numerics import SampledCurve, TailModel, integrate, integrate_semi_infinite
from .numerics.quadrature import DEFAULT_REL_TOL


@dataclass(frozen=True)
class FracOrder:
    """``alpha = m + alpha0`` with ``m`` an integer and ``0 <= alpha0 < 1``."""

    alpha: float
    m: int = 0
    alpha0: float = 0.0

    def __post_init__(self):
        a = float(self.alpha)
        if not a > 0:
            raise PreconditionError("fractional order must be positive")
        k = round(a)
        if abs(a - k) < 1e-13:
            m, a0 = int(k), 0.0
        else:
            m = int(math.floor(a))
            a0 = a - m
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "alpha0", a0)

    @property
    def integer(self) -> bool:
        return self.alpha0 == 0.0


# -- integrals ------------------------------------------------------------------


def rl_integral(g, alpha: float, r, *, tail_mu: float | None = None, support=None,
                rel_tol: float = DEFAULT_REL_TOL):
    """``(1/Gamma(alpha)) int_r^inf g(s) (s-r)^(alpha-1) ds``.

    ``g`` may be a :class:`RadialProfile`, a :class:`SampledCurve` with a
    tail model, or a vectorized callable (pass ``tail_mu`` and optionally
    ``support``).  ``r`` may be a scalar or an array.
    """
    alpha = float(alpha)
    if not alpha > 0:
        raise PreconditionError("fractional order must be positive")
    if isinstance(g, SampledCurve):
        return _rl_curve(g, alpha, r, rel_tol)
    left_power, regular = 0.0, None
    if isinstance(g, RadialProfile):
        mu, bound = g.tail_mu, g.effective_bound()
        if g.left_power:
            left_power, regular = g.left_power, g.reg
        fn = g
    else:
        mu = math.inf if tail_mu is None else float(tail_mu)
        bound = math.inf if support is None else float(support)
        fn = g
    if not mu > alpha:
        raise PreconditionError(
            f"I^{alpha} diverges: decay exponent {mu} must exceed the order {alpha}")
    scalar = np.ndim(r) == 0
    rs = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.empty(rs.shape)
    gam = math.gamma(alpha)
    for i, ri in enumerate(rs):
        out[i] = _rl_point(fn, alpha, ri, mu, bound, left_power, regular, rel_tol) / gam
    return float(out[0]) if scalar else out


def _rl_point(fn, alpha, r, mu, bound, left_power, regular, rel_tol):
    if r >= bound:
        return 0.0
    gl = alpha - 1.0
    if left_power and r <= 1.0:
        # profile singular at the base point: merge both powers into one weight
        integrand, gl = regular, gl + left_power
    else:
        integrand = fn
    gl = gl or None
    if math.isfinite(bound):
        return integrate(integrand, r, bound, rel_tol=rel_tol, gl=gl)
    eff = mu - (alpha - 1.0)
    return integrate_semi_infinite(integrand, r, eff, rel_tol, gl=gl, first=max(1.0, 0.25 * abs(r)))


def _rl_curve(c: SampledCurve, beta: float, r, rel_tol):
    """``I^beta`` of a Chebyshev/spline curve plus its analytic tail."""
    if c.tail is None:
        raise PreconditionError("fractional integration of a sampled curve needs a tail model")
    if not c.tail.mu > beta:
        raise PreconditionError(
            f"I^{beta} diverges: tail exponent {c.tail.mu} must exceed the order {beta}")
    scalar = np.ndim(r) == 0
    rs = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(rs < c.a - 1e-12 * (c.b - c.a)):
        raise PreconditionError("evaluation point below the grid")
    b = c.b
    m = max(c.size // 2 + 4, 24)
    x, w = roots_jacobi(m, 0.0, beta - 1.0)
    inside = rs < b
    out = np.zeros(rs.shape)
    if np.any(inside):
        ri = rs[inside]
        half = 0.5 * (b - ri)
        nodes = ri[:, None] + half[:, None] * (1.0 + x[None, :])
        out[inside] = (c(nodes.ravel()).reshape(nodes.shape) @ w) * half ** beta
    if c.tail.terms:
        for i, ri in enumerate(rs):
            out[i] += _tail_piece(c.tail, beta, ri, b, rel_tol)
    out /= math.gamma(beta)
    return float(out[0]) if scalar else out


def _tail_piece(tail: TailModel, beta, r, b, rel_tol):
    lo = max(b, r)
    gap = lo - r
    mu = tail.mu - (beta - 1.0)
    if beta == 1.0:
        f = tail
        gl = None
    elif gap <= 1e-12 * max(1.0, b):
        f = tail
        gl = beta - 1.0
    else:
        f = lambda s: tail(s) * (s - r) ** (beta - 1.0)
        gl = None
    return integrate_semi_infinite(f, lo, mu, rel_tol, gl=gl, first=max(1.0, 0.25 * lo),
                                   abs_tol=1e-300)


def rl_integral_curve(c: SampledCurve, beta: float, tail_mu: float | None = None, rel_tol=DEFAULT_REL_TOL):
    """``I^beta c`` resampled on the grid of ``c``, with a power/exponential tail."""
    vals = _rl_curve(c, beta, c.grid, rel_tol)
    tail = _integrated_tail(c.tail, beta, vals)
    return SampledCurve(c.grid, vals, c.kind, tail)


def _integrated_tail(tail, beta, vals):
    if tail is None or not tail.terms:
        return None if tail is None else TailModel.zero(tail.anchor)
    v = float(vals[-1])
    if tail.rate > 0:
        return TailModel.exponential(tail.anchor, v, tail.rate)
    return TailModel.power(tail.anchor, v, tail.mu - beta)


# -- derivatives -------------------------------------------------------------------


def _check_tail(h: SampledCurve, alpha):
    if h.tail is None:
        raise PreconditionError("fractional differentiation needs the curve's tail model")
    if not h.tail.mu > alpha:
        raise PreconditionError(
            f"curve decays like s^-{h.tail.mu}, too slowly for order {alpha}")


def rl_derivative(h: SampledCurve, alpha: float, mode: str = "j", j: int = 0,
                  rel_tol: float = DEFAULT_REL_TOL) -> SampledCurve:
    """Left inverse ``D^alpha_-`` of ``I^alpha_-`` applied to a sampled curve.

    ``mode="j"`` uses the power-weighted form with ``j`` inner derivatives,
    ``mode="strong"`` differentiates ``I^(1-alpha0) h`` ``m+1`` times.
    Integer orders reduce to ``(-1)^m h^(m)`` regardless of mode.
    """
    order = FracOrder(alpha)
    m, a0 = order.m, order.alpha0
    if order.integer:
        return _scaled(h.derivative(m), (-1.0) ** m)
    _check_tail(h, alpha)
    sign = (-1.0) ** (m + 1)
    if mode == "strong":
        inner = rl_integral_curve(h, 1.0 - a0, rel_tol=rel_tol)
        return _scaled(inner.derivative(m + 1), sign)
    if mode != "j":
        raise PreconditionError(f"unknown derivative mode {mode!r}")
    if not 0 <= j <= m:
        raise PreconditionError(f"j must lie in 0..{m}")
    u = h.derivative(j).times_power(j - m - 1.0)
    G = rl_integral_curve(u, 1.0 - a0, rel_tol=rel_tol).times_power(m - j + a0)
    d = G.derivative(m - j + 1).times_power(1.0 - a0)
    return _scaled(d, sign)


def rl_halfinteger_derivative(h: SampledCurve, k_odd: int, form: str = "first",
                              rel_tol: float = DEFAULT_REL_TOL) -> SampledCurve:
    """``D^{k/2}_-`` for odd ``k``; ``form="second"`` differentiates first."""
    k = int(k_odd)
    if k < 1 or k % 2 == 0:
        raise PreconditionError("k must be a positive odd integer")
    m = (k - 1) // 2
    j = 0 if form == "first" else m
    return rl_derivative(h, 0.5 * k, "j", j, rel_tol)


def _scaled(c: SampledCurve, k: float) -> SampledCurve:
    tail = None if c.tail is None else c.tail.scaled(k)
    return SampledCurve(c.grid, k * c.values, c.kind, tail)


# -- identity checks ------------------------------------------------------------------


def _sampled_integral(g, alpha, tail_mu, a, b, nodes, rel_tol):
    """``I^alpha g`` on a CGL grid over ``[a, b]`` with a matching tail model."""
    from .numerics import cgl_nodes, fit_tail
    grid = cgl_nodes(nodes, a, b)
    h = rl_integral(g, alpha, grid, tail_mu=tail_mu, rel_tol=rel_tol)
    mu = None if not math.isfinite(tail_mu) else tail_mu - alpha
    return SampledCurve(grid, h, "chebyshev", fit_tail(grid, h, mu))


def roundtrip_check(g, alpha: float, tail_mu: float = math.inf, *, mode: str = "j", j: int = 0,
                    grid=(1.1, 12.0), nodes: int = 64, window=(1.1, 5.0), rel_tol=DEFAULT_REL_TOL) -> float:
    """Max relative error of ``D^alpha I^alpha g`` against ``g`` on ``window``."""
    h = _sampled_integral(g, alpha, tail_mu, grid[0], grid[1], nodes, rel_tol)
    d = rl_derivative(h, alpha, mode, j, rel_tol)
    s = np.linspace(window[0], window[1], 41)
    ref = np.asarray(g(s), dtype=float)
    return float(np.max(np.abs(d(s) - ref) / np.abs(ref)))


def form_agreement(g, alpha: float, tail_mu: float = math.inf, *, grid=(1.1, 12.0), nodes: int = 64,
                   window=(1.1, 5.0), rel_tol=DEFAULT_REL_TOL) -> float:
    """Max relative gap between the ``j = 0`` and ``j = m`` derivative forms on ``I^alpha g``."""
    h = _sampled_integral(g, alpha, tail_mu, grid[0], grid[1], nodes, rel_tol)
    m = FracOrder(alpha).m
    s = np.linspace(window[0], window[1], 41)
    first = rl_derivative(h, alpha, "j", 0, rel_tol)(s)
    last = rl_derivative(h, alpha, "j", m, rel_tol)(s)
    return float(np.max(np.abs(first - last) / np.abs(last)))


def semigroup_check(g, alpha: float, beta: float, r, tail_mu: float = math.inf, rel_tol=DEFAULT_REL_TOL):
    """``(I^alpha I^beta g (r), I^{alpha+beta} g (r))``."""
    inner = lambda s: rl_integral(g, beta, s, tail_mu=tail_mu, rel_tol=rel_tol)
    lhs = rl_integral(inner, alpha, r, tail_mu=tail_mu - beta if math.isfinite(tail_mu) else math.inf,
                      rel_tol=rel_tol)
    return lhs, rl_integral(g, alpha + beta, r, tail_mu=tail_mu, rel_tol=rel_tol)


def power_weighted_check(g, mu: float, nu: float, r, tail_mu: float = math.inf, rel_tol=DEFAULT_REL_TOL):
    """``(I^{mu+nu} [s^-nu g] (r), r^mu I^nu [s^{-mu-nu} I^mu g] (r))``."""
    tm = tail_mu
    lhs = rl_integral(lambda s: np.asarray(s) ** (-nu) * g(s), mu + nu, r, tail_mu=tm + nu, rel_tol=rel_tol)
    inner = lambda s: np.asarray(s, dtype=float) ** (-mu - nu) * rl_integral(g, mu, s, tail_mu=tm, rel_tol=rel_tol)
    rhs = r ** mu * rl_integral(inner, nu, r, tail_mu=tm + nu, rel_tol=rel_tol)
    return lhs, rhs
