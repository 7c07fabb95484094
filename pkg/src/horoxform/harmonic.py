"""Spherical functions and Fourier analysis on H^n."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .constants import dual_zonal_const, half_dim, sphere_area
from .errors import NumericalFailure, PreconditionError
from .fields import RadialProfile, ScalarField, hyperbolic_convolution
from .lorentz import HPoint, bracket_b
from .numerics import integrate
from .numerics.quadrature import DEFAULT_REL_TOL

# Lanczos approximation, g = 7, nine terms
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(z) -> complex:
    """``log Gamma(z)`` for complex ``z`` off the poles.

    The real part is ``log|Gamma(z)|``; the imaginary part is an argument of
    ``Gamma(z)`` that may differ from the analytic branch by a multiple of 2 pi
    when ``Re z < 1/2``.
    """
    z = complex(z)
    if z.real < 0.5:
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        if z.imag == 0 and z.real == round(z.real):
            raise PreconditionError(f"Gamma has a pole at {z}")
        s = cmath.sin(math.pi * z)
        if s == 0:
            raise PreconditionError(f"Gamma has a pole at {z}")
        return complex(math.log(math.pi)) - cmath.log(s) - log_gamma(1.0 - z)
    z -= 1.0
    acc = _LANCZOS[0]
    for k in range(1, 9):
        acc += _LANCZOS[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


@dataclass(frozen=True)
class SpectralParam:
    lam: float
    n: int
    omega: np.ndarray | None = None

    @property
    def delta(self) -> float:
        return half_dim(self.n)


def logsinh(x):
    """``log sinh x`` for ``x > 0`` without overflow."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(x > 20.0, x - math.log(2.0), np.log(np.sinh(np.minimum(x, 20.0))))


# -- spherical function ------------------------------------------------------------


def _phi_panel_rules(m, g):
    xl, wl = roots_legendre(m)
    xj, wj = roots_jacobi(m, g, 0.0)  # weight (1-x)^g: singular at the right end
    return xl, wl, xj, wj


def spherical_function(lam: float, r, n: int, m: int = 12):
    """Zonal spherical function normalized by ``Phi(0) = 1``.

    Evaluated as ``2 c sinh(r)^(-delta) int_0^r cos(lam s) K(r, s)^(delta-1) ds``
    with ``K = (cosh r - cosh s)/sinh r``: an Abel-type form obtained from
    the angular integral by substituting ``e^s = cosh r - sinh r cos psi``;
    the endpoint singularity of ``K^(delta-1)`` at ``s = r`` is carried by a
    Gauss-Jacobi panel.  Vectorized in ``r``.
    """
    if n < 2:
        raise PreconditionError("n must be at least 2")
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r < 0):
        raise PreconditionError("radius must be non-negative")
    d = half_dim(n)
    g = d - 1.0
    lam = abs(float(lam))
    width = min(1.0, 3.0 / max(lam, 1e-300))
    out = np.ones_like(r)
    xl, wl, xj, wj = _phi_panel_rules(m, g)
    c = 2.0 * dual_zonal_const(n)
    pos = r > 0
    counts = np.maximum(1, np.ceil(r / width).astype(int))
    for P in np.unique(counts[pos]):
        sel = pos & (counts == P)
        rr = r[sel]
        h = rr / P
        total = np.zeros(rr.size)
        # smooth panels [k h, (k+1) h], k < P-1
        if P > 1:
            k = np.arange(P - 1)
            s = (k[None, :, None] + 0.5 * (1.0 + xl[None, None, :])) * h[:, None, None]
            val = np.cos(lam * s) * _kernel_pow(rr[:, None, None], s, g)
            total += np.einsum("rkj,j->r", val, wl) * 0.5 * h
        # last panel carries (r - s)^g
        s = (P - 1) * h[:, None] + 0.5 * h[:, None] * (1.0 + xj[None, :])  # x = 1 maps to s = r
        val = np.cos(lam * s) * _kernel_pow_reg(rr[:, None], s, g)
        total += (val @ wj) * (0.5 * h) ** (1.0 + g)
        out[sel] = c * np.exp(-d * logsinh(rr)) * total
    return float(out[0]) if scalar else out


def _log_kernel(r, s):
    # log[(cosh r - cosh s)/sinh r], cosh r - cosh s = 2 sinh((r+s)/2) sinh((r-s)/2)
    return math.log(2.0) + logsinh(0.5 * (r + s)) + logsinh(np.maximum(0.5 * (r - s), 1e-300)) - logsinh(r)


def _kernel_pow(r, s, g):
    if g == 0:
        return np.ones(np.broadcast_shapes(np.shape(r), np.shape(s)))
    return np.exp(g * _log_kernel(r, s))


def _kernel_pow_reg(r, s, g):
    """``[K(r,s) / (r-s)]^g`` continued to ``s = r``."""
    if g == 0:
        return np.ones(np.broadcast_shapes(np.shape(r), np.shape(s)))
    u = np.maximum(0.5 * (r - s), 0.0)
    small = u < 1e-6
    us = np.where(small, 1.0, u)
    log_sinc = np.where(small, u * u / 6.0, logsinh(us) - np.log(us))
    lg = logsinh(0.5 * (r + s)) - logsinh(r) + log_sinc
    return np.exp(g * lg)


def spherical_function_angular(lam: float, r: float, n: int, rel_tol: float = 1e-10):
    """The defining angular integral, returned as a complex number.

    ``(sigma_{n-2}/sigma_{n-1}) int_0^pi (cosh r - sinh r cos psi)^(i lam - delta) sin^(n-2) psi dpsi``;
    its imaginary part vanishes, which callers may assert.
    """
    d = half_dim(n)
    g = 0.5 * (n - 3)
    norm = math.gamma(0.5 * n) / (math.sqrt(math.pi) * math.gamma(0.5 * (n - 1)))
    ch, sh = math.cosh(r), math.sinh(r)

    def base(z):
        # cosh r - z sinh r, written stably near z = 1
        return np.where(z > 0, (1.0 + sh * sh * (1.0 - z) * (1.0 + z)) / (ch + z * sh), ch - z * sh)

    expo = complex(-d, lam)
    # the base falls to e^-r near z = 1: geometric breaks resolve the log-scale oscillation
    breaks = []
    if sh > 0:
        u = math.exp(-r) / sh
        while u < 1.0:
            breaks.append(1.0 - u)
            u *= 2.0
    kw = dict(rel_tol=rel_tol, gl=g or None, gr=g or None, abs_tol=1e-16, breaks=tuple(sorted(breaks)))
    re = integrate(lambda z: np.real(np.exp(expo * np.log(base(z)))), -1.0, 1.0, **kw)
    kw["abs_tol"] = max(1e-16, rel_tol * abs(re))
    im = integrate(lambda z: np.imag(np.exp(expo * np.log(base(z)))), -1.0, 1.0, **kw)
    return norm * complex(re, im)


# -- transforms ---------------------------------------------------------------------


def _truncation_radius(prof: RadialProfile, n: int, tol=1e-17):
    b = prof.effective_bound()
    if math.isfinite(b):
        return math.acosh(b)
    kappa = prof.tail_mu - half_dim(n)
    if kappa <= 0:
        raise PreconditionError(
            f"profile decay exponent {prof.tail_mu} must exceed (n-1)/2 for the spherical transform")
    R = (-math.log(tol) + 2.0) / kappa
    return min(R, 600.0 / max(n - 1, 1))


def spherical_transform(f0: RadialProfile, lam: float, n: int, rel_tol: float = 1e-11):
    """``sigma_{n-1} int_0^inf f0(cosh r) Phi_lam(r) sinh^{n-1} r dr``."""
    R = _truncation_radius(f0, n)
    p = f0.left_power
    gl = 2.0 * p + n - 1.0
    if gl <= -1:
        raise PreconditionError("profile singularity at the origin is not integrable")

    def g(r):
        x = np.maximum(r, 1e-300)
        ch = np.cosh(x)
        if p:
            # (cosh r - 1)^p = r^{2p} (2 sinh^2(r/2)/r^2)^p
            sing = (2.0 * np.sinh(0.5 * x) ** 2 / (x * x)) ** p
            base = f0.reg(ch) * sing
        else:
            base = f0(ch)
        jac = np.exp((n - 1) * (logsinh(x) - np.log(x)))
        return base * jac * spherical_function(lam, x, n)

    width = min(2.0, 6.0 / max(abs(lam), 1e-300))
    breaks = np.arange(width, R, width)
    val = integrate(g, 0.0, R, rel_tol=rel_tol, gl=gl or None, breaks=tuple(breaks), abs_tol=1e-300,
                    window=min(0.1, width / R))
    return sphere_area(n - 1) * val


def fourier_transform(f: ScalarField, lam: float, omega, rel_tol: float = 1e-10, order: int = 32):
    """``int f(x) [x, b(omega)]^(i lam - delta) dx``; zonal fields use the spherical transform."""
    n = f.n
    omega = np.asarray(omega, dtype=float)
    if f.is_zero():
        return 0j
    if f.zonal:
        return complex(spherical_transform(f.profile, lam, n))
    from .fields import _integrate_hn_horo
    expo = complex(-half_dim(n), lam)
    bound = f.x_bound()
    if not math.isfinite(bound):
        raise PreconditionError("the Fourier transform of a non-zonal field needs compact support")

    def ev(x):
        return f.evaluator(x) * np.exp(expo * np.log(bracket_b(x, omega)))

    re = _integrate_hn_horo(ScalarField(n, lambda x: np.real(ev(x))), bound, rel_tol, order)
    im = _integrate_hn_horo(ScalarField(n, lambda x: np.imag(ev(x))), bound, rel_tol, order)
    return complex(re, im)


def q_alpha_hat(lam: float, alpha: float, n: int) -> float:
    """Closed-form spherical transform of the potential kernel of order ``alpha``."""
    if not 0 < alpha < n - 1:
        raise PreconditionError(f"alpha must lie in (0, {n - 1})")
    d = half_dim(n)
    a = log_gamma(complex(d - 0.5 * alpha, lam)).real
    b = log_gamma(complex(d, lam)).real
    # Gamma(a + i l) Gamma(a - i l) = |Gamma(a + i l)|^2
    return math.exp(2.0 * (a - b))


def sample_zonal(fn, n, r_max, nodes=96, mu=None):
    """Chebyshev sample of a zonal function of ``s = cosh r`` in ``u = log(1 + r)``.

    ``fn`` maps an array of heights to values; the logarithmic variable
    concentrates nodes near the origin.  With a power decay ``mu`` the sampled
    quantity is ``fn(s) s^mu``, restored on evaluation, and continued past
    ``r_max`` as a pure power.
    """
    from .numerics import SampledCurve
    mu = 0.0 if mu is None else float(mu)
    u_max = math.log1p(r_max)

    def sampled(u):
        ch = np.cosh(np.expm1(u))
        return fn(ch) * ch ** mu

    curve = SampledCurve.from_function(sampled, 0.0, u_max, nodes)
    end = float(curve.values[-1])
    s_end = math.cosh(r_max)

    def prof(s):
        s = np.asarray(s, dtype=float)
        r = np.arccosh(np.maximum(s, 1.0))
        inside = r <= r_max
        out = np.empty(s.shape)
        out[inside] = curve(np.log1p(r[inside])) * s[inside] ** (-mu)
        out[~inside] = end * s[~inside] ** (-mu) if mu else 0.0
        return out

    return RadialProfile(prof, mu if mu else math.inf, None if mu else s_end, label="sampled-zonal")


def convolution_transform_check(k: RadialProfile, f0: RadialProfile, lam: float, n: int,
                                r_max: float | None = None, nodes: int = 128, rel_tol: float = 1e-10):
    """``(spherical transform of k * f, k^(lam) f^(lam))``."""
    if f0.label == "zero":
        return 0.0, 0.0
    f = ScalarField.from_profile(f0, n)
    mu = k.tail_mu if math.isfinite(k.tail_mu) else None
    if r_max is None:
        kappa = (mu - half_dim(n)) if mu is not None else 4.0
        r_max = min(40.0, 18.0 / kappa)

    def conv(s):
        return np.array([hyperbolic_convolution(k, f, HPoint.on_axis(n, float(si)), rel_tol) for si in s])

    kf = sample_zonal(conv, n, r_max, nodes, mu)
    lhs = spherical_transform(kf, lam, n, rel_tol=1e-9)
    rhs = spherical_transform(k, lam, n) * spherical_transform(f0, lam, n)
    return lhs, rhs
