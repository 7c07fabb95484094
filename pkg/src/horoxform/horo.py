"""The horospherical transform, its duals, and the kernel-weighted families."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .constants import c_alpha, dual_zonal_const, forward_zonal_const, gamma_alpha, gamma_prime, half_dim, sphere_area
from .errors import DimensionMismatch, PreconditionError
from .fields import HoroField, RadialProfile, ScalarField, integrate_gamma, radial_integral
from .fractional import rl_integral
from .harmonic import fourier_transform, logsinh
from .lorentz import HoroPoint, HPoint, bracket_b, embed_rotation, horo_to_array, rotation_to
from .numerics import SampledCurve, integrate, integrate_log_singular, integrate_semi_infinite, sphere_quadrature
from .numerics.quadrature import DEFAULT_REL_TOL

SPHERE_ORDER = 24
FIELD_NODES = 64


# -- forward transform ------------------------------------------------------------


def forward_zonal(f0: RadialProfile, t, n: int, rel_tol: float = DEFAULT_REL_TOL):
    """``(2 pi)^delta e^{-t delta} (I^delta f0)(cosh t)`` for a zonal field; vectorized in ``t``."""
    d = half_dim(n)
    if not f0.tail_mu > d:
        raise PreconditionError(
            f"horospherical integrals diverge: decay exponent {f0.tail_mu} must exceed (n-1)/2 = {d}")
    t = np.asarray(t, dtype=float)
    val = rl_integral(f0, d, np.cosh(t), rel_tol=rel_tol)
    return forward_zonal_const(n) * np.exp(-d * t) * val


def forward(f: ScalarField, xi: HoroPoint, rel_tol: float = DEFAULT_REL_TOL, *, general: bool = False,
            order: int = SPHERE_ORDER) -> float:
    """Integral of ``f`` over the horosphere ``[x, xi] = 1``.

    The general path parametrizes the horosphere as ``k a_t n_v x0``, passes
    to polar coordinates in ``v`` and to the height gain
    ``u = |v|^2 e^{-t} / 2`` (so that ``x_{n+1} = cosh t + u``), and
    integrates ``u^{(n-3)/2}`` times the angular mean, truncated at the
    support or by the decay tail.
    """
    if xi.dim != f.n:
        raise DimensionMismatch("horosphere and field dimensions differ")
    if f.is_zero():
        return 0.0
    n = f.n
    if f.zonal and not general:
        return float(forward_zonal(f.profile, xi.t, n, rel_tol))
    d = half_dim(n)
    t = float(xi.t)
    bound = f.x_bound()
    if not math.isfinite(bound) and not f.decay_mu > d:
        raise PreconditionError(
            f"horospherical integrals diverge: decay exponent {f.decay_mu} must exceed (n-1)/2 = {d}")
    base = math.cosh(t)
    if base >= bound:
        return 0.0
    g = embed_rotation(rotation_to(xi.omega))
    if n == 2:
        dirs, dw = np.array([[1.0], [-1.0]]), np.array([0.5, 0.5])
    else:
        sph = sphere_quadrature(n - 1, order)
        dirs, dw = sph.nodes, sph.weights
    t_scale = math.exp(t)

    def mean_at(u):
        u = np.atleast_1d(u)
        # horosphere coordinates y = v e^{-t} carry the induced measure; |y|^2 = 2 e^{-t} u
        rho = np.sqrt(2.0 * u / t_scale) * t_scale
        v = rho[:, None, None] * dirs[None, :, :]
        x = horo_to_array(v, np.full(rho.shape + (1,), t))
        x = x @ g.T
        vals = np.asarray(f.evaluator(x.reshape(-1, n + 1))).reshape(x.shape[:-1])
        return vals @ dw

    gl = 0.5 * (n - 3) or None
    # |y|^{n-2} d|y| = (2 e^{-t})^{(n-1)/2} u^{(n-3)/2} du / 2
    jac = sphere_area(n - 2) * (2.0 / t_scale) ** d * 0.5
    if math.isfinite(bound):
        return jac * integrate(mean_at, 0.0, bound - base, rel_tol=rel_tol, gl=gl)
    mu = f.decay_mu - 0.5 * (n - 3)
    return jac * integrate_semi_infinite(mean_at, 0.0, mu, rel_tol, gl=gl, first=max(1.0, base))


def forward_field(f: ScalarField, rel_tol: float = DEFAULT_REL_TOL, nodes: int = FIELD_NODES) -> HoroField:
    """``Hf`` as a light-cone field.

    Zonal fields with a smooth profile sample ``(I^delta f0)(s)`` at Chebyshev
    nodes in ``s = cosh t`` up to the support (or negligibility) bound;
    points beyond the sampled range and singular profiles are evaluated
    exactly.  Non-zonal fields evaluate the general path pointwise.
    """
    n = f.n
    if f.is_zero():
        return HoroField.zero(n)
    bound = f.x_bound()
    t_range = (-math.acosh(bound), math.acosh(bound)) if math.isfinite(bound) else None
    if not f.zonal:
        def ev(t, w):
            t, w = np.broadcast_arrays(np.asarray(t, dtype=float)[..., None], np.asarray(w, dtype=float))
            tt, ww = t[..., 0], w
            out = np.empty(tt.shape)
            for idx in np.ndindex(tt.shape):
                out[idx] = forward(f, HoroPoint(float(tt[idx]), ww[idx]), rel_tol)
            return out
        return HoroField(n, ev, False, None, t_range, label=f"H[{f.label}]")
    prof = f.profile
    d = half_dim(n)
    cst = forward_zonal_const(n)
    exact = lambda t: forward_zonal(prof, t, n, rel_tol)
    if prof.left_power or not math.isfinite(bound):
        fn = lambda t: _vector(exact, t)
        return HoroField.from_log_profile(fn, n, t_range, label=f"H[{f.label}]")
    curve = SampledCurve.from_function(lambda s: rl_integral(prof, d, s, rel_tol=rel_tol), 1.0, bound, nodes)
    compact = prof.support_bound is not None

    def fn(t):
        t = np.asarray(t, dtype=float)
        s = np.cosh(t)
        out = np.zeros(t.shape)
        inside = s < bound
        out[inside] = cst * np.exp(-d * t[inside]) * curve(s[inside])
        if not compact and not np.all(inside):
            out[~inside] = exact(t[~inside])
        return out

    return HoroField.from_log_profile(fn, n, t_range, label=f"H[{f.label}]")


def _vector(fn, t):
    t = np.asarray(t, dtype=float)
    return np.asarray(fn(t)) if t.ndim else float(fn(t))


# -- dual transforms -----------------------------------------------------------------


def _log_fn(phi0):
    """``s -> phi0(e^s)`` together with an interior singular point and power."""
    if isinstance(phi0, HoroField):
        return phi0.log_profile, phi0.singular_t, phi0.singular_power
    return (lambda s: phi0(np.exp(s))), None, 0.0


def dual_zonal(phi0, r: float, n: int, shift: float = 0.0, rel_tol: float = DEFAULT_REL_TOL,
               singular_t: float | None = None, singular_power: float | None = None,
               abs_tol: float = 0.0) -> float:
    """Dual transform of a zonal light-cone field at distance ``r`` from the origin.

    ``c (sinh r)^{2-n} int_{-r}^{r} phi0(e^{s+shift}) (cosh r - cosh s)^{(n-3)/2} e^{s delta} ds``;
    ``shift`` gives the shifted dual.  Both endpoint weights and an optional
    interior power singularity of ``phi0`` sit in Jacobi rules.  ``phi0`` is a
    :class:`HoroField` or a callable of ``u = xi_{n+1}``.
    """
    fn, st, sp = _log_fn(phi0)
    if singular_t is not None:
        st = singular_t
    if singular_power is not None:
        sp = singular_power
    r = float(r)
    if r < 0:
        raise PreconditionError("radius must be non-negative")
    if r < 1e-12:
        return float(fn(np.array([shift]))[0])
    d = half_dim(n)
    g = 0.5 * (n - 3)
    c = dual_zonal_const(n)

    def weight(s):
        # (sinh r)^{2-n} [(cosh r - cosh s)/((r-s)(r+s))]^g e^{s delta}, in log-space
        lg = (2 - n) * logsinh(r) + d * s
        if g:
            a, b = 0.5 * (r + s), 0.5 * (r - s)
            lg = lg + g * (math.log(2.0) + _log_sinh_over(a) + _log_sinh_over(b) - math.log(4.0))
        return np.exp(lg)

    lo, hi = -r, r
    core = lambda s: fn(s + shift) * weight(s)
    s0 = None if st is None else st - shift
    gl = g or None
    if s0 is None or not (lo < s0 < hi):
        return c * integrate(core, lo, hi, rel_tol=rel_tol, gl=gl, gr=gl, abs_tol=abs_tol / c)
    tol = dict(rel_tol=rel_tol, abs_tol=0.5 * abs_tol / c)
    # each half carries one endpoint weight; the other factor is smooth there
    core_l = lambda s: core(s) * (r - s) ** g
    core_r = lambda s: core(s) * (r + s) ** g
    if sp:
        sing = lambda s: np.maximum(np.abs(s - s0), 1e-300) ** sp
        left = integrate(lambda s: core_l(s) / sing(s), lo, s0, gl=gl, gr=sp, **tol)
        right = integrate(lambda s: core_r(s) / sing(s), s0, hi, gl=sp, gr=gl, **tol)
    else:
        left = integrate(core_l, lo, s0, gl=gl, **tol)
        right = integrate(core_r, s0, hi, gr=gl, **tol)
    return c * (left + right)


@lru_cache(maxsize=256)
def _shifted_rule(r: float, n: int, width: float = 0.25, m: int = 16):
    """Nodes and weights with ``H*_t phi = sum w_i phi0(e^{s_i + t})`` for a zonal field at radius ``r``."""
    g = 0.5 * (n - 3)
    d = half_dim(n)
    P = max(1, int(math.ceil(2.0 * r / width)))
    edges = np.linspace(-r, r, P + 1)
    xl, wl = roots_legendre(m)
    nodes, weights = [], []
    for k in range(P):
        a, b = edges[k], edges[k + 1]
        jl = g if (g and k == 0) else 0.0
        jr = g if (g and k == P - 1) else 0.0
        if jl or jr:
            x, w = roots_jacobi(m, jr, jl)  # (1-x)^jr (1+x)^jl
        else:
            x, w = xl, wl
        h = 0.5 * (b - a)
        s = a + h * (1.0 + x)
        # the rule carries (1+x)^jl (1-x)^jr; restore the full (r+s)^g (r-s)^g
        w = w * h * ((s + r) * (r - s)) ** g / ((1.0 + x) ** jl * (1.0 - x) ** jr)
        nodes.append(s)
        weights.append(w)
    s = np.concatenate(nodes)
    w = np.concatenate(weights)
    lg = (2 - n) * logsinh(r) + d * s
    if g:
        a, b = 0.5 * (r + s), 0.5 * (r - s)
        lg = lg + g * (-math.log(2.0) + _log_sinh_over(a) + _log_sinh_over(b))
    return s, dual_zonal_const(n) * w * np.exp(lg)


def shifted_dual_zonal(phi: HoroField, r: float, shifts) -> np.ndarray:
    """Shifted dual of a smooth zonal field at radius ``r`` for an array of shifts (fixed composite rule)."""
    shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
    if r < 1e-12:
        return np.asarray(phi.log_profile(shifts), dtype=float)
    s, w = _shifted_rule(round(float(r), 15), phi.n)
    vals = np.asarray(phi.log_profile(shifts[:, None] + s[None, :]), dtype=float)
    return vals @ w


def _log_sinh_over(a):
    """``log(sinh(a)/a)``, accurate near 0."""
    a = np.asarray(a, dtype=float)
    small = a < 1e-6
    safe = np.where(small, 1.0, a)
    return np.where(small, a * a / 6.0, logsinh(safe) - np.log(safe))


def shifted_dual(phi: HoroField, x: HPoint, t: float, *, rel_tol: float = DEFAULT_REL_TOL,
                 general: bool = False, order: int = SPHERE_ORDER, abs_tol: float = 0.0) -> float:
    """``int_{S^{n-1}} e^{(n-1)<x,w>} phi(e^{t + <x,w>} b(w)) d*w``, with ``<x,w> = -log[x, b(w)]``."""
    if x.dim != phi.n:
        raise DimensionMismatch("point and field dimensions differ")
    if phi.is_zero():
        return 0.0
    n = phi.n
    if phi.zonal and not general:
        r = math.acosh(max(x.height, 1.0))
        return dual_zonal(phi, r, n, shift=t, rel_tol=rel_tol, abs_tol=abs_tol)
    sph = sphere_quadrature(n, order)
    tau = -np.log(bracket_b(x.components, sph.nodes))
    vals = np.asarray(phi.evaluator(t + tau, sph.nodes))
    # exponentiate once per node
    return float(np.sum(sph.weights * np.exp((n - 1) * tau) * vals))


def dual(phi: HoroField, x: HPoint, **kw) -> float:
    """Average of ``phi`` over the horospheres through ``x``."""
    return shifted_dual(phi, x, 0.0, **kw)


def dual_field(phi: HoroField, rel_tol: float = DEFAULT_REL_TOL) -> ScalarField:
    """``H* phi`` as a field on H^n; zonal inputs give zonal outputs."""
    n = phi.n
    if phi.zonal:
        def prof(s):
            s = np.atleast_1d(np.asarray(s, dtype=float))
            r = np.arccosh(np.maximum(s, 1.0))
            return np.array([dual_zonal(phi, float(ri), n, rel_tol=rel_tol) for ri in r])
        p = RadialProfile(prof, math.inf, label=f"H*[{phi.label}]")
        return ScalarField(n, lambda x: prof(np.asarray(x)[..., -1]).reshape(np.shape(x)[:-1]), True, p, label=p.label)

    def ev(x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, n + 1)
        out = np.array([dual(phi, HPoint(row), rel_tol=rel_tol) for row in flat])
        return out.reshape(x.shape[:-1])
    return ScalarField(n, ev, label=f"H*[{phi.label}]")


# -- kernel-weighted families ------------------------------------------------------------


@dataclass(frozen=True)
class SemyanistyiKernel:
    """``h(s) = gamma_alpha |s-1|^{alpha-1} s^{-p}`` with ``p = (n+alpha-1)/2`` (variant 1) or ``(n+alpha-3)/2``."""

    alpha: float
    n: int
    variant: int = 1

    def __post_init__(self):
        if self.variant not in (1, 2):
            raise PreconditionError("kernel variant must be 1 or 2")
        gamma_alpha(self.alpha, self.n)  # validates alpha

    @property
    def gamma(self) -> float:
        return gamma_alpha(self.alpha, self.n)

    @property
    def power(self) -> float:
        return 0.5 * (self.n + self.alpha - (1 if self.variant == 1 else 3))

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        return self.gamma * np.abs(s - 1.0) ** (self.alpha - 1.0) * s ** (-self.power)

    def log_regular(self, u):
        """``h(e^u) / |u|^{alpha-1}``, smooth through ``u = 0``."""
        u = np.asarray(u, dtype=float)
        small = np.abs(u) < 1e-8
        q = np.where(small, 1.0, np.expm1(u) / np.where(small, 1.0, u))
        return self.gamma * np.abs(q) ** (self.alpha - 1.0) * np.exp(-self.power * u)


def _split_singular(g, lo, hi, s0, power, rel_tol, abs_tol=0.0):
    """``int_lo^hi g(s) |s-s0|^power ds`` with Jacobi weights at ``s0``."""
    power = power or None
    total = 0.0
    if lo < s0:
        total += integrate(g, lo, min(s0, hi), rel_tol=rel_tol, gr=power if s0 <= hi else None, abs_tol=abs_tol)
    if s0 < hi:
        total += integrate(g, max(s0, lo), hi, rel_tol=rel_tol, gl=power if s0 >= lo else None, abs_tol=abs_tol)
    return total


def semyanistyi_forward(f: ScalarField, xi: HoroPoint, kernel: SemyanistyiKernel,
                        rel_tol: float = DEFAULT_REL_TOL) -> float:
    """``int (H_w f)(t) h(e^{s-t}) e^{(1-n)t} dt`` with ``xi = e^s b(w)``."""
    if kernel.n != f.n:
        raise DimensionMismatch("kernel and field dimensions differ")
    if f.is_zero():
        return 0.0
    n = f.n
    s = float(xi.t)
    bound = f.x_bound()
    if not math.isfinite(bound):
        raise PreconditionError("kernel-weighted transforms need a support or negligibility bound")
    T = math.acosh(bound)
    if f.zonal:
        hf = lambda t: forward_zonal(f.profile, t, n, rel_tol)
    else:
        hf = lambda t: np.array([forward(f, HoroPoint(float(ti), xi.omega), rel_tol) for ti in np.atleast_1d(t)])
    g = lambda t: hf(t) * kernel.log_regular(s - t) * np.exp((1 - n) * t)
    return _split_singular(g, -T, T, s, kernel.alpha - 1.0, rel_tol)


def _shift_range(phi: HoroField, x: HPoint):
    if phi.t_range is None:
        raise PreconditionError("the light-cone field needs a t_range")
    r = math.acosh(max(x.height, 1.0))
    lo, hi = phi.t_range
    return lo - r, hi + r


def cone_reduction(phi: HoroField, x: HPoint, weight, rel_tol: float = DEFAULT_REL_TOL,
                   singular: tuple | None = None, general: bool = False) -> float:
    """``int_{Gamma_+} phi(xi) h([x, xi]) d xi = int (H*_s phi)(x) h(e^s) e^{(n-1)s} ds``.

    ``weight(s)`` is ``h(e^s) e^{(n-1)s}`` (divided by ``|s|^p`` when
    ``singular = ("power", p)``); ``("log",)`` marks a log singularity at 0.
    """
    if phi.is_zero():
        return 0.0
    lo, hi = _shift_range(phi, x)
    scale = max(abs(shifted_dual(phi, x, 0.0, rel_tol=rel_tol, general=general)), 1e-300)
    inner_tol = 1e-14 * scale
    if phi.zonal and not general and phi.singular_t is None:
        r = math.acosh(max(x.height, 1.0))
        sd = lambda s: shifted_dual_zonal(phi, r, s)
    else:
        sd = lambda s: np.array([shifted_dual(phi, x, float(si), rel_tol=rel_tol, general=general,
                                              abs_tol=inner_tol) for si in np.atleast_1d(s)])
    g = lambda s: sd(s) * weight(s)
    outer_tol = 1e-13 * scale * max(float(np.max(np.abs(weight(np.linspace(lo, hi, 9) + 1e-3)))), 1e-300)
    if singular is None:
        return integrate(g, lo, hi, rel_tol=rel_tol, abs_tol=outer_tol)
    if singular[0] == "log":
        w = 0.25 * min(1.0, hi - lo)
        return integrate_log_singular(g, lo, hi, 0.0, window=w, rel_tol=rel_tol, abs_tol=outer_tol)
    return _split_singular(g, lo, hi, 0.0, singular[1], rel_tol, outer_tol)


def semyanistyi_dual(phi: HoroField, x: HPoint, kernel: SemyanistyiKernel,
                     rel_tol: float = DEFAULT_REL_TOL, general: bool = False) -> float:
    """``int (H*_s phi)(x) h(e^s) e^{(n-1)s} ds``."""
    if kernel.n != phi.n:
        raise DimensionMismatch("kernel and field dimensions differ")
    n = phi.n
    w = lambda s: kernel.log_regular(s) * np.exp((n - 1) * np.asarray(s))
    return cone_reduction(phi, x, w, rel_tol, ("power", kernel.alpha - 1.0), general)


def dual_log(phi: HoroField, x: HPoint, rel_tol: float = DEFAULT_REL_TOL, general: bool = False) -> float:
    """Log-kernel dual: ``gamma' int phi log|([x,xi]-1)/[x,xi]^{1/2}| [x,xi]^{-n/2} d xi``."""
    n = phi.n

    def w(s):
        s = np.asarray(s, dtype=float)
        a = np.abs(0.5 * s)
        safe = np.where(a > 0, a, 1.0)
        lg = np.where(a > 0, math.log(2.0) + logsinh(safe), -np.inf)
        return lg * np.exp((0.5 * n - 1.0) * s)

    return gamma_prime(n) * cone_reduction(phi, x, w, rel_tol, ("log",), general)


def fourier_slice_check(f: ScalarField, lam: float, omega, rel_tol: float = DEFAULT_REL_TOL):
    """``(fourier_transform(f), int e^{-t(i lam - delta)} (H_w f)(t) dt)``."""
    omega = np.asarray(omega, dtype=float)
    n = f.n
    if f.is_zero():
        return 0j, 0j
    lhs = fourier_transform(f, lam, omega)
    bound = f.x_bound()
    if not math.isfinite(bound):
        raise PreconditionError("the slice identity is checked for compactly supported fields")
    T = math.acosh(bound)
    d = half_dim(n)
    if f.zonal:
        hf = lambda t: forward_zonal(f.profile, t, n, rel_tol)
    else:
        hf = lambda t: np.array([forward(f, HoroPoint(float(ti), omega), rel_tol) for ti in np.atleast_1d(t)])
    re = integrate(lambda t: hf(t) * np.exp(d * t) * np.cos(lam * t), -T, T, rel_tol=rel_tol, abs_tol=1e-14)
    im = integrate(lambda t: -hf(t) * np.exp(d * t) * np.sin(lam * t), -T, T, rel_tol=rel_tol,
                   abs_tol=1e-12 * max(abs(re), 1e-300))
    return lhs, complex(re, im)


# -- duality relations ----------------------------------------------------------------


def _zonal_only(*objs):
    for o in objs:
        if not o.zonal:
            raise PreconditionError("duality checks are evaluated on zonal inputs")


def _intersect(a, b):
    if a is None:
        return b
    if b is None:
        return a
    lo, hi = max(a[0], b[0]), min(a[1], b[1])
    return (lo, hi) if lo < hi else (0.0, 0.0)


def _hn_integral(f: ScalarField, fn, rel_tol, left_power=0.0, regular=None):
    """``int_{H^n} f(x) w(x_{n+1}) dx`` for a zonal ``f``, with ``fn(s) = f0(s) w(s)``."""
    prof = f.profile
    bound = f.x_bound()
    sb = bound if math.isfinite(bound) else None
    mu = prof.tail_mu
    p = RadialProfile(fn, mu, sb, left_power, regular, label="product")
    return integrate_hn_zonal(p, f.n, rel_tol)


def integrate_hn_zonal(p: RadialProfile, n: int, rel_tol=DEFAULT_REL_TOL) -> float:
    """``sigma_{n-1} int_1^inf p(s) (s^2-1)^{n/2-1} ds``."""
    return sphere_area(n - 1) * radial_integral(p, 0.5 * n - 1.0, rel_tol,
                                                lambda s: (s + 1.0) ** (0.5 * n - 1.0), extra_decay=0.5 * n - 1.0)


def duality_check(f: ScalarField, phi: HoroField, rel_tol: float = DEFAULT_REL_TOL):
    """``(int_{Gamma_+} phi Hf d xi, int_{H^n} H*phi f dx)`` for zonal ``f`` and ``phi``."""
    _zonal_only(f, phi)
    if f.is_zero() or phi.is_zero():
        return 0.0, 0.0
    n = f.n
    hf = forward_field(f, rel_tol)
    prod = HoroField.from_log_profile(lambda t: phi.log_profile(t) * hf.log_profile(t), n,
                                      _intersect(phi.t_range, hf.t_range), "product",
                                      phi.singular_t, phi.singular_power)
    lhs = integrate_gamma(prod, rel_tol)
    f0 = f.profile

    def fn(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        r = np.arccosh(np.maximum(s, 1.0))
        v = f0(s)
        out = np.zeros(s.shape)
        live = v != 0
        out[live] = v[live] * np.array([dual_zonal(phi, float(ri), n, rel_tol=rel_tol) for ri in r[live]])
        return out

    rhs = _hn_integral(f, fn, rel_tol)
    return lhs, rhs


def _weighted_cone(f: ScalarField, log_weight, rel_tol, singular_t=None, singular_power=0.0):
    """``int_{Gamma_+} (Hf)(xi) w(xi_{n+1}) d xi`` with ``log_weight(t) = w(e^t)``."""
    hf = forward_field(f, rel_tol)
    if hf.t_range is None:
        raise PreconditionError("weighted dualities are evaluated for fields with a negligibility bound")
    prod = HoroField.from_log_profile(lambda t: log_weight(t) * hf.log_profile(t), f.n, hf.t_range,
                                      "product", singular_t, singular_power)
    return integrate_gamma(prod, rel_tol)


def duality_unit_order(f: ScalarField, rel_tol: float = DEFAULT_REL_TOL):
    """``(int Hf (xi_{n+1}+1)^{-2 delta} d xi, 2^{-delta} int f (x_{n+1}+1)^{-delta} dx)``."""
    _zonal_only(f)
    d = half_dim(f.n)
    lhs = _weighted_cone(f, lambda t: (np.exp(t) + 1.0) ** (-2.0 * d), rel_tol)
    f0 = f.profile
    rhs = 2.0 ** (-d) * _hn_integral(f, lambda s: f0(s) * (np.asarray(s) + 1.0) ** (-d), rel_tol)
    return lhs, rhs


def duality_power_pair(f: ScalarField, alpha: float, rel_tol: float = DEFAULT_REL_TOL):
    """Cone integrals of ``Hf`` against ``|u-1|^{alpha-1} u^{-(delta+alpha/2)}`` and
    ``|u-1|^{alpha-1} u^{-(delta+alpha/2-1)}``, and their common value
    ``c_alpha int f (x_{n+1}-1)^{(alpha-1)/2} (x_{n+1}+1)^{1/2-delta} dx``.
    """
    _zonal_only(f)
    if not alpha > 0:
        raise PreconditionError("alpha must be positive")
    n = f.n
    d = half_dim(n)
    sing = alpha - 1.0

    def cone(p):
        if abs(sing) < 1e-15:
            return _weighted_cone(f, lambda t: np.exp(-p * t), rel_tol)
        w = lambda t: np.abs(np.expm1(t)) ** sing * np.exp(-p * t)
        return _weighted_cone(f, w, rel_tol, 0.0, sing)

    first = cone(d + 0.5 * alpha)
    second = cone(d + 0.5 * alpha - 1.0)
    f0 = f.profile
    if f0.left_power:
        raise PreconditionError("the power-pair duality is evaluated for regular profiles")
    q = 0.5 * (alpha - 1.0)
    base = lambda s: f0(s) * (np.asarray(s) + 1.0) ** (0.5 - d)
    if abs(q) < 1e-15:
        rhs = _hn_integral(f, base, rel_tol)
    else:
        fn = lambda s: base(s) * np.maximum(np.asarray(s) - 1.0, 0.0) ** q
        rhs = _hn_integral(f, fn, rel_tol, q, base)
    return first, second, c_alpha(alpha, n) * rhs


# -- divergence witness -----------------------------------------------------------------


def divergence_witness(n: int, p: float = 2.0) -> ScalarField:
    """``f(x) = (x_{n+1}^2-1)^{(1-n/2)/p} (x_{n+1}+1)^{-1/p} / log(x_{n+1}+1)``.

    In ``L^p`` for ``p >= 2``, yet its horospherical integrals diverge; the
    declared decay exponent ``(n-1)/p`` ignores the log factor, so the
    forward transform refuses it for ``p >= 2``.
    """
    if p < 1:
        raise PreconditionError("p must be at least 1")
    a, b = (1.0 - 0.5 * n) / p, -1.0 / p

    def fn(s):
        s = np.asarray(s, dtype=float)
        return (s * s - 1.0) ** a * (s + 1.0) ** b / np.log(s + 1.0)

    prof = RadialProfile(fn, (n - 1.0) / p, label=f"witness(p={p:g})")
    return ScalarField.from_profile(prof, n)


def truncated_forward_zonal(f0: RadialProfile, t: float, n: int, upper: float,
                            rel_tol: float = DEFAULT_REL_TOL) -> float:
    """``forward_zonal`` with the fractional integral cut at ``s = upper``, integrated in ``log s``."""
    d = half_dim(n)
    c = math.cosh(t)
    if upper <= c:
        return 0.0
    u0 = math.log(c)

    def g(u):
        u = np.asarray(u, dtype=float)
        s = np.exp(u)
        gap = np.maximum(u - u0, 1e-300)
        return f0(s) * ((s - c) / gap) ** (d - 1.0) * s
    val = integrate(g, u0, math.log(upper), rel_tol=rel_tol, gl=(d - 1.0) or None)
    return forward_zonal_const(n) * math.exp(-d * t) * val / math.gamma(d)
