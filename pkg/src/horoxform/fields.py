"""Functions on H^n and on the light cone, invariant integrals, spherical means."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import roots_jacobi

from .constants import sphere_area
from .errors import DimensionMismatch, InvariantBreach, PreconditionError
from .lorentz import HPoint, HoroPoint, bracket_b, horo_to_array, isometry_to, minkowski
from .numerics import SampledCurve, integrate, integrate_semi_infinite, sphere_quadrature
from .numerics.quadrature import DEFAULT_REL_TOL

MEAN_ORDER = 64
SPHERE_ORDER = 24
NEGLIGIBLE = 1e-18


# -- radial profiles -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """A function ``f0`` on ``[1, inf)`` (or ``(0, inf)`` for light-cone profiles).

    ``left_power = p`` declares ``f0(s) = (s-1)^p * regular(s)`` with a smooth
    ``regular``; integrators then put the power into a Jacobi weight.
    ``tail_mu`` is the decay exponent (``inf`` for faster than any power),
    ``support_bound`` the point past which ``f0`` vanishes.
    """

    func: object
    tail_mu: float = math.inf
    support_bound: float | None = None
    left_power: float = 0.0
    regular: object = None
    label: str = "profile"
    curve: SampledCurve | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.func is None and self.curve is None:
            raise PreconditionError("profile needs a closed form or samples")
        if self.support_bound is not None and self.support_bound <= 1.0:
            raise PreconditionError("support bound must exceed 1")
        if self.left_power and self.regular is None:
            raise PreconditionError("a singular profile must supply its regular part")

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if self.curve is not None:
            out = self._sampled(s)
        else:
            out = np.asarray(self.func(s))
            if not np.iscomplexobj(out):
                out = out.astype(float)
        if self.support_bound is not None:
            out = np.where(s < self.support_bound, out, 0.0)
        return out

    def _sampled(self, s):
        c = self.curve
        out = np.zeros(s.shape)
        inside = s <= c.b
        out[inside] = c(np.maximum(s[inside], c.a))
        outside = ~inside
        if np.any(outside):
            v = float(c.values[-1])
            out[outside] = v * (s[outside] / c.b) ** (-self.tail_mu) if math.isfinite(self.tail_mu) else 0.0
        return out

    def reg(self, s):
        """``f0(s) / (s-1)^left_power``."""
        if not self.left_power:
            return self(s)
        s = np.asarray(s, dtype=float)
        out = np.asarray(self.regular(s), dtype=float)
        if self.support_bound is not None:
            out = np.where(s < self.support_bound, out, 0.0)
        return out

    @property
    def compact(self) -> bool:
        return self.support_bound is not None

    @classmethod
    def sampled(cls, grid, values, tail_mu, support_bound=None, label="sampled"):
        grid = np.asarray(grid, dtype=float)
        if grid[0] != 1.0:
            raise PreconditionError("sampled profiles must start at s = 1")
        curve = SampledCurve(grid, np.asarray(values, dtype=float), "spline")
        return cls(None, float(tail_mu), support_bound, label=label, curve=curve)

    @classmethod
    def from_csv(cls, path):
        path = Path(path)
        data = np.genfromtxt(path, delimiter=",", names=True)
        if data.dtype.names is None or tuple(data.dtype.names[:2]) != ("s", "value"):
            raise PreconditionError(f"{path}: expected a header 's,value'")
        side = path.with_suffix(".json")
        if not side.exists():
            raise PreconditionError(f"{path}: missing JSON sidecar {side.name}")
        meta = json.loads(side.read_text())
        if "tail_mu" not in meta:
            raise PreconditionError(f"{side}: 'tail_mu' is required")
        return cls.sampled(data["s"], data["value"], meta["tail_mu"], meta.get("support_bound"), label=path.stem)

    def to_csv(self, path, grid):
        path = Path(path)
        grid = np.asarray(grid, dtype=float)
        rows = np.column_stack([grid, self(grid)])
        np.savetxt(path, rows, delimiter=",", header="s,value", comments="", fmt="%.17g")
        path.with_suffix(".json").write_text(json.dumps(
            {"tail_mu": self.tail_mu if math.isfinite(self.tail_mu) else 1e300,
             "support_bound": self.support_bound}))

    def effective_bound(self, rel=NEGLIGIBLE) -> float:
        """Point past which the profile is negligible (exact support if declared)."""
        if self.support_bound is not None:
            return float(self.support_bound)
        if math.isfinite(self.tail_mu):
            return math.inf
        probe = 1.0 + 2.0 ** np.arange(-4, 12)
        vals = np.abs(self(probe))
        peak = max(float(np.max(vals)), float(abs(self(np.array([1.0 + 1e-9]))[0])))
        if peak == 0.0:
            return 2.0
        small = np.nonzero(vals <= rel * peak)[0]
        if small.size == 0:
            return math.inf
        return float(probe[small[0]])


def power_profile(beta: float) -> RadialProfile:
    return RadialProfile(lambda s: s ** (-beta), float(beta), label=f"power({beta})")


def exp_bump(a: float = 3.0) -> RadialProfile:
    return RadialProfile(lambda s: np.exp(-a * (s - 1.0)), math.inf, label=f"exp_bump({a})")


def compact_bump(w: float = 1.0, k: int = 4) -> RadialProfile:
    """``(1 - (s-1)/w)_+^k``."""
    return RadialProfile(lambda s: np.clip(1.0 - (s - 1.0) / w, 0.0, None) ** k, math.inf, 1.0 + w,
                         label=f"compact_bump({w},{k})")


def smooth_bump(w: float = 1.0) -> RadialProfile:
    """C^infinity bump ``exp(1 - 1/(1-u^2))`` with ``u = (s-1)/w`` on ``[0, 1)``."""
    def f(s):
        u = (np.asarray(s, dtype=float) - 1.0) / w
        out = np.zeros_like(u)
        m = u < 1.0
        out[m] = np.exp(1.0 - 1.0 / (1.0 - u[m] ** 2))
        return out
    return RadialProfile(f, math.inf, 1.0 + w, label=f"smooth_bump({w})")


# -- fields on H^n -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ScalarField:
    """A function on H^n evaluated on arrays of shape ``(..., n+1)``.

    ``support_bound`` bounds ``x_{n+1}`` on the support; ``decay_mu`` is the
    exponent in ``f = O(x_{n+1}^-mu)``.
    """

    n: int
    evaluator: object
    zonal: bool = False
    profile: RadialProfile | None = None
    decay_mu: float = math.inf
    support_bound: float | None = None
    center: np.ndarray | None = None  # for profiles of [x, a]
    label: str = "field"

    def __post_init__(self):
        if self.n < 2:
            raise DimensionMismatch("n must be at least 2")
        if self.zonal:
            if self.profile is None:
                raise PreconditionError("zonal fields need a radial profile")
            rng = np.random.default_rng(12345)
            pts = _random_points(rng, self.n, 3)
            a = np.asarray(self.evaluator(pts))
            b = self.profile(pts[:, -1])
            if not np.allclose(a, b, rtol=1e-12, atol=1e-300):
                raise InvariantBreach("zonal field disagrees with its radial profile")

    def __call__(self, x):
        if isinstance(x, HPoint):
            if x.dim != self.n:
                raise DimensionMismatch("point dimension differs from field dimension")
            return float(np.asarray(self.evaluator(x.components[None, :]))[0])
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n + 1:
            raise DimensionMismatch("last axis must have length n+1")
        return np.asarray(self.evaluator(x))

    @classmethod
    def from_profile(cls, profile: RadialProfile, n: int) -> "ScalarField":
        return cls(n, lambda x: profile(np.asarray(x)[..., -1]), True, profile,
                   profile.tail_mu, profile.support_bound, label=profile.label)

    @classmethod
    def shifted(cls, profile: RadialProfile, center: HPoint) -> "ScalarField":
        """``f(x) = f0([x, a])``: a zonal profile recentred at ``a``."""
        a = center.components.copy()
        n = center.dim
        bound = None
        if profile.support_bound is not None:
            bound = math.cosh(math.acosh(profile.support_bound) + math.acosh(a[-1]))
        return cls(n, lambda x: profile(np.maximum(minkowski(x, a), 1.0)), False, profile,
                   profile.tail_mu, bound, a, label=f"{profile.label}@shifted")

    @classmethod
    def zero(cls, n: int) -> "ScalarField":
        prof = RadialProfile(lambda s: np.zeros_like(np.asarray(s, dtype=float)), math.inf, 2.0, label="zero")
        return cls.from_profile(prof, n)

    def is_zero(self) -> bool:
        return self.profile is not None and self.profile.label == "zero"

    def x_bound(self, rel=NEGLIGIBLE) -> float:
        """Bound on ``x_{n+1}`` past which the field is negligible."""
        if self.support_bound is not None:
            return float(self.support_bound)
        if self.profile is None:
            return math.inf
        b = self.profile.effective_bound(rel)
        if self.center is not None and math.isfinite(b):
            return math.cosh(math.acosh(b) + math.acosh(self.center[-1]))
        return b


def _random_points(rng, n, k):
    r = rng.uniform(0.0, 2.0, size=k)
    th = rng.normal(size=(k, n))
    th /= np.linalg.norm(th, axis=1, keepdims=True)
    return np.concatenate([th * np.sinh(r)[:, None], np.cosh(r)[:, None]], axis=1)


# -- fields on the light cone ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HoroField:
    """A function ``phi(e^t b(omega))`` on the light cone.

    ``evaluator(t, omega)`` broadcasts ``t`` of shape ``(...)`` against
    ``omega`` of shape ``(..., n)``.  Zonal fields carry ``log_profile``,
    ``t -> phi0(e^t)``.  ``t_range`` bounds the region where the field is
    non-negligible, used when integrating over the cone.
    """

    n: int
    evaluator: object
    zonal: bool = False
    log_profile: object = None
    t_range: tuple | None = None
    label: str = "horofield"
    singular_t: float | None = None  # log-radius of an interior kink or singularity
    singular_power: float = 0.0

    def __post_init__(self):
        if self.zonal and self.log_profile is None:
            raise PreconditionError("zonal light-cone fields need a profile")

    def __call__(self, xi):
        if isinstance(xi, HoroPoint):
            if xi.dim != self.n:
                raise DimensionMismatch("horosphere dimension differs from field dimension")
            return float(np.asarray(self.evaluator(np.array(xi.t), xi.omega)))
        xi = np.asarray(xi, dtype=float)
        t = np.log(xi[..., -1])
        w = xi[..., :-1] / xi[..., -1:]
        return np.asarray(self.evaluator(t, w))

    def profile(self, u):
        """``phi0(u)`` for ``u = xi_{n+1} > 0``."""
        return self.log_profile(np.log(np.asarray(u, dtype=float)))

    @classmethod
    def from_log_profile(cls, fn, n, t_range=None, label="zonal", singular_t=None, singular_power=0.0):
        return cls(n, lambda t, w: fn(np.asarray(t, dtype=float)), True, fn, t_range, label,
                   singular_t, singular_power)

    @classmethod
    def from_profile(cls, fn, n, t_range=None, label="zonal", **kw):
        """Zonal field from ``u -> phi0(u)``."""
        return cls.from_log_profile(lambda t: fn(np.exp(t)), n, t_range, label, **kw)

    @classmethod
    def zero(cls, n):
        return cls.from_log_profile(lambda t: np.zeros_like(np.asarray(t, dtype=float)), n, (-1.0, 1.0), "zero")

    def is_zero(self) -> bool:
        return self.label == "zero"


# -- invariant integrals ------------------------------------------------------------


def integrate_hn(f: ScalarField, rel_tol: float = DEFAULT_REL_TOL, *, general: bool = False,
                 order: int = 48) -> float:
    """Integral over H^n with the invariant measure ``sinh^{n-1} r dr dtheta``."""
    n = f.n
    if f.is_zero():
        return 0.0
    if f.zonal and not general:
        prof = f.profile
        return sphere_area(n - 1) * radial_integral(prof, 0.5 * n - 1.0, rel_tol,
                                                    lambda s: (s + 1.0) ** (0.5 * n - 1.0), extra_decay=0.5 * n - 1.0)
    bound = f.x_bound()
    if not math.isfinite(bound):
        if f.decay_mu <= n - 1:
            raise PreconditionError(f"decay exponent {f.decay_mu} does not make the integral converge")
        raise PreconditionError("the horospherical-coordinate path needs a support or a negligibility bound")
    return _integrate_hn_horo(f, bound, rel_tol, order)


def radial_integral(prof: RadialProfile, power: float, rel_tol, weight=None, extra_decay=0.0, upper=None):
    """``int_1^inf prof(s) (s-1)^power weight(s) ds`` with endpoint Jacobi weights."""
    p = power + prof.left_power
    if p <= -1:
        raise PreconditionError("non-integrable singularity at s = 1")
    w = weight if weight is not None else (lambda s: 1.0)

    def g(s):
        return prof.reg(s) * w(s)

    hi = prof.effective_bound() if upper is None else upper
    if math.isfinite(hi):
        return integrate(g, 1.0, hi, rel_tol=rel_tol, gl=p or None)
    mu = prof.tail_mu - extra_decay - power
    if mu <= 1:
        raise PreconditionError(f"declared decay exponent {prof.tail_mu} is too small for convergence")
    return integrate_semi_infinite(g, 1.0, mu, rel_tol, gl=p or None)


def _integrate_hn_horo(f, bound, rel_tol, order):
    """``int int f(n_v a_t x0) e^{(1-n)t} dt dv`` over the box where ``x_{n+1} <= bound``."""
    n = f.n
    T = math.acosh(bound)
    sph = sphere_quadrature(n - 1, order // 2) if n >= 3 else None
    xr, wr = roots_jacobi(order, 0.0, float(n - 2))  # weight rho^{n-2} on [0, R]
    ur = 0.5 * (1.0 + xr)
    area = sphere_area(n - 2)

    def inner(t):
        t = np.atleast_1d(t)
        R = np.sqrt(np.maximum(2.0 * np.exp(t) * (bound - np.cosh(t)), 0.0))
        rho = R[:, None] * ur[None, :]
        wts = wr[None, :] * (0.5 * R[:, None]) ** (n - 1)
        if n == 2:
            dirs = np.array([[1.0], [-1.0]])
            dw = np.array([0.5, 0.5])
        else:
            dirs, dw = sph.nodes, sph.weights
        v = rho[:, :, None, None] * dirs[None, None, :, :]
        x = horo_to_array(v, t[:, None, None])
        vals = np.asarray(f.evaluator(x.reshape(-1, n + 1))).reshape(x.shape[:-1])
        tot = np.einsum("tij,j,ti->t", vals, dw, wts, optimize=True)
        return area * tot * np.exp((1 - n) * t)

    return integrate(inner, -T, T, rel_tol=rel_tol)


def integrate_gamma(phi: HoroField, rel_tol: float = DEFAULT_REL_TOL, *, general: bool = False,
                    order: int = SPHERE_ORDER) -> float:
    """``int_{Gamma_+} phi d xi = int int phi(e^t b(w)) e^{(n-1)t} dt d*w``."""
    if phi.is_zero():
        return 0.0
    if phi.t_range is None:
        raise PreconditionError("light-cone integration needs the field's t_range")
    n = phi.n
    lo, hi = phi.t_range
    breaks = () if phi.singular_t is None else (phi.singular_t,)
    if phi.zonal and not general:
        g = lambda t: phi.log_profile(t) * np.exp((n - 1) * t)
        return _integrate_with_interior(g, lo, hi, phi.singular_t, phi.singular_power, rel_tol)
    sph = sphere_quadrature(n, order)

    def g(t):
        t = np.atleast_1d(t)
        vals = np.asarray(phi.evaluator(t[:, None], sph.nodes[None, :, :]))
        vals = np.broadcast_to(vals, (t.size, sph.nodes.shape[0]))
        return (vals @ sph.weights) * np.exp((n - 1) * t)

    return _integrate_with_interior(g, lo, hi, phi.singular_t, phi.singular_power, rel_tol)


def _integrate_with_interior(g, lo, hi, s0, power, rel_tol):
    """Integrate ``g`` over ``[lo, hi]`` with an optional ``|t - s0|^power`` singularity."""
    if s0 is None or not (lo < s0 < hi):
        return integrate(g, lo, hi, rel_tol=rel_tol)
    if not power:
        return integrate(g, lo, s0, rel_tol=rel_tol) + integrate(g, s0, hi, rel_tol=rel_tol)
    h = lambda t: g(t) / np.abs(t - s0) ** power
    return (integrate(h, lo, s0, rel_tol=rel_tol, gr=power)
            + integrate(h, s0, hi, rel_tol=rel_tol, gl=power))


# -- spherical means ------------------------------------------------------------------


def _mean_normalizer(n):
    return math.sqrt(math.pi) * math.gamma(0.5 * (n - 1)) / math.gamma(0.5 * n)


def zonal_mean(prof: RadialProfile, n: int, height: float, s, order: int = MEAN_ORDER):
    """Spherical mean of ``f0(y_{n+1})`` about a point with ``x_{n+1} = height``, vectorized in ``s``.

    ``(1/Z) int_{-1}^{1} f0(A + B z) (1-z^2)^{(n-3)/2} dz`` with
    ``A = height s`` and ``B = sqrt(height^2-1) sqrt(s^2-1)``; the range
    is clipped where ``A + B z`` leaves the support.  Heights are formed as
    ``C + B w`` with ``w = 1 + z`` and ``C = A - B = (height^2 + s^2 - 1)/(A + B)``,
    which stays accurate for far centres where ``A`` and ``B`` nearly cancel.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s < 1.0 - 1e-12):
        raise PreconditionError("spherical means need s >= 1")
    s = np.maximum(s, 1.0)
    g = 0.5 * (n - 3)
    A = height * s
    B = math.sqrt(max(height * height - 1.0, 0.0)) * np.sqrt((s - 1.0) * (s + 1.0))
    C = (height * height + s * s - 1.0) / (A + B)
    xf, wf = roots_jacobi(order, g, g)
    wf = wf / wf.sum()
    out = np.empty_like(s)
    bound = prof.effective_bound()
    cut = np.where(B > 0, (bound - C) / np.where(B > 0, B, 1.0), np.inf)  # in w
    full = cut >= 2.0
    if np.any(full):
        y = C[full, None] + B[full, None] * (1.0 + xf[None, :])
        out[full] = prof(y) @ wf
    part = ~full
    if np.any(part):
        xh, wh = roots_jacobi(order, 0.0, g)
        wc = cut[part]
        ok = wc > 0.0
        res = np.zeros(wc.shape)
        if np.any(ok):
            half = 0.5 * wc[ok]
            w = half[:, None] * (1.0 + xh[None, :])
            y = C[part][ok, None] + B[part][ok, None] * w
            fac = (2.0 - w) ** g if g else 1.0
            tot = (prof(y) * fac) @ wh * half ** (1.0 + g)
            # normalize by the full-weight integral over [-1, 1]
            res[ok] = tot / (2.0 ** (2 * g + 1) * math.gamma(g + 1) ** 2 / math.gamma(2 * g + 2))
        out[part] = res
    return out


def spherical_mean(f: ScalarField, x: HPoint, s, *, order: int = SPHERE_ORDER, general: bool = False):
    """Mean of ``f`` over ``{y : [x, y] = s}``; scalar or array ``s``."""
    scalar = np.ndim(s) == 0
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s_arr < 1.0 - 1e-12):
        raise PreconditionError("spherical means need s >= 1")
    if x.dim != f.n:
        raise DimensionMismatch("point and field dimensions differ")
    if f.zonal and not general:
        out = zonal_mean(f.profile, f.n, x.height, s_arr)
    else:
        out = general_mean(f, isometry_to(x), s_arr, order)
    return float(out[0]) if scalar else out


def general_mean(f: ScalarField, g: np.ndarray, s, order: int = SPHERE_ORDER):
    """Spherical mean through an isometry ``g`` with ``g e_{n+1} = x``."""
    n = f.n
    s = np.maximum(np.atleast_1d(s), 1.0)
    sph = sphere_quadrature(n, order)
    rad = np.sqrt(s * s - 1.0)
    pts = np.empty((s.size, sph.nodes.shape[0], n + 1))
    pts[..., :-1] = rad[:, None, None] * sph.nodes[None, :, :]
    pts[..., -1] = s[:, None]
    y = pts @ g.T
    vals = np.asarray(f.evaluator(y.reshape(-1, n + 1))).reshape(s.size, -1)
    return vals @ sph.weights


def mean_upper(f: ScalarField, x: HPoint) -> float:
    """``s`` beyond which the spherical mean about ``x`` is negligible."""
    b = f.x_bound()
    if not math.isfinite(b):
        return math.inf
    return math.cosh(math.acosh(b) + math.acosh(max(x.height, 1.0)))


def mean_integral(f: ScalarField, x: HPoint, power: float, weight=None, rel_tol=DEFAULT_REL_TOL,
                  tail_mu=None, general=False, order=SPHERE_ORDER):
    """``sigma_{n-1} int_1^inf w(s) (s-1)^power (M_x f)(s) ds``."""
    n = f.n
    w = weight if weight is not None else (lambda s: 1.0)
    if f.zonal and not general:
        m = lambda s: zonal_mean(f.profile, n, x.height, s)
    else:
        g = isometry_to(x)
        m = lambda s: general_mean(f, g, s, order)
    h = lambda s: w(s) * m(s)
    hi = mean_upper(f, x)
    if math.isfinite(hi):
        val = integrate(h, 1.0, hi, rel_tol=rel_tol, gl=power or None)
    else:
        if tail_mu is None or tail_mu <= 1:
            raise PreconditionError("integral over spherical means does not converge for the declared decay")
        val = integrate_semi_infinite(h, 1.0, tail_mu, rel_tol, gl=power or None)
    return sphere_area(n - 1) * val


def hyperbolic_convolution(k: RadialProfile, f: ScalarField, x: HPoint, rel_tol=DEFAULT_REL_TOL, **kw) -> float:
    """``(k * f)(x) = int k([x, y]) f(y) dy`` through spherical means."""
    n = f.n
    p = 0.5 * n - 1.0 + k.left_power
    if p <= -1:
        raise PreconditionError("kernel singularity at s = 1 is not integrable")
    weight = lambda s: k.reg(s) * (s + 1.0) ** (0.5 * n - 1.0)
    mu = None
    if math.isfinite(f.decay_mu) or math.isfinite(k.tail_mu):
        mu = k.tail_mu + f.decay_mu - (n - 2.0)
    return mean_integral(f, x, p, weight, rel_tol, tail_mu=mu, **kw)


def darboux_check(prof: RadialProfile, n: int, rho: float, r: float, step: float = 1e-3):
    """Radial Laplacians of ``G(rho, r) = (M_x f)(cosh r)`` in the base-point radius
    ``rho`` and in ``r``, by central differences, for a zonal ``f`` and ``x_{n+1} = cosh rho``.
    """
    if rho <= step or r <= step:
        raise PreconditionError("both radii must exceed the difference step")

    def G(a, b):
        return float(zonal_mean(prof, n, math.cosh(a), np.array([math.cosh(b)]))[0])

    def lap(fn, a):
        f0, fp, fm = fn(a), fn(a + step), fn(a - step)
        return (fp - 2.0 * f0 + fm) / step ** 2 + (n - 1) / math.tanh(a) * (fp - fm) / (2.0 * step)

    return lap(lambda a: G(a, r), rho), lap(lambda b: G(rho, b), r)
