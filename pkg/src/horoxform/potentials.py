"""Potentials on H^n, the operator B, and radial Beltrami-Laplace polynomials."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import half_dim, zeta, zeta_prime
from .errors import PreconditionError
from .fields import RadialProfile, ScalarField, mean_integral, mean_upper, spherical_mean
from .lorentz import HPoint, isometry_to
from .numerics import SampledCurve, integrate_log_singular, sphere_quadrature
from .numerics.quadrature import DEFAULT_REL_TOL
from .constants import sphere_area

BL_NODES = 64
BL_NODES_HIGH = 96


def q_alpha_profile(n: int, alpha: float) -> RadialProfile:
    """Kernel ``q_alpha(s) = zeta (s-1)^{(alpha-n)/2} (s+1)^{1-n/2}``."""
    z = zeta(n, alpha)
    p = 0.5 * (alpha - n)
    reg = lambda s: z * (np.asarray(s, dtype=float) + 1.0) ** (1.0 - 0.5 * n)
    fn = lambda s: reg(s) * (np.asarray(s, dtype=float) - 1.0) ** p
    return RadialProfile(fn, n - 1.0 - 0.5 * alpha, None, p, reg, label=f"q({alpha})")


def _tail(f: ScalarField, power: float):
    return None if not math.isfinite(f.decay_mu) else f.decay_mu - power


def q_potential(f: ScalarField, alpha: float, x: HPoint, rel_tol: float = DEFAULT_REL_TOL, **kw) -> float:
    """``Q^alpha f(x) = zeta sigma int_1^inf M_x f(s) (s-1)^{alpha/2-1} ds``.

    The powers of ``s +- 1`` in the kernel and in the measure
    ``(s^2-1)^{(n-2)/2} ds`` collapse to the single weight ``(s-1)^{alpha/2-1}``.
    """
    if not alpha > 0:
        raise PreconditionError("potential order must be positive")
    z = zeta(f.n, alpha)
    if f.is_zero():
        return 0.0
    p = 0.5 * alpha - 1.0
    return z * mean_integral(f, x, p, None, rel_tol, tail_mu=_tail(f, p), **kw)


def _log_mean_integral(f: ScalarField, x: HPoint, rel_tol, with_log: bool):
    n = f.n
    hi = mean_upper(f, x)
    if not math.isfinite(hi):
        raise PreconditionError("log potentials are evaluated for compactly supported fields")
    p = 0.5 * n - 1.0
    m = lambda s: spherical_mean(f, x, np.asarray(s, dtype=float))
    if with_log:
        def g(s):
            s = np.asarray(s, dtype=float)
            u = np.maximum(s - 1.0, 1e-300)
            return m(s) * np.log(u) * u ** p
        val = integrate_log_singular(g, 1.0, hi, 1.0, window=min(0.25, 0.5 * (hi - 1.0)), rel_tol=rel_tol)
    else:
        from .numerics import integrate
        val = integrate(m, 1.0, hi, rel_tol=rel_tol, gl=p or None)
    return sphere_area(n - 1) * val


def q_potential_log(f: ScalarField, x: HPoint, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """``zeta' int f(y) log([x,y]-1) ([x,y]+1)^{1-n/2} dy``."""
    if f.is_zero():
        return 0.0
    return zeta_prime(f.n) * _log_mean_integral(f, x, rel_tol, True)


def b_operator(f: ScalarField, x: HPoint, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """``Bf(x) = zeta' int f(y) ([x,y]+1)^{1-n/2} dy``."""
    if f.is_zero():
        return 0.0
    return zeta_prime(f.n) * _log_mean_integral(f, x, rel_tol, False)


# -- radial Beltrami-Laplace operator ---------------------------------------------------


def even_curve(fn, R: float, nodes: int = BL_NODES) -> SampledCurve:
    """Chebyshev curve on ``[-R, R]`` of the even extension ``F(-r) = F(r)``.

    ``fn`` maps an array of radii ``r >= 0`` to values; each distinct ``|r|``
    is evaluated once.
    """
    from .numerics import cgl_nodes
    g = cgl_nodes(nodes, -R, R)
    half = np.abs(g)
    key = np.round(half, 14)
    uniq, inv = np.unique(key, return_inverse=True)
    vals = np.asarray(fn(uniq), dtype=float)[inv]
    return SampledCurve(g, vals, "chebyshev")


def zonal_curve(g: ScalarField, R: float, nodes: int = BL_NODES) -> SampledCurve:
    if not g.zonal:
        raise PreconditionError("radial operators act on zonal fields only")
    return even_curve(lambda r: g.profile(np.cosh(r)), R, nodes)


def _laplacian_values(c: SampledCurve, r, n: int):
    r = np.asarray(r, dtype=float)
    d1 = c.chebyshev().deriv(1)
    d2 = c.chebyshev().deriv(2)
    small = np.abs(r) < 1e-10
    safe = np.where(small, 1.0, r)
    return np.where(small, n * d2(r), d2(r) + (n - 1) * d1(r) / np.tanh(safe))


def radial_laplacian(g0: SampledCurve, r, n: int):
    """``g'' + (n-1) coth(r) g'`` of an even radial curve; ``n g''(0)`` at the origin."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(np.abs(r_arr) > max(abs(g0.a), abs(g0.b)) + 1e-12):
        raise PreconditionError("radius outside the sampled range")
    out = _laplacian_values(g0, r_arr, n)
    return float(out) if out.ndim == 0 else out


def laplacian_curve(c: SampledCurve, n: int) -> SampledCurve:
    return SampledCurve(c.grid, _laplacian_values(c, c.grid, n), "chebyshev")


@dataclass(frozen=True)
class DAlphaOp:
    """``D_alpha g = -Delta g - alpha (2n-2-alpha)/4 g``."""

    alpha: float
    n: int

    @property
    def shift(self) -> float:
        return self.alpha * (2 * self.n - 2 - self.alpha) / 4.0

    def eigenvalue(self, lam: float) -> float:
        """Multiplier on the spherical function ``Phi_lam``."""
        return lam * lam + half_dim(self.n) ** 2 - self.shift

    def on_curve(self, c: SampledCurve) -> SampledCurve:
        lap = laplacian_curve(c, self.n)
        return SampledCurve(c.grid, -lap.values - self.shift * c.values, "chebyshev")


@dataclass(frozen=True)
class BLPolynomial:
    """``P_l(Delta) = D_2 D_4 ... D_{2l}``."""

    ell: int
    n: int
    factors: tuple = field(init=False)

    def __post_init__(self):
        if self.ell < 1:
            raise PreconditionError("polynomial degree must be at least 1")
        object.__setattr__(self, "factors", tuple(DAlphaOp(2.0 * i, self.n) for i in range(1, self.ell + 1)))

    def eigenvalue(self, lam: float) -> float:
        return float(np.prod([op.eigenvalue(lam) for op in self.factors]))

    def on_curve(self, c: SampledCurve) -> SampledCurve:
        for op in reversed(self.factors):
            c = op.on_curve(c)
        return c


def _curve_field(c: SampledCurve, n: int, label: str) -> ScalarField:
    R = c.b

    def prof(s):
        s = np.asarray(s, dtype=float)
        r = np.arccosh(np.maximum(s, 1.0))
        if np.any(r > R + 1e-12):
            raise PreconditionError("evaluation outside the sampled radius")
        return c(r)

    p = RadialProfile(prof, math.inf, label=label)
    return ScalarField(n, lambda x: prof(np.asarray(x)[..., -1]), True, p, label=label)


def _as_curve(g, R, nodes):
    if isinstance(g, SampledCurve):
        return g
    return zonal_curve(g, R, nodes)


def apply_d_alpha(op: DAlphaOp, g, R: float = 3.0, nodes: int = BL_NODES):
    """``D_alpha g`` of a zonal field (or an even radial curve), as the same kind of object."""
    c = op.on_curve(_as_curve(g, R, nodes))
    return c if isinstance(g, SampledCurve) else _curve_field(c, op.n, f"D{op.alpha:g}")


def apply_bl_polynomial(p: BLPolynomial, g, R: float = 3.0, nodes: int | None = None):
    """``P_l(Delta) g`` applied factor by factor."""
    if nodes is None:
        nodes = BL_NODES_HIGH if p.ell >= 2 else BL_NODES
    c = p.on_curve(_as_curve(g, R, nodes))
    return c if isinstance(g, SampledCurve) else _curve_field(c, p.n, f"P{p.ell}")
