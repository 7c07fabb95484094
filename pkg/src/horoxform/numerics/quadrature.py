"""Gauss rules and adaptive panel quadrature.

The adaptive driver works on vectorized integrands: ``f`` receives a 1-d
array of abscissae and returns an array of the same length.  Each panel is
integrated with an ``m``-point and a ``2m``-point rule of the same family;
the difference is the panel error estimate.  Panels that touch an endpoint
carrying a power weight ``(s-a)^gl`` or ``(b-s)^gr`` use Gauss-Jacobi
rules so the singularity is integrated exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from ..errors import NumericalFailure, PreconditionError

DEFAULT_REL_TOL = 1e-10
DEFAULT_WINDOW = 0.1


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights on ``interval``; ``gamma`` is the left weight exponent."""

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple = (-1.0, 1.0)
    gamma: float | None = None

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape:
            raise PreconditionError("nodes and weights differ in length")

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))

    def __len__(self):
        return self.nodes.size


def gauss_legendre(m: int) -> QuadratureRule:
    if m < 1:
        raise PreconditionError("rule size must be at least 1")
    x, w = _legendre(int(m))
    return QuadratureRule(x, w, (-1.0, 1.0))


def gauss_jacobi_left(m: int, gamma: float) -> QuadratureRule:
    """Rule for ``int_0^1 u^gamma p(u) du``."""
    if m < 1:
        raise PreconditionError("rule size must be at least 1")
    if gamma <= -1:
        raise PreconditionError("weight exponent must exceed -1")
    x, w = _jacobi(int(m), 0.0, float(gamma))
    u = 0.5 * (1.0 + x)
    return QuadratureRule(u, w * 2.0 ** (-gamma - 1.0), (0.0, 1.0), float(gamma))


@lru_cache(maxsize=None)
def _legendre(m):
    x, w = roots_legendre(m)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def _jacobi(m, alpha, beta):
    # weight (1-x)^alpha (1+x)^beta on [-1, 1]
    if alpha == 0.0 and beta == 0.0:
        return _legendre(m)
    x, w = roots_jacobi(m, alpha, beta)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _key(p):
    return 0.0 if p is None else round(float(p), 14)


def panel_rule(p, q, m, gl=None, gr=None):
    """Nodes/weights on [p, q] for weight ``(s-p)^gl (q-s)^gr``."""
    a, b = _key(gr), _key(gl)
    x, w = _jacobi(m, a, b)
    h = 0.5 * (q - p)
    return p + h * (1.0 + x), w * h ** (1.0 + a + b)


@dataclass
class _Panel:
    p: float
    q: float
    sl: bool  # left end carries the singular weight
    sr: bool
    value: float = 0.0
    error: float = 0.0


class Integrator:
    """Adaptive Gauss panel integrator.

    ``gl`` / ``gr`` are optional endpoint exponents: the integrand is
    ``f(s) (s-a)^gl (b-s)^gr``.
    """

    def __init__(self, m: int = 10, max_panels: int = 4000):
        self.m = int(m)
        self.max_panels = int(max_panels)

    def _weights(self, s, a, b, gl, gr, sl, sr):
        w = np.ones_like(s)
        if gl and not sl:
            w = w * (s - a) ** gl
        if gr and not sr:
            w = w * (b - s) ** gr
        return w

    def _evaluate(self, f, panels, a, b, gl, gr):
        chunks = []
        for pn in panels:
            pl = gl if pn.sl else None
            pr = gr if pn.sr else None
            x1, w1 = panel_rule(pn.p, pn.q, self.m, pl, pr)
            x2, w2 = panel_rule(pn.p, pn.q, 2 * self.m, pl, pr)
            chunks.append((x1, w1, x2, w2, pn))
        allx = np.concatenate([np.concatenate([c[0], c[2]]) for c in chunks])
        fx = np.asarray(f(allx))
        if fx.shape != allx.shape:
            fx = np.broadcast_to(fx, allx.shape)
        k = 0
        for x1, w1, x2, w2, pn in chunks:
            n1, n2 = x1.size, x2.size
            f1 = fx[k:k + n1] * self._weights(x1, a, b, gl, gr, pn.sl, pn.sr)
            f2 = fx[k + n1:k + n1 + n2] * self._weights(x2, a, b, gl, gr, pn.sl, pn.sr)
            k += n1 + n2
            v1 = np.dot(w1, f1)
            v2 = np.dot(w2, f2)
            pn.value = v2
            pn.error = abs(v2 - v1)
        return fx

    def integrate(self, f, a, b, *, rel_tol=DEFAULT_REL_TOL, abs_tol=0.0, gl=None, gr=None,
                  breaks=(), window=DEFAULT_WINDOW, full_output=False):
        """Integrate ``f(s) (s-a)^gl (b-s)^gr`` over ``[a, b]``."""
        a, b = float(a), float(b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise PreconditionError("finite limits required; use integrate_semi_infinite")
        if b == a:
            return (0.0, 0.0) if full_output else 0.0
        if b < a:
            raise PreconditionError("lower limit exceeds upper limit")
        for g in (gl, gr):
            if g is not None and g <= -1:
                raise PreconditionError("endpoint exponent must exceed -1")
        gl = None if gl == 0 else gl
        gr = None if gr == 0 else gr
        pts = [a]
        if gl is not None:
            pts.append(a + window * (b - a))
        pts.extend(sorted(float(c) for c in breaks if a < c < b))
        if gr is not None:
            pts.append(b - window * (b - a))
        pts.append(b)
        pts = sorted(set(pts))
        panels = [_Panel(p, q, p == a and gl is not None, q == b and gr is not None)
                  for p, q in zip(pts[:-1], pts[1:])]
        self._evaluate(f, panels, a, b, gl, gr)
        while True:
            total = sum(pn.value for pn in panels)
            err = sum(pn.error for pn in panels)
            floor = 64 * np.finfo(float).eps * sum(abs(pn.value) for pn in panels)
            target = max(abs_tol, rel_tol * abs(total), floor)
            if err <= target or not np.isfinite(total):
                break
            if len(panels) >= self.max_panels:
                raise NumericalFailure(
                    f"adaptive quadrature did not converge on [{a}, {b}]",
                    value=total, error=err, diagnostics={"panels": len(panels)})
            cut = max(target / len(panels), 0.25 * max(pn.error for pn in panels))
            fresh, keep = [], []
            for pn in panels:
                if pn.error >= cut:
                    mid = 0.5 * (pn.p + pn.q)
                    fresh.append(_Panel(pn.p, mid, pn.sl, False))
                    fresh.append(_Panel(mid, pn.q, False, pn.sr))
                else:
                    keep.append(pn)
            if fresh and fresh[0].q - fresh[0].p <= 1e-15 * max(1.0, abs(a), abs(b)):
                raise NumericalFailure("panel width underflow", value=total, error=err)
            self._evaluate(f, fresh, a, b, gl, gr)
            panels = sorted(keep + fresh, key=lambda z: z.p)
        if not np.isfinite(total):
            raise NumericalFailure("non-finite integrand values", value=total, error=err)
        return (float(total), float(err)) if full_output else float(total)


_DEFAULT = Integrator()


def integrate(f, a, b, **kw):
    return _DEFAULT.integrate(f, a, b, **kw)


def integrate_semi_infinite(f, a, tail_mu, rel_tol=DEFAULT_REL_TOL, *, gl=None, first=1.0,
                            abs_tol=0.0, max_chunks=60, full_output=False):
    """``int_a^inf f(s) (s-a)^gl ds`` for ``|f| = O(s^-tail_mu)``.

    The range is covered by chunks of doubling length.  For a power-law
    tail the remainder past ``R`` is bounded by ``C R^(1-mu)/(mu-1)`` with
    ``C = max |f(s)| s^mu`` over the last chunk; ``tail_mu = inf`` declares
    a faster-than-power tail, bounded by ``max|f| * length`` of the last chunk.
    """
    mu = float(tail_mu)
    if not mu > 1:
        raise PreconditionError(f"tail exponent {mu} must exceed 1 for convergence")
    total = 0.0
    errsum = 0.0
    tail = np.inf
    previous = None
    lo = float(a)
    width = float(first)
    for k in range(max_chunks):
        hi = lo + width
        if k == 0 or not gl:
            g = f
        else:
            def g(s, lo_=a):
                return f(s) * (s - lo_) ** gl
        val, err = _DEFAULT.integrate(g, lo, hi, rel_tol=rel_tol, abs_tol=abs_tol,
                                      gl=gl if k == 0 else None, full_output=True)
        total += val
        errsum += err
        probe = np.linspace(0.5 * (lo + hi) if k == 0 else lo, hi, 9)
        fp = np.abs(np.asarray(f(probe), dtype=float))
        if gl and k > 0:
            fp = fp * (probe - a) ** gl
        if math.isinf(mu):
            tail = float(np.max(fp)) * width
        elif hi > 0:
            c = float(np.max(fp * probe ** mu))
            tail = c * hi ** (1.0 - mu) / (mu - 1.0)
        if k >= 2 and tail <= max(abs_tol, rel_tol * abs(total)):
            errsum += tail
            return (total, errsum) if full_output else total
        if k >= 3 and math.isfinite(mu):
            estimate = total + _power_remainder(f, a, gl, hi, mu, rel_tol)
            if previous is not None and abs(estimate - previous) <= max(abs_tol, rel_tol * abs(estimate)):
                errsum += abs(estimate - previous)
                return (estimate, errsum) if full_output else estimate
            previous = estimate
        lo = hi
        width *= 2.0
    raise NumericalFailure("semi-infinite integral: tail did not fall below tolerance",
                           value=total, error=errsum + tail)


def _power_remainder(f, a, gl, R, mu, rel_tol):
    """``int_R^inf f(s) (s-a)^gl ds`` after ``s = R v^{-1/(mu-1)}``, which maps an
    ``s^-mu`` tail to a bounded integrand on ``(0, 1]``."""
    k = 1.0 / (mu - 1.0)

    def g(v):
        v = np.asarray(v, dtype=float)
        s = R * v ** (-k)
        out = np.asarray(f(s), dtype=float) * (R * k) * v ** (-k - 1.0)
        if gl:
            out = out * (s - a) ** gl
        return out

    return _DEFAULT.integrate(g, 0.0, 1.0, rel_tol=rel_tol)


def integrate_log_singular(f, a, b, singular_point, window=None, rel_tol=DEFAULT_REL_TOL, abs_tol=0.0):
    """``int_a^b f(s) ds`` where ``f`` has a logarithmic singularity at ``s0``.

    Inside ``|s - s0| < window`` the substitution ``s = s0 +- u^2`` removes
    the singularity to ``u^2 log u``; outside, plain adaptive quadrature.
    """
    s0 = float(singular_point)
    if window is None:
        window = DEFAULT_WINDOW * (b - a)
    total = 0.0
    left = max(a, s0 - window)
    right = min(b, s0 + window)
    if a < left:
        total += integrate(f, a, left, rel_tol=rel_tol, abs_tol=abs_tol)
    if right < b:
        total += integrate(f, right, b, rel_tol=rel_tol, abs_tol=abs_tol)
    if left < s0:
        ul = math.sqrt(s0 - left)
        total += integrate(lambda u: 2.0 * u * f(s0 - u * u), 0.0, ul, rel_tol=rel_tol, abs_tol=abs_tol)
    if s0 < right:
        ur = math.sqrt(right - s0)
        total += integrate(lambda u: 2.0 * u * f(s0 + u * u), 0.0, ur, rel_tol=rel_tol, abs_tol=abs_tol)
    return total


# -- spheres -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SphereRule:
    """Cubature on S^{n-1} with weights summing to one (normalized measure)."""

    nodes: np.ndarray  # shape (N, n)
    weights: np.ndarray

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


@lru_cache(maxsize=64)
def sphere_quadrature(n: int, order: int) -> SphereRule:
    """Product rule on S^{n-1} in R^n.

    The periodic angle uses ``2*order`` trapezoid points; each further polar
    coordinate ``z = cos`` uses an ``order``-point Gauss rule for the weight
    ``(1-z^2)^((k-3)/2)`` of the nested sphere S^{k-1}.
    """
    if not 2 <= n <= 7:
        raise PreconditionError(f"sphere rules are provided for 2 <= n <= 7, got {n}")
    if order < 1:
        raise PreconditionError("order must be positive")
    k = 2 * order
    ang = 2.0 * np.pi * (np.arange(k) + 0.5) / k
    pts = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    wts = np.full(k, 1.0 / k)
    for dim in range(3, n + 1):
        g = 0.5 * (dim - 3)
        z, wz = _jacobi(order, g, g)
        wz = wz / wz.sum()
        rad = np.sqrt(np.maximum(1.0 - z * z, 0.0))
        new = np.concatenate([pts[None, :, :] * rad[:, None, None],
                              np.broadcast_to(z[:, None, None], (z.size, pts.shape[0], 1))], axis=2)
        pts = new.reshape(-1, dim)
        wts = (wz[:, None] * wts[None, :]).ravel()
    pts.setflags(write=False)
    wts.setflags(write=False)
    return SphereRule(pts, wts)
