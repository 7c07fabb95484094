"""Hyperboloid model of H^n inside Minkowski space E^{n,1}.

Vectors are stored with the time-like coordinate last, so a point of
H^n satisfies ``[x, x] = 1`` and ``x[-1] >= 1``.  Light-cone points
``xi = e^t (omega, 1)`` parametrize horospheres ``{x : [x, xi] = 1}``.

All objects are immutable; batch helpers work on arrays whose last axis
has length ``n + 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvariantBreach, PreconditionError

UNIT_TOL = 1e-12
CLAMP_TOL = 1e-12
BREACH_TOL = 1e-9


def minkowski(x, y):
    """Minkowski form on arrays, broadcasting over leading axes."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != y.shape[-1]:
        raise DimensionMismatch(f"vectors of length {x.shape[-1]} and {y.shape[-1]}")
    return x[..., -1] * y[..., -1] - np.sum(x[..., :-1] * y[..., :-1], axis=-1)


def _as_array(v):
    if isinstance(v, (LorentzVector, HPoint, HoroPoint)):
        return v.components
    return np.asarray(v, dtype=float)


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LorentzVector:
    components: np.ndarray

    def __post_init__(self):
        c = _frozen(self.components)
        if c.ndim != 1 or c.size < 3:
            raise DimensionMismatch(f"need a 1-d vector with n+1 >= 3 entries, got shape {c.shape}")
        object.__setattr__(self, "components", c)

    @property
    def dim(self) -> int:
        return self.components.size - 1

    def __repr__(self):
        return f"LorentzVector({self.components.tolist()})"


def minkowski_form(x, y) -> float:
    """``[x, y] = -x_1 y_1 - ... - x_n y_n + x_{n+1} y_{n+1}``."""
    a, b = _as_array(x), _as_array(y)
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(minkowski(a, b))


def _check_unit(omega, size=None):
    w = np.asarray(omega, dtype=float)
    if w.ndim != 1 or (size is not None and w.size != size):
        raise DimensionMismatch(f"direction has shape {w.shape}")
    if abs(np.linalg.norm(w) - 1.0) > UNIT_TOL:
        raise PreconditionError(f"direction is not a unit vector (|w| = {np.linalg.norm(w)!r})")
    return w


@dataclass(frozen=True, eq=False)
class HPoint:
    """A point of the upper hyperboloid sheet."""

    vec: LorentzVector

    def __post_init__(self):
        if not isinstance(self.vec, LorentzVector):
            object.__setattr__(self, "vec", LorentzVector(self.vec))
        c = self.vec.components
        last = c[-1]
        if last < 1.0 - UNIT_TOL:
            raise InvariantBreach(f"x_(n+1) = {last!r} < 1")
        q = minkowski(c, c)
        if abs(q - 1.0) > UNIT_TOL * max(1.0, last * last):
            raise InvariantBreach(f"[x, x] = {q!r} is not 1")

    @classmethod
    def origin(cls, n: int) -> "HPoint":
        c = np.zeros(n + 1)
        c[-1] = 1.0
        return cls(LorentzVector(c))

    @classmethod
    def on_axis(cls, n: int, height: float) -> "HPoint":
        """The point ``sinh(r) e_n + cosh(r) e_{n+1}`` with ``cosh r = height``."""
        r = math.acosh(height)
        return point_from_polar(r, unit_vector(n, n - 1))

    @property
    def components(self) -> np.ndarray:
        return self.vec.components

    @property
    def dim(self) -> int:
        return self.vec.dim

    @property
    def height(self) -> float:
        return float(self.components[-1])

    def __repr__(self):
        return f"HPoint({self.components.tolist()})"


@dataclass(frozen=True, eq=False)
class HoroPoint:
    """A point ``xi = e^t b(omega)`` of the upper light cone.

    The vector is always rebuilt from ``(t, omega)`` so it lies exactly on
    the cone up to rounding.
    """

    t: float
    omega: np.ndarray

    def __post_init__(self):
        w = _check_unit(self.omega)
        if w.size < 2:
            raise DimensionMismatch("omega must live in R^n with n >= 2")
        object.__setattr__(self, "omega", _frozen(w))
        object.__setattr__(self, "t", float(self.t))

    @classmethod
    def from_vector(cls, xi) -> "HoroPoint":
        """Convert a raw light-cone vector to its ``(t, omega)`` form."""
        xi = np.asarray(xi, dtype=float)
        if xi[-1] <= 0:
            raise InvariantBreach("light-cone point must have xi_(n+1) > 0")
        if abs(minkowski(xi, xi)) > 1e-10 * xi[-1] ** 2:
            raise InvariantBreach("vector is not on the light cone")
        spatial = xi[:-1]
        return cls(math.log(xi[-1]), spatial / np.linalg.norm(spatial))

    @property
    def dim(self) -> int:
        return self.omega.size

    @property
    def components(self) -> np.ndarray:
        c = np.empty(self.dim + 1)
        e = math.exp(self.t)
        c[:-1] = e * self.omega
        c[-1] = e
        return c

    @property
    def vec(self) -> LorentzVector:
        return LorentzVector(self.components)

    def __repr__(self):
        return f"HoroPoint(t={self.t!r}, omega={self.omega.tolist()})"


@dataclass(frozen=True, eq=False)
class HoroCoords:
    """Horospherical coordinates ``(v, t)`` with ``x = n_v a_t x_0``."""

    v: np.ndarray
    t: float

    def __post_init__(self):
        v = _frozen(np.atleast_1d(self.v))
        if not (np.all(np.isfinite(v)) and math.isfinite(self.t)):
            raise PreconditionError("horospherical coordinates must be finite")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "t", float(self.t))


def unit_vector(n: int, index: int) -> np.ndarray:
    e = np.zeros(n)
    e[index] = 1.0
    return e


def b_of(omega) -> np.ndarray:
    """``b(omega) = (omega, 1)`` for one or many directions."""
    omega = np.asarray(omega, dtype=float)
    return np.concatenate([omega, np.ones(omega.shape[:-1] + (1,))], axis=-1)


def point_from_polar(r: float, theta) -> HPoint:
    """``x = theta sinh r + e_{n+1} cosh r``."""
    if r < 0:
        raise PreconditionError("polar radius must be non-negative")
    theta = _check_unit(theta)
    c = np.empty(theta.size + 1)
    c[:-1] = math.sinh(r) * theta
    c[-1] = math.cosh(r)
    return HPoint(LorentzVector(c))


def horo_to_array(v, t):
    """Vectorized ``n_v a_t x_0``; ``v`` has shape (..., n-1)."""
    v = np.asarray(v, dtype=float)
    t = np.asarray(t, dtype=float)
    et = np.exp(-t)
    half = 0.5 * np.sum(v * v, axis=-1) * et
    out = np.empty(np.broadcast_shapes(v.shape[:-1], t.shape) + (v.shape[-1] + 2,))
    out[..., :-2] = v * et[..., None]
    out[..., -2] = np.sinh(t) + half
    out[..., -1] = np.cosh(t) + half
    return out


def point_from_horospherical(c: HoroCoords) -> HPoint:
    return HPoint(LorentzVector(horo_to_array(c.v, c.t)))


def horospherical_of_point(x: HPoint) -> HoroCoords:
    c = x.components
    xn, xl = c[-2], c[-1]
    if xn > 0:
        # x_{n+1} - x_n without cancellation
        gap = (1.0 + np.sum(c[:-2] ** 2)) / (xl + xn)
    else:
        gap = xl - xn
    if gap <= 0:
        raise InvariantBreach("x_(n+1) - x_n must be positive on H^n")
    t = -math.log(gap)
    return HoroCoords(math.exp(t) * c[:-2], t)


def acosh_clamped(s):
    """``arccosh`` with values up to CLAMP_TOL below 1 clamped to 1."""
    s = np.asarray(s, dtype=float)
    if np.any(s < 1.0 - BREACH_TOL):
        raise InvariantBreach(f"arccosh argument {np.min(s)!r} is below 1")
    out = np.arccosh(np.maximum(s, 1.0))
    return float(out) if out.ndim == 0 else out


def geodesic_distance(x: HPoint, y: HPoint) -> float:
    return acosh_clamped(minkowski_form(x, y))


def horo_point(t: float, omega) -> HoroPoint:
    return HoroPoint(t, omega)


def bracket_b(x, omega):
    """``[x, b(omega)]`` computed without cancellation; broadcasts."""
    x = np.asarray(x, dtype=float)
    omega = np.asarray(omega, dtype=float)
    spatial = x[..., :-1]
    last = x[..., -1]
    dot = np.sum(spatial * omega, axis=-1)
    perp2 = np.sum(spatial * spatial, axis=-1) - dot * dot
    with np.errstate(divide="ignore", invalid="ignore"):
        stable = (1.0 + np.maximum(perp2, 0.0)) / (last + dot)
    return np.where(dot > 0, stable, last - dot)


def log_bracket(x: HPoint, omega) -> float:
    """``<x, omega> = -log [x, b(omega)]``."""
    omega = _check_unit(omega, x.dim)
    return -math.log(float(bracket_b(x.components, omega)))


def dist_point_horosphere(x: HPoint, xi: HoroPoint) -> float:
    if x.dim != xi.dim:
        raise DimensionMismatch("point and horosphere live in different dimensions")
    br = float(bracket_b(x.components, xi.omega))
    if br <= 0:
        raise InvariantBreach("[x, xi] must be positive")
    return abs(xi.t + math.log(br))


# -- isometries ---------------------------------------------------------------


def rotation_to(omega) -> np.ndarray:
    """A matrix in SO(n) taking ``e_n`` to ``omega``."""
    w = np.asarray(omega, dtype=float)
    n = w.size
    en = unit_vector(n, n - 1)
    u = en - w
    nu = np.linalg.norm(u)
    if nu < 1e-15:
        return np.eye(n)
    u /= nu
    house = np.eye(n) - 2.0 * np.outer(u, u)
    flip = np.eye(n)
    flip[0, 0] = -1.0
    return house @ flip


def embed_rotation(k: np.ndarray) -> np.ndarray:
    n = k.shape[0]
    g = np.eye(n + 1)
    g[:n, :n] = k
    return g


def boost(t: float, n: int) -> np.ndarray:
    """``a_t``: hyperbolic rotation in the (e_n, e_{n+1}) plane."""
    g = np.eye(n + 1)
    ch, sh = math.cosh(t), math.sinh(t)
    g[n - 1, n - 1] = ch
    g[n - 1, n] = sh
    g[n, n - 1] = sh
    g[n, n] = ch
    return g


def isometry_to(x: HPoint) -> np.ndarray:
    """Canonical ``omega_x = R a_rho`` taking ``e_{n+1}`` to ``x``."""
    c = x.components
    n = x.dim
    spatial = c[:-1]
    sh = np.linalg.norm(spatial)
    rho = math.asinh(sh)
    if sh == 0.0:
        rot = np.eye(n)
    else:
        rot = rotation_to(spatial / sh)
    return embed_rotation(rot) @ boost(rho, n)
