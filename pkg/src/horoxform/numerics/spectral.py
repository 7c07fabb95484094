"""Sampled curves: Chebyshev or spline interpolants with analytic tails."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Chebyshev
from scipy.fft import dct
from scipy.interpolate import CubicSpline

from ..errors import PreconditionError

GRID_SLACK = 1e-12


@dataclass(frozen=True)
class TailModel:
    """``sum_i c_i (s/S)^q_i exp(-k (s - S))`` for ``s`` beyond the anchor ``S``.

    The family is closed under differentiation and multiplication by powers
    of ``s``, which is what the fractional operators need.
    """

    anchor: float
    terms: tuple  # ((coef, power), ...)
    rate: float = 0.0

    @classmethod
    def power(cls, anchor, value, mu):
        return cls(float(anchor), ((float(value), -float(mu)),), 0.0)

    @classmethod
    def exponential(cls, anchor, value, rate):
        if rate <= 0:
            raise PreconditionError("exponential tail needs a positive rate")
        return cls(float(anchor), ((float(value), 0.0),), float(rate))

    @classmethod
    def zero(cls, anchor):
        return cls(float(anchor), (), 0.0)

    @property
    def mu(self) -> float:
        if not self.terms or self.rate > 0:
            return math.inf
        return -max(q for _, q in self.terms)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        z = s / self.anchor
        for c, q in self.terms:
            out = out + c * z ** q
        if self.rate:
            out = out * np.exp(-self.rate * (s - self.anchor))
        return out

    def derivative(self):
        S = self.anchor
        terms = []
        for c, q in self.terms:
            if q != 0:
                terms.append((c * q / S, q - 1.0))
            if self.rate:
                terms.append((-self.rate * c, q))
        return TailModel(S, _merge(terms), self.rate)

    def times_power(self, p):
        S = self.anchor
        return TailModel(S, _merge([(c * S ** p, q + p) for c, q in self.terms]), self.rate)

    def scaled(self, k):
        return TailModel(self.anchor, tuple((k * c, q) for c, q in self.terms), self.rate)


def _merge(terms):
    acc = {}
    for c, q in terms:
        acc[q] = acc.get(q, 0.0) + c
    return tuple((c, q) for q, c in sorted(acc.items()) if c != 0.0)


def cgl_nodes(n: int, a: float, b: float) -> np.ndarray:
    """Chebyshev-Gauss-Lobatto points on [a, b] in increasing order."""
    if n < 2:
        raise PreconditionError("need at least two nodes")
    x = -np.cos(np.pi * np.arange(n) / (n - 1))
    return 0.5 * (a + b) + 0.5 * (b - a) * x


def cheb_coefficients(values) -> np.ndarray:
    """Chebyshev coefficients of the interpolant through CGL samples (increasing grid)."""
    v = np.asarray(values)[::-1]
    n = v.size
    if np.iscomplexobj(v):
        return cheb_coefficients(v.real[::-1]) + 1j * cheb_coefficients(v.imag[::-1])
    c = dct(v, type=1) / (n - 1)
    c[0] *= 0.5
    c[-1] *= 0.5
    return c


@dataclass(frozen=True, eq=False)
class SampledCurve:
    """Values on a strictly increasing grid with an interpolant and optional tail.

    ``kind`` is ``"chebyshev"`` (grid must be CGL points) or ``"spline"``.
    """

    grid: np.ndarray
    values: np.ndarray
    kind: str = "chebyshev"
    tail: TailModel | None = None
    _interp: object = field(default=None, repr=False)

    def __post_init__(self):
        g = np.array(self.grid, dtype=float)
        v = np.array(self.values)
        if g.ndim != 1 or g.shape != v.shape:
            raise PreconditionError("grid and values must be 1-d arrays of equal length")
        if np.any(np.diff(g) <= 0):
            raise PreconditionError("grid must be strictly increasing")
        g.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)
        if self._interp is None:
            if self.kind == "chebyshev":
                ref = cgl_nodes(g.size, g[0], g[-1])
                if not np.allclose(ref, g, rtol=0, atol=1e-10 * (g[-1] - g[0])):
                    raise PreconditionError("chebyshev curves need a CGL grid")
                interp = Chebyshev(cheb_coefficients(v), domain=[g[0], g[-1]])
            elif self.kind == "spline":
                interp = CubicSpline(g, v)
            else:
                raise PreconditionError(f"unknown interpolation kind {self.kind!r}")
            object.__setattr__(self, "_interp", interp)

    @classmethod
    def from_function(cls, f, a, b, n=64, *, kind="chebyshev", tail=None):
        g = cgl_nodes(n, a, b) if kind == "chebyshev" else np.linspace(a, b, n)
        return cls(g, np.asarray(f(g)), kind, tail)

    @property
    def a(self) -> float:
        return float(self.grid[0])

    @property
    def b(self) -> float:
        return float(self.grid[-1])

    @property
    def size(self) -> int:
        return self.grid.size

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        span = self.b - self.a
        if np.any(s < self.a - GRID_SLACK * span):
            raise PreconditionError(f"evaluation point below the grid start {self.a}")
        inside = s <= self.b
        if np.all(inside):
            return self._interp(np.clip(s, self.a, self.b))
        if self.tail is None:
            raise PreconditionError("evaluation beyond the grid requires a tail model")
        out = np.empty(s.shape, dtype=self.values.dtype)
        out[inside] = self._interp(np.clip(s[inside], self.a, self.b))
        out[~inside] = self.tail(s[~inside])
        return out

    def with_values(self, values, tail="keep"):
        return SampledCurve(self.grid, values, self.kind, self.tail if tail == "keep" else tail)

    def derivative(self, order: int = 1) -> "SampledCurve":
        return spectral_derivative(self, order)

    def times_power(self, p: float) -> "SampledCurve":
        tail = None if self.tail is None else self.tail.times_power(p)
        return SampledCurve(self.grid, self.values * self.grid ** p, self.kind, tail)

    def chebyshev(self):
        if self.kind != "chebyshev":
            raise PreconditionError("curve is not a Chebyshev interpolant")
        return self._interp


def spectral_derivative(c: SampledCurve, order: int = 1) -> SampledCurve:
    """Derivative of the interpolant, resampled on the same grid."""
    if order < 0:
        raise PreconditionError("derivative order must be non-negative")
    if order == 0:
        return c
    if order > c.size - 2:
        raise PreconditionError(f"order {order} too high for a {c.size}-point grid")
    tail = c.tail
    if tail is not None:
        for _ in range(order):
            tail = tail.derivative()
    if c.kind == "chebyshev":
        d = c.chebyshev().deriv(order)
        return SampledCurve(c.grid, d(c.grid), "chebyshev", tail, d)
    sp = c._interp.derivative(order)
    return SampledCurve(c.grid, sp(c.grid), "spline", tail, sp)


def fit_tail(grid, values, mu=None) -> TailModel:
    """Anchor a tail at the right end: power law for finite ``mu``, else exponential."""
    S, v = float(grid[-1]), float(np.real(values[-1]))
    if v == 0.0:
        return TailModel.zero(S)
    if mu is not None and math.isfinite(mu):
        return TailModel.power(S, v, mu)
    w = float(np.real(values[-2]))
    if w == 0.0 or v / w <= 0 or abs(v) >= abs(w):
        return TailModel.power(S, v, 4.0 if mu is None else 64.0)
    rate = -math.log(v / w) / (grid[-1] - grid[-2])
    return TailModel.exponential(S, v, rate)
