"""Closed-form transform pairs and the default field corpus."""

from __future__ import annotations

import math

import numpy as np

from .constants import c_alpha, c_alpha_tilde, c_beta, fuglede_c1, fuglede_c2, half_dim, lambda_n
from .errors import PreconditionError
from .fields import HoroField, RadialProfile, ScalarField, compact_bump, exp_bump, power_profile
from .lorentz import HPoint


def oracle_hf_power(beta: float, t, n: int):
    """Transform of ``x_{n+1}^-beta`` at ``xi_{n+1} = e^t``:
    ``c_beta u^{beta - 2 delta} (u^2 + 1)^{delta - beta}``."""
    d = half_dim(n)
    if not beta > d:
        raise PreconditionError(f"need beta > (n-1)/2 = {d}")
    u = np.exp(np.asarray(t, dtype=float))
    out = c_beta(beta, n) * u ** (beta - 2.0 * d) * (u * u + 1.0) ** (d - beta)
    return float(out) if out.ndim == 0 else out


def oracle_dual_pairs(alpha: float, x: HPoint, variant: str = "A") -> float:
    """Closed-form duals of the two power-kernel families.

    ``A``: ``c_alpha (x-1)^{(alpha-1)/2} (x+1)^{1/2-delta}``, shared by both
    kernels of :func:`dual_pair_fields`.  ``B``:
    ``c~_alpha (x-1)^{(alpha-1)/2} (x+1)^{(1-alpha)/2-delta}`` for
    :func:`dual_pair_b_field`.
    """
    if not alpha > 0:
        raise PreconditionError("alpha must be positive")
    n = x.dim
    d = half_dim(n)
    h = x.height
    q = 0.5 * (alpha - 1.0)
    base = (h - 1.0) ** q if q else 1.0
    if variant == "A":
        return c_alpha(alpha, n) * base * (h + 1.0) ** (0.5 - d)
    if variant == "B":
        return c_alpha_tilde(alpha, n) * base * (h + 1.0) ** (-q - d)
    raise PreconditionError(f"unknown variant {variant!r}")


def _kernel_field(n, alpha, log_fn, label):
    sing = alpha - 1.0
    if abs(sing) < 1e-15:
        return HoroField.from_log_profile(log_fn, n, None, label)
    return HoroField.from_log_profile(log_fn, n, None, label, singular_t=0.0, singular_power=sing)


def dual_pair_fields(alpha: float, n: int):
    """``phi0(u) = |u-1|^{alpha-1} u^{-(delta+alpha/2)}`` and ``psi0(u) = |u-1|^{alpha-1} u^{-(delta+alpha/2-1)}``."""
    if not alpha > 0:
        raise PreconditionError("alpha must be positive")
    d = half_dim(n)
    sing = alpha - 1.0

    def make(p):
        return lambda t: np.abs(np.expm1(np.asarray(t, dtype=float))) ** sing * np.exp(-p * np.asarray(t))

    phi = _kernel_field(n, alpha, make(d + 0.5 * alpha), f"phi({alpha})")
    psi = _kernel_field(n, alpha, make(d + 0.5 * alpha - 1.0), f"psi({alpha})")
    return phi, psi


def dual_pair_b_field(alpha: float, n: int) -> HoroField:
    """``phi0(u) = |u-1|^{alpha-1} (u+1)^{1-alpha-2 delta}``."""
    if not alpha > 0:
        raise PreconditionError("alpha must be positive")
    d = half_dim(n)
    sing = alpha - 1.0

    def fn(t):
        u = np.exp(np.asarray(t, dtype=float))
        return np.abs(u - 1.0) ** sing * (u + 1.0) ** (-sing - 2.0 * d)

    return _kernel_field(n, alpha, fn, f"phiB({alpha})")


def non_injectivity_witness(n: int) -> HoroField:
    """``phi0(u) = u^{1-n/2} - u^{-n/2}``, annihilated by the dual transform."""
    def fn(t):
        t = np.asarray(t, dtype=float)
        return np.exp((1.0 - 0.5 * n) * t) - np.exp(-0.5 * n * t)
    return HoroField.from_log_profile(fn, n, None, "kernel-witness")


def spherical_function_n3(lam: float, r):
    """``sin(lam r) / (lam sinh r)`` (``r / sinh r`` at ``lam = 0``)."""
    r = np.asarray(r, dtype=float)
    safe = np.where(r == 0, 1.0, r)
    if lam == 0:
        out = np.where(r == 0, 1.0, safe / np.sinh(safe))
    else:
        out = np.where(r == 0, 1.0, np.sin(lam * safe) / (lam * np.sinh(safe)))
    return float(out) if out.ndim == 0 else out


def compact_light_cone_bump(n: int, width: float = 1.5, k: int = 4) -> HoroField:
    """``(1 - (t/width)^2)_+^k`` as a zonal light-cone field."""
    def fn(t):
        t = np.asarray(t, dtype=float)
        return np.clip(1.0 - (t / width) ** 2, 0.0, None) ** k
    return HoroField.from_log_profile(fn, n, (-width, width), f"cone_bump({width})")


def corpus_field(kind: str, n: int, **params) -> ScalarField:
    """A zonal field of the default corpus: ``power`` (beta), ``exp_bump`` (a), ``compact_bump`` (w)."""
    if kind == "power":
        prof = power_profile(float(params.get("beta", 3.0 if n >= 3 else 2.0)))
    elif kind == "exp_bump":
        prof = exp_bump(float(params.get("a", 3.0)))
    elif kind == "compact_bump":
        prof = compact_bump(float(params.get("w", 1.0)), int(params.get("k", 4)))
    elif kind == "sampled":
        if "path" not in params:
            raise PreconditionError("a sampled field needs 'path'")
        prof = RadialProfile.from_csv(params["path"])
    else:
        raise PreconditionError(f"unknown field kind {kind!r}")
    return ScalarField.from_profile(prof, n)


def composition_constant_check(n: int) -> tuple:
    """``(c1/c2, 1/lambda_n)`` from the two kernel constants of the composition identity."""
    return fuglede_c1(n) / fuglede_c2(n), 1.0 / lambda_n(n)
