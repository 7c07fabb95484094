"""Normalizing constants, evaluated from their closed forms at call time."""

from __future__ import annotations

import math

from scipy.special import digamma, gamma

from .errors import PreconditionError


def half_dim(n: int) -> float:
    """``delta = (n - 1) / 2``."""
    return 0.5 * (n - 1)


def sphere_area(k: int) -> float:
    """Surface area of the unit sphere S^k in R^{k+1}."""
    return 2.0 * math.pi ** (0.5 * (k + 1)) / math.gamma(0.5 * (k + 1))


def dual_zonal_const(n: int) -> float:
    """Prefactor of the zonal dual transform, ``sigma_{n-2} / sigma_{n-1}`` times ``2^((n-3)/2)``."""
    return 2.0 ** (0.5 * (n - 3)) * math.gamma(0.5 * n) / (math.sqrt(math.pi) * math.gamma(0.5 * (n - 1)))


def forward_zonal_const(n: int) -> float:
    return (2.0 * math.pi) ** half_dim(n)


def lambda_n(n: int) -> float:
    """Constant linking the small-order limit of the kernel family to the plain transforms."""
    return 2.0 ** (1 - n) * math.pi ** (1 - 0.5 * n) / math.gamma(0.5 * n)


def _is_odd_integer(a, tol=1e-12):
    k = round(a)
    return abs(a - k) < tol and k % 2 == 1


def gamma_alpha(alpha: float, n: int) -> float:
    """Normalization of the power kernels ``|s-1|^(alpha-1) s^(...)``."""
    if alpha <= 0 or _is_odd_integer(alpha):
        raise PreconditionError(f"kernel order {alpha} must be positive and not an odd integer")
    return (math.pi ** (0.5 * (1 - n)) * gamma(0.5 * (1 - alpha))
            / (2.0 ** (alpha + n - 1) * math.gamma(0.5 * n) * gamma(0.5 * alpha)))


def gamma_prime(n: int) -> float:
    """Residue ``lim (alpha-1) gamma_alpha`` at ``alpha = 1``."""
    return -(math.pi ** (-0.5 * n)) / (2.0 ** (n - 1) * math.gamma(0.5 * n))


def gamma_tilde(n: int) -> float:
    return ((digamma(0.5 * n) - digamma(0.5) - math.log(2.0))
            / (math.pi ** (0.5 * n) * 2.0 ** (0.5 * n + 1) * math.gamma(0.5 * n)))


def zeta(n: int, alpha: float) -> float:
    """Normalization of the potential kernel of order ``alpha``."""
    d = 0.5 * (alpha - n)
    if alpha <= 0 or (abs(d - round(d)) < 1e-12 and round(d) >= 0):
        raise PreconditionError(f"potential order {alpha} not allowed for n = {n}")
    return gamma(0.5 * (n - alpha)) / (2.0 ** (0.5 * alpha + 1) * math.pi ** (0.5 * n) * gamma(0.5 * alpha))


def zeta_prime(n: int) -> float:
    return -(2.0 ** (-1 - 0.5 * n)) / (math.pi ** (0.5 * n) * math.gamma(0.5 * n))


def c_beta(beta: float, n: int) -> float:
    """Constant of the transform of ``x_{n+1}^-beta``."""
    d = half_dim(n)
    if beta <= d:
        raise PreconditionError(f"need beta > (n-1)/2 = {d}")
    return 2.0 ** beta * math.pi ** d * math.gamma(beta - d) / math.gamma(beta)


def c_alpha(alpha: float, n: int) -> float:
    d = half_dim(n)
    if alpha <= 0:
        raise PreconditionError("alpha must be positive")
    return (2.0 ** (d + 0.5 * alpha - 1) * math.gamma(d + 0.5) * math.gamma(0.5 * alpha)
            / (math.sqrt(math.pi) * math.gamma(d + 0.5 * alpha)))


def c_alpha_tilde(alpha: float, n: int) -> float:
    d = half_dim(n)
    if alpha <= 0:
        raise PreconditionError("alpha must be positive")
    return (2.0 ** (-d) * math.gamma(d + 0.5) * math.gamma(0.5 * alpha)
            / (math.sqrt(math.pi) * math.gamma(d + 0.5 * alpha)))


def fuglede_c1(n: int) -> float:
    return 2.0 ** (0.5 * (n - 3)) * math.gamma(0.5 * n) / (math.sqrt(math.pi) * math.gamma(0.5 * (n - 1)))


def fuglede_c2(n: int) -> float:
    return math.pi ** (0.5 * (1 - n)) / (2.0 ** (0.5 * (n + 1)) * math.gamma(0.5 * (n - 1)))
