from .extrapolation import RichardsonResult, richardson_limit
from .quadrature import (
    Integrator,
    QuadratureRule,
    SphereRule,
    gauss_jacobi_left,
    gauss_legendre,
    integrate,
    integrate_log_singular,
    integrate_semi_infinite,
    panel_rule,
    sphere_quadrature,
)
from .spectral import SampledCurve, TailModel, cgl_nodes, fit_tail, spectral_derivative

__all__ = [
    "Integrator", "QuadratureRule", "RichardsonResult", "SampledCurve", "SphereRule", "TailModel",
    "cgl_nodes", "fit_tail", "gauss_jacobi_left", "gauss_legendre", "integrate",
    "integrate_log_singular", "integrate_semi_infinite", "panel_rule", "richardson_limit",
    "sphere_quadrature", "spectral_derivative",
]
