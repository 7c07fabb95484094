"""Horospherical transforms on real hyperbolic space: forward and dual transforms, potentials,
fractional calculus, and two inversion methods."""

from .errors import DimensionMismatch, HoroxformError, InvariantBreach, NumericalFailure, PreconditionError
from .lorentz import HoroCoords, HoroPoint, HPoint, LorentzVector, geodesic_distance, minkowski_form
from .fields import HoroField, RadialProfile, ScalarField, compact_bump, exp_bump, power_profile, spherical_mean
from .fractional import FracOrder, rl_derivative, rl_integral
from .harmonic import q_alpha_hat, spherical_function, spherical_transform
from .horo import (SemyanistyiKernel, dual, dual_log, forward, forward_field, semyanistyi_dual,
                   semyanistyi_forward, shifted_dual)
from .potentials import BLPolynomial, DAlphaOp, b_operator, q_potential, q_potential_log
from .inversion import BLConfig, MeanValueConfig, fuglede_check, invert_bl, invert_mean_value
from .oracles import oracle_dual_pairs, oracle_hf_power
from .suites import OracleCase, run_cases, run_suite

__version__ = "0.1.0"

__all__ = [
    "BLConfig", "BLPolynomial", "DAlphaOp", "DimensionMismatch", "FracOrder", "HPoint", "HoroCoords",
    "HoroField", "HoroPoint", "HoroxformError", "InvariantBreach", "LorentzVector", "MeanValueConfig",
    "NumericalFailure", "OracleCase", "PreconditionError", "RadialProfile", "ScalarField", "SemyanistyiKernel",
    "b_operator", "compact_bump", "dual", "dual_log", "exp_bump", "forward", "forward_field", "fuglede_check",
    "geodesic_distance", "invert_bl", "invert_mean_value", "minkowski_form", "oracle_dual_pairs",
    "oracle_hf_power", "power_profile", "q_alpha_hat", "q_potential", "q_potential_log", "rl_derivative",
    "rl_integral", "run_cases", "run_suite", "semyanistyi_dual", "semyanistyi_forward", "shifted_dual",
    "spherical_function", "spherical_mean", "spherical_transform",
]
