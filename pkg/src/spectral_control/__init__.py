"""Spectral controllability toolkit for Laguerre and Jacobi diffusions.

Builds orthonormal polynomial bases and their eigenvalue-level
decompositions, evolves the associated diagonal semigroups, certifies the
truncated approximate-controllability criterion, synthesizes minimum-norm
steering controls, and reports the singular-value decay of the truncated
control operator.
"""

from .chaos import (
    ChaosDecomposition,
    ChaosLevel,
    jacobi_levels,
    laguerre_levels,
    project,
)
from .control import (
    Certificate,
    GramianReport,
    SteeringPlan,
    certify_approx_controllability,
    duality_recover,
    gramian_spectrum,
    min_norm_steering,
)
from .errors import (
    CapacityError,
    ConfigError,
    ContractError,
    DomainError,
    EvalError,
    NumericError,
    ParameterError,
    ParseError,
    ShapeError,
    SpectralControlError,
    UnderdeterminedError,
    UnreachableTargetError,
)
from .evolution import (
    ControlSignal,
    DiagonalSystem,
    abstract_system,
    apply_B,
    apply_B_star,
    mild_solution,
    reconstruct,
    semigroup_apply,
    system_from_coefficients,
    tensor_system,
    truncation_gap,
)
from .exprparse import evaluate, parse, to_source
from .orthopoly import (
    PolyFamily1D,
    RecurrenceCoeffs,
    eval_derivatives,
    eval_orthonormal,
    jacobi,
    laguerre,
    norm_constant,
    recurrence_coeffs,
    sturm_liouville_residual,
)
from .quadrature import QuadRule, fourier_coefficient, fourier_coefficients, gauss_rule, inner_product
from .state import SpectralState

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "Certificate",
    "ChaosDecomposition",
    "ChaosLevel",
    "ConfigError",
    "ContractError",
    "ControlSignal",
    "DiagonalSystem",
    "DomainError",
    "EvalError",
    "GramianReport",
    "NumericError",
    "ParameterError",
    "ParseError",
    "PolyFamily1D",
    "QuadRule",
    "RecurrenceCoeffs",
    "ShapeError",
    "SpectralControlError",
    "SpectralState",
    "SteeringPlan",
    "UnderdeterminedError",
    "UnreachableTargetError",
    "abstract_system",
    "apply_B",
    "apply_B_star",
    "certify_approx_controllability",
    "duality_recover",
    "eval_derivatives",
    "eval_orthonormal",
    "evaluate",
    "fourier_coefficient",
    "fourier_coefficients",
    "gauss_rule",
    "gramian_spectrum",
    "inner_product",
    "jacobi",
    "jacobi_levels",
    "laguerre",
    "laguerre_levels",
    "mild_solution",
    "min_norm_steering",
    "norm_constant",
    "parse",
    "project",
    "reconstruct",
    "recurrence_coeffs",
    "semigroup_apply",
    "sturm_liouville_residual",
    "system_from_coefficients",
    "tensor_system",
    "to_source",
    "truncation_gap",
]
