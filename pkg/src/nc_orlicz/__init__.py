"""Noncommutative weak Orlicz and Orlicz-Hardy spaces on finite-dimensional models.

Matrices with a scaled trace stand in for measurable operators, and
decreasing step functions for their generalized singular numbers.
"""

from .config import DEFAULT, Settings
from .errors import (
    ContractViolation,
    DivergenceError,
    DomainError,
    NCOrliczError,
    NumericalFailure,
    ShapeError,
    UnboundedError,
    UnsupportedFamilyError,
)
from .hardy import BlockStructure, conditional_expectation, hardy_membership, riesz_decomposition, triangular_projection
from .nfunction import Conjugate, ExpType, NFunction, Power, PowerLog, Tabulated, complement
from .norms import (
    NormReport,
    equivalent_banach_norm,
    lorentz_norm,
    luxemburg_norm,
    marcinkiewicz_norm,
    weak_lp_norm,
    weak_orlicz_quasinorm,
)
from .spectra import DecreasingStepFunction, ParametricDecay, TracedMatrix, singular_value_function
from .weighted import Density, t_map, weighted_weak_norm

__version__ = "0.1.0"

__all__ = [
    "DEFAULT",
    "Settings",
    "ContractViolation",
    "DivergenceError",
    "DomainError",
    "NCOrliczError",
    "NumericalFailure",
    "ShapeError",
    "UnboundedError",
    "UnsupportedFamilyError",
    "BlockStructure",
    "conditional_expectation",
    "hardy_membership",
    "riesz_decomposition",
    "triangular_projection",
    "Conjugate",
    "ExpType",
    "NFunction",
    "Power",
    "PowerLog",
    "Tabulated",
    "complement",
    "NormReport",
    "equivalent_banach_norm",
    "lorentz_norm",
    "luxemburg_norm",
    "marcinkiewicz_norm",
    "weak_lp_norm",
    "weak_orlicz_quasinorm",
    "DecreasingStepFunction",
    "ParametricDecay",
    "TracedMatrix",
    "singular_value_function",
    "Density",
    "t_map",
    "weighted_weak_norm",
]
