"""Anisotropic Rabi model with nonlinear Stark coupling.

Exact diagonalization with parity sectors, closed-form boundaries and
scaling laws, topological labels from ground-state wavefunctions, and
sweep tools that turn all of these into plot-ready tables.
"""

from .model import ModelParams, DerivedScales, validate, derived_scales
from .fock import Truncation, OperatorMatrix, hamiltonian, parity, annihilation, sector_split
from .eigensolve import SpectralResult, eigendecompose, ground_solve, excitation_gap
from .observables import GroundStateAnalysis, analyze, parity_value, quadrature_operators
from .exceptions import (
    RabiStarkError, ChiOutOfRange, NonPositiveFrequency, DomainError, CommutatorViolation,
    ConvergenceFailure, TruncationCeiling, ImpureParity, GridTooSmall, DegeneratePeak,
    ReconstructionMismatch,
)

__version__ = "0.1.0"

__all__ = [
    "ModelParams", "DerivedScales", "validate", "derived_scales",
    "Truncation", "OperatorMatrix", "hamiltonian", "parity", "annihilation", "sector_split",
    "SpectralResult", "eigendecompose", "ground_solve", "excitation_gap",
    "GroundStateAnalysis", "analyze", "parity_value", "quadrature_operators",
    "RabiStarkError", "ChiOutOfRange", "NonPositiveFrequency", "DomainError",
    "CommutatorViolation", "ConvergenceFailure", "TruncationCeiling", "ImpureParity",
    "GridTooSmall", "DegeneratePeak", "ReconstructionMismatch",
]
