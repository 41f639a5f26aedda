"""Steady-state scattering of N two-level emitters chirally coupled to a waveguide."""

from .errors import (
    AmbiguousDrive,
    ChiralWGError,
    ConfigError,
    DimensionMismatch,
    NonUniqueSteadyState,
    SingularResponse,
    SolverSingular,
    StepTooLarge,
    UndefinedCorrelation,
    WrongSystemSize,
)
from .model import Drive, Emitter, EmitterChain, build_decay_matrix, build_hamiltonian, build_k_matrix
from .dynamics import assemble_liouvillian, evolve, solve_steady
from .observables import OutputStats, compute_stats, field_moments

__all__ = [
    "AmbiguousDrive",
    "ChiralWGError",
    "ConfigError",
    "DimensionMismatch",
    "Drive",
    "Emitter",
    "EmitterChain",
    "NonUniqueSteadyState",
    "OutputStats",
    "SingularResponse",
    "SolverSingular",
    "StepTooLarge",
    "UndefinedCorrelation",
    "WrongSystemSize",
    "assemble_liouvillian",
    "build_decay_matrix",
    "build_hamiltonian",
    "build_k_matrix",
    "compute_stats",
    "evolve",
    "field_moments",
    "solve_steady",
]

__version__ = "0.1.0"
