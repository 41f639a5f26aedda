"""Exception hierarchy."""


class ChiralWGError(Exception):
    """Base class for all package errors."""


class ConfigError(ChiralWGError, ValueError):
    """Invalid emitter, chain, drive or scenario configuration."""


class DimensionMismatch(ChiralWGError, ValueError):
    pass


class WrongSystemSize(ChiralWGError, ValueError):
    pass


class AmbiguousDrive(ChiralWGError, ValueError):
    """Both ports driven, so per-port normalisation is undefined."""


class SolverError(ChiralWGError, RuntimeError):
    """Base for numerical failures (CLI exit code 3)."""


class SolverSingular(SolverError):
    pass


class NonUniqueSteadyState(SolverError):
    pass


class StepTooLarge(SolverError):
    pass


class SingularResponse(SolverError):
    """Classical response matrix (i*Delta + Gamma) is not invertible."""


class UndefinedCorrelation(ChiralWGError, ArithmeticError):
    pass
