"""ABC surrogate library exceptions."""

from __future__ import annotations

from dataclasses import dataclass


class AbcError(Exception):
    """Base class for abcsurrogate errors."""


class CholeskyFailure(AbcError):
    """Exception raised when a synthetic covariance is not positive definite."""


class CouplingNotAvailable(AbcError):
    """Exception raised when a model has no deterministic coupling."""


class DegenerateSample(AbcError):
    """Exception raised when a weighted sample has no positive weight."""


class DimensionMismatch(AbcError):
    """Exception raised when vector dimensions do not agree."""


class EstimatorNotAvailable(AbcError):
    """Exception raised when a model has no point estimator."""


class IncompatibleStatistic(AbcError):
    """Exception raised when a statistic does not apply to a dataset."""


class InsufficientSamples(AbcError):
    """Exception raised when too few samples are provided."""


class InvalidData(AbcError):
    """Exception raised when a dataset breaks its invariants."""


class InvalidDistance(AbcError):
    """Exception raised when a distance spec is invalid."""


class InvalidParam(AbcError):
    """Exception raised when a parameter value is invalid."""


class InvalidPrior(AbcError):
    """Exception raised when a prior spec is invalid."""


class InvalidSurrogate(AbcError):
    """Exception raised when a surrogate kind is invalid."""


class InvalidTolerance(AbcError):
    """Exception raised when a tolerance rule is invalid."""


class InvalidWeight(AbcError):
    """Exception raised when an importance weight is invalid."""


class OracleSizeExceeded(AbcError):
    """Exception raised when a brute-force oracle is asked for too much."""


class PosteriorFormatError(AbcError):
    """Exception raised when a posterior file is malformed."""


class SurrogateMismatch(AbcError):
    """Exception raised when a fit does not match its surrogate kind."""


@dataclass(frozen=True)
class ConfigViolation:
    """Single configuration problem."""

    line: int | None
    key: str
    message: str

    def __str__(self) -> str:
        """Convert ConfigViolation to string."""
        where = f"line {self.line}" if self.line is not None else "config"
        return f"{where}: {self.key}: {self.message}"


class ConfigError(AbcError):
    """Exception raised when a run configuration is invalid."""

    def __init__(self, violations: list[ConfigViolation]):
        """ConfigError init."""
        self.violations = violations
        super().__init__("\n".join(str(violation) for violation in violations))
