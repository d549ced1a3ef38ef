"""ABC surrogate library common code."""

from __future__ import annotations

from enum import IntEnum, StrEnum
import json
from typing import Any


class BandwidthRule(StrEnum):
    """Bootstrap KDE bandwidth rules."""

    UNKNOWN = "unknown"

    SCOTT = "scott"
    SILVERMAN = "silverman"

    @classmethod
    def _missing_(cls, value: Any) -> BandwidthRule:
        return cls.UNKNOWN


class ConstraintKind(StrEnum):
    """Empirical likelihood constraint sets."""

    UNKNOWN = "unknown"

    MEAN = "mean"
    MEAN_VAR = "mean-var"

    @classmethod
    def _missing_(cls, value: Any) -> ConstraintKind:
        return cls.UNKNOWN

    def count(self) -> int:
        """Return number of moment functions."""
        counts: dict[str, int] = {
            self.UNKNOWN: 0,
            self.MEAN: 1,
            self.MEAN_VAR: 2,
        }
        return counts[self.value]


class DesignColumn(StrEnum):
    """Mixed-effects design columns."""

    UNKNOWN = "unknown"

    INTERCEPT = "intercept"
    TREND = "trend"

    @classmethod
    def _missing_(cls, value: Any) -> DesignColumn:
        return cls.UNKNOWN


class DistanceKind(StrEnum):
    """Summary distance kinds."""

    UNKNOWN = "unknown"

    EUCLIDEAN = "euclidean"
    SCALED_EUCLIDEAN = "scaled-euclidean"

    @classmethod
    def _missing_(cls, value: Any) -> DistanceKind:
        return cls.UNKNOWN


class KernelKind(StrEnum):
    """Smoothing kernel kinds."""

    UNKNOWN = "unknown"

    EPANECHNIKOV = "epanechnikov"
    GAUSSIAN = "gaussian"

    @classmethod
    def _missing_(cls, value: Any) -> KernelKind:
        return cls.UNKNOWN


class ModelName(StrEnum):
    """Benchmark and oracle models."""

    UNKNOWN = "unknown"

    BERNOULLI = "bernoulli"
    CONJUGATE_NORMAL = "conjugate-normal"
    G_AND_K = "g-and-k"
    MIXED_EFFECTS = "mixed-effects"
    POTTS = "potts"

    @classmethod
    def _missing_(cls, value: Any) -> ModelName:
        return cls.UNKNOWN


class NoiseFamily(StrEnum):
    """Mixed-effects noise families."""

    UNKNOWN = "unknown"

    NORMAL = "normal"
    STUDENT_T = "student-t"

    @classmethod
    def _missing_(cls, value: Any) -> NoiseFamily:
        return cls.UNKNOWN


class PriorFamily(StrEnum):
    """Prior component families."""

    UNKNOWN = "unknown"

    LOG_NORMAL = "log-normal"
    NORMAL = "normal"
    UNIFORM = "uniform"

    @classmethod
    def _missing_(cls, value: Any) -> PriorFamily:
        return cls.UNKNOWN


class SamplerKind(StrEnum):
    """Sampling drivers."""

    UNKNOWN = "unknown"

    IMPORTANCE = "is"
    METROPOLIS = "mh"

    @classmethod
    def _missing_(cls, value: Any) -> SamplerKind:
        return cls.UNKNOWN


class StatisticKind(StrEnum):
    """Summary statistic kinds."""

    UNKNOWN = "unknown"

    IDENTITY = "identity"
    MIXED_EFFECTS = "mixed-effects"
    MOMENTS = "moments"
    POTTS = "potts"
    QUANTILES = "quantiles"

    @classmethod
    def _missing_(cls, value: Any) -> StatisticKind:
        return cls.UNKNOWN


class StreamDomain(IntEnum):
    """Independent families of RNG streams within one seed."""

    ITERATION = 0
    PILOT = 1
    OBSERVED = 2
    COUPLING = 3
    BOOTSTRAP = 4
    CHAIN = 5


class SurrogateMethod(StrEnum):
    """Surrogate likelihood families."""

    UNKNOWN = "unknown"

    BOOTSTRAP = "bootstrap"
    COUPLED = "coupled"
    EMPIRICAL = "empirical"
    KERNEL = "kernel"
    REJECTION = "rejection"
    SYNTHETIC = "synthetic"

    @classmethod
    def _missing_(cls, value: Any) -> SurrogateMethod:
        return cls.UNKNOWN

    def __str__(self) -> str:
        """Convert SurrogateMethod value to string."""
        names: dict[str, str] = {
            self.UNKNOWN: "Unknown",
            self.BOOTSTRAP: "BL-ABC",
            self.COUPLED: "C-ABC",
            self.EMPIRICAL: "EL-ABC",
            self.KERNEL: "K-ABC",
            self.REJECTION: "R-ABC",
            self.SYNTHETIC: "SL-ABC",
        }
        return names[self.value]

    def uses_distance(self) -> bool:
        """Return if the surrogate compares summaries by distance."""
        return self.value in (self.COUPLED, self.KERNEL, self.REJECTION)

    def uses_tolerance(self) -> bool:
        """Return if the surrogate has a tolerance ε."""
        return self.value in (self.COUPLED, self.REJECTION)

    def simulates(self) -> bool:
        """Return if the surrogate draws synthetic data sets (N > 0)."""
        return self.value in (self.KERNEL, self.REJECTION, self.SYNTHETIC)


def json_dumps(data: Any) -> str:
    """Convert data to stable JSON."""
    return json.dumps(data, indent=4, sort_keys=True, allow_nan=False) + "\n"


def format_float(value: float) -> str:
    """Convert float to its shortest round-trip string."""
    return repr(float(value))


def format_floats(values: tuple[float, ...] | list[float]) -> str:
    """Convert floats to a comma separated string."""
    return ", ".join(format_float(value) for value in values)


def parse_float(data: Any) -> float | None:
    """Convert data to float."""
    if data is not None:
        return float(data)
    return None


def parse_floats(data: Any) -> tuple[float, ...] | None:
    """Convert comma separated data to floats."""
    if data is not None:
        items = [item.strip() for item in str(data).split(",")]
        return tuple(float(item) for item in items if item)
    return None


def parse_int(data: Any) -> int | None:
    """Convert data to int."""
    if data is not None:
        return int(data)
    return None


def parse_ints(data: Any) -> tuple[int, ...] | None:
    """Convert comma separated data to ints."""
    if data is not None:
        items = [item.strip() for item in str(data).split(",")]
        return tuple(int(item) for item in items if item)
    return None


def parse_str(data: Any) -> str | None:
    """Convert data to string."""
    if data is not None:
        return str(data).strip()
    return None
