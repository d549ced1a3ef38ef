"""ABC prior distributions."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
import math
from typing import Any

import numpy as np
from scipy import stats

from .common import PriorFamily
from .const import CFG_FAMILY, CFG_LOWER, CFG_MEAN, CFG_SD, CFG_UPPER
from .core import ParamVector, RngStream
from .exceptions import DimensionMismatch, InvalidPrior


@dataclass(frozen=True)
class PriorComponent:
    """Independent prior for one parameter component.

    `first`/`second` are (lower, upper) for uniform and (mean, sd) for normal
    and log-normal, the log-normal being parameterized on the log scale.
    """

    name: str
    family: PriorFamily
    first: float
    second: float

    def __post_init__(self) -> None:
        """PriorComponent validation."""
        if self.family == PriorFamily.UNKNOWN:
            raise InvalidPrior(f"{self.name}: unknown prior family")
        if not (math.isfinite(self.first) and math.isfinite(self.second)):
            raise InvalidPrior(f"{self.name}: non-finite prior parameters")
        if self.family == PriorFamily.UNIFORM:
            if self.first >= self.second:
                raise InvalidPrior(
                    f"{self.name}: uniform bounds {self.first} >= {self.second}"
                )
        elif self.second <= 0:
            raise InvalidPrior(f"{self.name}: sd {self.second} <= 0")

    @classmethod
    def uniform(cls, name: str, lower: float, upper: float) -> PriorComponent:
        """Return uniform(lower, upper) component."""
        return cls(name, PriorFamily.UNIFORM, lower, upper)

    @classmethod
    def normal(cls, name: str, mean: float, sd: float) -> PriorComponent:
        """Return normal(mean, sd) component."""
        return cls(name, PriorFamily.NORMAL, mean, sd)

    @classmethod
    def log_normal(cls, name: str, mean: float, sd: float) -> PriorComponent:
        """Return log-normal(mean, sd) component."""
        return cls(name, PriorFamily.LOG_NORMAL, mean, sd)

    def distribution(self) -> Any:
        """Return the frozen scipy distribution."""
        if self.family == PriorFamily.UNIFORM:
            return stats.uniform(loc=self.first, scale=self.second - self.first)
        if self.family == PriorFamily.NORMAL:
            return stats.norm(loc=self.first, scale=self.second)
        return stats.lognorm(s=self.second, scale=math.exp(self.first))

    def support(self) -> tuple[float, float]:
        """Return support bounds."""
        if self.family == PriorFamily.UNIFORM:
            return (self.first, self.second)
        if self.family == PriorFamily.NORMAL:
            return (-math.inf, math.inf)
        return (0.0, math.inf)

    def sample(self, rng: np.random.Generator) -> float:
        """Draw one value."""
        if self.family == PriorFamily.UNIFORM:
            return float(rng.uniform(self.first, self.second))
        if self.family == PriorFamily.NORMAL:
            return float(rng.normal(self.first, self.second))
        return float(rng.lognormal(self.first, self.second))

    def log_density(self, value: float) -> float:
        """Return log density, -inf off support."""
        lower, upper = self.support()
        if not lower <= value <= upper:
            return -math.inf
        return float(self.distribution().logpdf(value))

    def data(self) -> dict[str, Any]:
        """Return prior component data."""
        data: dict[str, Any] = {CFG_FAMILY: str(self.family)}
        if self.family == PriorFamily.UNIFORM:
            data[CFG_LOWER] = self.first
            data[CFG_UPPER] = self.second
        else:
            data[CFG_MEAN] = self.first
            data[CFG_SD] = self.second
        return data


class Prior:
    """Product of independent per-component priors π(θ)."""

    def __init__(self, components: Sequence[PriorComponent]):
        """Prior init."""
        if len(components) == 0:
            raise InvalidPrior("Prior: no components")
        names = [component.name for component in components]
        if len(set(names)) != len(names):
            raise InvalidPrior(f"Prior: duplicate component names {names}")
        self.components: tuple[PriorComponent, ...] = tuple(components)
        self.names: tuple[str, ...] = tuple(names)

    @property
    def dimension(self) -> int:
        """Return parameter dimension d."""
        return len(self.components)

    def sample(self, rng: np.random.Generator) -> ParamVector:
        """Draw θ ~ π."""
        return ParamVector(
            tuple(component.sample(rng) for component in self.components),
            self.names,
        )

    def log_density(self, theta: ParamVector) -> float:
        """Return log π(θ)."""
        if theta.get_dimension() != self.dimension:
            raise DimensionMismatch(
                f"Prior: expected d={self.dimension}, got {theta.get_dimension()}"
            )
        total = 0.0
        for component, value in zip(self.components, theta.values, strict=True):
            total += component.log_density(value)
            if total == -math.inf:
                break
        return total

    def in_support(self, theta: ParamVector) -> bool:
        """Return if θ lies inside the prior support."""
        return self.log_density(theta) > -math.inf

    def data(self) -> dict[str, Any]:
        """Return prior data keyed by component name."""
        return {component.name: component.data() for component in self.components}


def prior_sample(prior: Prior, rng: RngStream | np.random.Generator) -> ParamVector:
    """Draw θ ~ π.

    A stream draws from its start, so equal streams give equal θ; a generator
    draws from its current state.
    """
    if isinstance(rng, RngStream):
        rng = rng.generator()
    return prior.sample(rng)


def prior_log_density(prior: Prior, theta: ParamVector) -> float:
    """Return log π(θ)."""
    return prior.log_density(theta)
