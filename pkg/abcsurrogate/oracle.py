"""ABC oracle models with closed-form likelihoods and posteriors."""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Any

import numpy as np
import numpy.typing as npt

from .common import StatisticKind
from .const import CFG_LIKELIHOOD_SD, CFG_MEAN, CFG_N, CFG_SD
from .core import Dataset, FloatArray, ParamVector, Simulator
from .exceptions import InvalidData, InvalidParam
from .summaries import StatisticSpec


class BernoulliModel(Simulator):
    """n i.i.d. Bernoulli(θ) trials."""

    def __init__(self, n: int):
        """BernoulliModel init."""
        super().__init__(("theta",), n)

    def data(self) -> dict[str, Any]:
        """Return model description."""
        return {**super().data(), CFG_N: self.n}

    def default_statistic(self) -> StatisticSpec:
        """Return the identity statistic."""
        return StatisticSpec(StatisticKind.IDENTITY)

    def simulate(
        self,
        theta: ParamVector,
        rng: np.random.Generator,
        size: int | None = None,
    ) -> Dataset:
        """Draw one 0/1 sequence."""
        (value,) = self.check(theta)
        if not 0.0 <= value <= 1.0:
            raise InvalidParam(f"BernoulliModel: θ={value} outside [0, 1]")
        trials = rng.random(size or self.n) < value
        return Dataset(trials.astype(np.float64))

    def estimate(self, data: Dataset, index: npt.NDArray[np.int64]) -> FloatArray:
        """Return the success fraction of each resample."""
        return np.atleast_2d(data.observations[np.atleast_2d(index)].mean(axis=1)).T

    def exact_likelihood(self, theta: float, data: Dataset) -> float:
        """Return the sequence probability θ^k (1-θ)^(n-k)."""
        successes = bernoulli_successes(data)
        return float(theta**successes * (1.0 - theta) ** (data.n - successes))


def bernoulli_successes(data: Dataset) -> int:
    """Return the number of ones in a 0/1 dataset."""
    values = data.observations
    if not np.all((values == 0.0) | (values == 1.0)):
        raise InvalidData("bernoulli: observations must be 0 or 1")
    return int(values.sum())


def beta_posterior_mean(data: Dataset) -> float:
    """Return the uniform-prior posterior mean (k+1)/(n+2)."""
    return (bernoulli_successes(data) + 1.0) / (data.n + 2.0)


@dataclass(frozen=True)
class ConjugateNormalConfig:
    """Normal mean with known likelihood sd and a normal prior."""

    prior_mean: float
    prior_sd: float
    likelihood_sd: float
    n: int

    def __post_init__(self) -> None:
        """ConjugateNormalConfig validation."""
        if not (self.prior_sd > 0.0 and self.likelihood_sd > 0.0):
            raise InvalidParam(
                f"ConjugateNormalConfig: sds {self.prior_sd}, {self.likelihood_sd} <= 0"
            )
        if self.n < 0:
            raise InvalidParam(f"ConjugateNormalConfig: n={self.n} < 0")

    def data(self) -> dict[str, Any]:
        """Return oracle data."""
        return {
            CFG_MEAN: self.prior_mean,
            CFG_SD: self.prior_sd,
            CFG_LIKELIHOOD_SD: self.likelihood_sd,
            CFG_N: self.n,
        }


def conjugate_normal_posterior(
    config: ConjugateNormalConfig, data: Dataset | None
) -> tuple[float, float]:
    """Return the closed-form posterior (mean, sd) of the normal mean.

    Without data (n = 0) the posterior is the prior.
    """
    prior_precision = 1.0 / config.prior_sd**2
    if data is None:
        return config.prior_mean, config.prior_sd
    data_precision = data.n / config.likelihood_sd**2
    precision = prior_precision + data_precision
    mean = (
        config.prior_mean * prior_precision
        + float(np.sum(data.observations)) / config.likelihood_sd**2
    ) / precision
    return mean, 1.0 / math.sqrt(precision)


class ConjugateNormalModel(Simulator):
    """n i.i.d. N(μ, σ²) observations with σ known."""

    def __init__(self, n: int, likelihood_sd: float = 1.0):
        """ConjugateNormalModel init."""
        super().__init__(("mu",), n)
        if not likelihood_sd > 0.0:
            raise InvalidParam(f"ConjugateNormalModel: sd {likelihood_sd} <= 0")
        self.likelihood_sd = likelihood_sd

    @classmethod
    def from_config(cls, config: ConjugateNormalConfig) -> ConjugateNormalModel:
        """Build the model of an oracle config."""
        return cls(config.n, config.likelihood_sd)

    def data(self) -> dict[str, Any]:
        """Return model description."""
        return {**super().data(), CFG_N: self.n, CFG_LIKELIHOOD_SD: self.likelihood_sd}

    def default_statistic(self) -> StatisticSpec:
        """Return the sample mean."""
        return StatisticSpec(StatisticKind.MOMENTS, orders=(1,))

    def has_coupling(self) -> bool:
        """Return True, μ + σu is a deterministic coupling."""
        return True

    def draw_coupling(
        self, rng: np.random.Generator, size: int | None = None
    ) -> FloatArray:
        """Draw u ~ N(0, 1)^n."""
        return rng.standard_normal(size or self.n)

    def couple(self, theta: ParamVector, u: FloatArray) -> Dataset:
        """Return z(u, μ) = μ + σu."""
        (mu,) = self.check(theta)
        return Dataset(mu + self.likelihood_sd * np.asarray(u, dtype=np.float64))

    def simulate(
        self,
        theta: ParamVector,
        rng: np.random.Generator,
        size: int | None = None,
    ) -> Dataset:
        """Draw one normal sample."""
        (mu,) = self.check(theta)
        return Dataset(rng.normal(mu, self.likelihood_sd, size or self.n))

    def estimate(self, data: Dataset, index: npt.NDArray[np.int64]) -> FloatArray:
        """Return the sample mean of each resample."""
        return np.atleast_2d(data.observations[np.atleast_2d(index)].mean(axis=1)).T
