"""ABC Potts lattice model."""

from __future__ import annotations

from dataclasses import dataclass
import logging
import math
from typing import Any

import numpy as np
import numpy.typing as npt
from scipy import special

from .common import StatisticKind
from .const import (
    CFG_COLS,
    CFG_ROWS,
    CFG_STATES,
    CFG_SWEEPS,
    DEFAULT_POTTS_SWEEPS,
    POTTS_EXACT_MAX_CONFIGS,
)
from .core import Dataset, ParamVector, Simulator
from .exceptions import InvalidData, InvalidParam, OracleSizeExceeded
from .summaries import StatisticSpec, lattice_edges, potts_statistic

_LOGGER = logging.getLogger(__name__)

POTTS_NAMES: tuple[str, ...] = ("theta",)
POTTS_ENUM_CHUNK: int = 1 << 16
POTTS_REPLICATE_CHUNK: int = 1 << 17


@dataclass(frozen=True)
class PottsConfig:
    """First-order Potts lattice of `states` colours at inverse temperature θ."""

    rows: int
    cols: int
    states: int
    theta: float = 0.0

    def __post_init__(self) -> None:
        """PottsConfig validation."""
        if self.rows < 1 or self.cols < 1:
            raise InvalidParam(f"PottsConfig: lattice {self.rows}x{self.cols}")
        if self.states < 2:
            raise InvalidParam(f"PottsConfig: k={self.states} < 2")
        if not (self.theta >= 0.0 and math.isfinite(self.theta)):
            raise InvalidParam(f"PottsConfig: θ={self.theta} < 0")

    @property
    def n(self) -> int:
        """Return number of sites."""
        return self.rows * self.cols

    @property
    def shape(self) -> tuple[int, int]:
        """Return lattice shape."""
        return (self.rows, self.cols)

    def dataset(self, states: npt.ArrayLike) -> Dataset:
        """Wrap raster-order states as a lattice Dataset."""
        return Dataset(np.asarray(states), states=self.states, shape=self.shape)

    def data(self) -> dict[str, Any]:
        """Return lattice data."""
        return {CFG_ROWS: self.rows, CFG_COLS: self.cols, CFG_STATES: self.states}


def _neighbours(rows: int, cols: int) -> list[npt.NDArray[np.int64]]:
    left, right = lattice_edges(rows, cols)
    lists: list[list[int]] = [[] for _ in range(rows * cols)]
    for i, j in zip(left, right, strict=True):
        lists[i].append(int(j))
        lists[j].append(int(i))
    return [np.array(items, dtype=np.int64) for items in lists]


def potts_gibbs_batch(
    config: PottsConfig,
    sweeps: int,
    rng: np.random.Generator,
    replicates: int = 1,
) -> npt.NDArray[np.int64]:
    """Run `replicates` independent single-site Gibbs chains.

    Each chain starts uniform over {1..k}; a sweep updates sites in raster
    order from Pr(y_i = j | rest) ∝ exp(θ·#{ℓ ~ i : y_ℓ = j}). Returns the
    replicates x n states after `sweeps` sweeps.
    """
    if sweeps < 1:
        raise InvalidParam(f"pottsGibbsSimulate: sweeps={sweeps} < 1")
    if replicates < 1:
        raise InvalidParam(f"pottsGibbsSimulate: replicates={replicates} < 1")
    neighbours = _neighbours(config.rows, config.cols)
    colours = np.arange(1, config.states + 1)
    lattice = rng.integers(1, config.states + 1, size=(replicates, config.n))
    for _ in range(sweeps):
        for site, nbrs in enumerate(neighbours):
            if nbrs.size == 0 or config.theta == 0.0:
                lattice[:, site] = rng.integers(1, config.states + 1, size=replicates)
                continue
            agree = (lattice[:, nbrs][:, :, None] == colours).sum(axis=1)
            logits = config.theta * agree
            probs = np.exp(logits - logits.max(axis=1, keepdims=True))
            cumulative = np.cumsum(probs, axis=1)
            u = rng.random(replicates) * cumulative[:, -1]
            lattice[:, site] = 1 + (cumulative < u[:, None]).sum(axis=1)
    return lattice


def potts_gibbs_simulate(
    config: PottsConfig, sweeps: int, rng: np.random.Generator
) -> Dataset:
    """Return the lattice after `sweeps` Gibbs sweeps from a uniform start."""
    return config.dataset(potts_gibbs_batch(config, sweeps, rng)[0])


def potts_log_partition(config: PottsConfig) -> float:
    """Return log Σ_y* exp(θ·S(y*)) over all k^n configurations."""
    total = config.states**config.n
    if total > POTTS_EXACT_MAX_CONFIGS:
        raise OracleSizeExceeded(
            f"pottsExactLikelihood: k^n={total} > {POTTS_EXACT_MAX_CONFIGS}"
        )
    powers = config.states ** np.arange(config.n, dtype=np.int64)
    parts: list[float] = []
    for start in range(0, total, POTTS_ENUM_CHUNK):
        codes = np.arange(start, min(start + POTTS_ENUM_CHUNK, total), dtype=np.int64)
        lattice = (codes[:, None] // powers) % config.states + 1
        stat = potts_statistic(lattice, config.rows, config.cols)
        parts.append(float(special.logsumexp(config.theta * stat)))
    return float(special.logsumexp(parts))


def potts_exact_log_likelihood(config: PottsConfig, data: Dataset) -> float:
    """Return log p(y | θ) = θ·S(y) - log Z(θ)."""
    if not data.is_lattice() or data.shape != config.shape:
        raise InvalidData(f"pottsExactLikelihood: data is not a {config.shape} lattice")
    if data.states != config.states:
        raise InvalidData(
            f"pottsExactLikelihood: data has k={data.states}, config k={config.states}"
        )
    stat = float(potts_statistic(data.observations, config.rows, config.cols))
    return config.theta * stat - potts_log_partition(config)


def potts_exact_likelihood(config: PottsConfig, data: Dataset) -> float:
    """Return p(y | θ) by brute-force normalization."""
    return math.exp(potts_exact_log_likelihood(config, data))


class PottsModel(Simulator):
    """Potts lattice simulated by single-site Gibbs sweeps."""

    def __init__(
        self,
        rows: int,
        cols: int,
        states: int,
        sweeps: int = DEFAULT_POTTS_SWEEPS,
    ):
        """PottsModel init."""
        super().__init__(POTTS_NAMES, rows * cols)
        if sweeps < 1:
            raise InvalidParam(f"PottsModel: sweeps={sweeps} < 1")
        self.lattice = PottsConfig(rows, cols, states)
        self.sweeps = sweeps

    def config(self, theta: ParamVector) -> PottsConfig:
        """Return PottsConfig at θ."""
        (value,) = self.check(theta)
        lattice = self.lattice
        return PottsConfig(lattice.rows, lattice.cols, lattice.states, value)

    def data(self) -> dict[str, Any]:
        """Return model description."""
        return {**super().data(), **self.lattice.data(), CFG_SWEEPS: self.sweeps}

    def make_dataset(self, values: npt.ArrayLike) -> Dataset:
        """Wrap raster-order states as a lattice Dataset."""
        return self.lattice.dataset(values)

    def default_statistic(self) -> StatisticSpec:
        """Return the neighbour agreement count."""
        return StatisticSpec(StatisticKind.POTTS)

    def simulate(
        self,
        theta: ParamVector,
        rng: np.random.Generator,
        size: int | None = None,
    ) -> Dataset:
        """Draw one lattice after `sweeps` Gibbs sweeps."""
        if size is not None and size != self.n:
            raise InvalidParam(f"PottsModel: lattice size is fixed at n={self.n}")
        return potts_gibbs_simulate(self.config(theta), self.sweeps, rng)

    def simulate_batch(
        self,
        theta: ParamVector,
        rng: np.random.Generator,
        replicates: int,
    ) -> npt.NDArray[np.int64]:
        """Draw `replicates` lattices in vectorized chunks."""
        config = self.config(theta)
        parts = []
        for start in range(0, replicates, POTTS_REPLICATE_CHUNK):
            count = min(POTTS_REPLICATE_CHUNK, replicates - start)
            _LOGGER.debug("simulate_batch: replicates %s..%s", start, start + count)
            parts.append(potts_gibbs_batch(config, self.sweeps, rng, count))
        return np.vstack(parts)
