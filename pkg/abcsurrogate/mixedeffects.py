"""ABC linear mixed-effects model."""

from __future__ import annotations

from dataclasses import dataclass, field
import math
from typing import Any

import numpy as np
import numpy.typing as npt

from .common import DesignColumn, NoiseFamily, StatisticKind
from .const import CFG_BLOCK_SIZES, CFG_DOF, CFG_NOISE, DEFAULT_T_DOF
from .core import Dataset, FloatArray, ParamVector, Simulator
from .exceptions import InvalidData, InvalidParam
from .summaries import StatisticSpec


@dataclass(frozen=True, eq=False)
class MixedEffectsConfig:
    """Block layout, fixed-effect design and noise family.

    Observation j of block k is y_jk = x_jkᵀβ + b_k + ε_jk with
    b_k ~ N(0, ζ²) and ε_jk ~ N(0, σ²) or σ·t_ν.
    """

    block_sizes: tuple[int, ...]
    design: FloatArray
    noise: NoiseFamily = NoiseFamily.NORMAL
    dof: float = DEFAULT_T_DOF
    blocks: npt.NDArray[np.int64] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        """MixedEffectsConfig validation."""
        if len(self.block_sizes) < 2:
            raise InvalidParam("MixedEffectsConfig: at least 2 blocks required")
        if any(size < 1 for size in self.block_sizes):
            raise InvalidParam(f"MixedEffectsConfig: empty block in {self.block_sizes}")
        design = np.array(self.design, dtype=np.float64)
        if design.ndim == 1:
            design = design[:, None]
        n = sum(self.block_sizes)
        if design.shape[0] != n:
            raise InvalidParam(
                f"MixedEffectsConfig: design has {design.shape[0]} rows, n={n}"
            )
        if np.linalg.matrix_rank(design) < design.shape[1]:
            raise InvalidParam("MixedEffectsConfig: design is not full column rank")
        if self.noise == NoiseFamily.UNKNOWN:
            raise InvalidParam("MixedEffectsConfig: unknown noise family")
        if not self.dof > 0.0:
            raise InvalidParam(f"MixedEffectsConfig: t dof {self.dof} <= 0")
        design.flags.writeable = False
        object.__setattr__(self, "design", design)
        blocks = np.repeat(np.arange(len(self.block_sizes)), self.block_sizes)
        blocks.flags.writeable = False
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        """Return sample size Σ J_k."""
        return sum(self.block_sizes)

    @property
    def coefficients(self) -> int:
        """Return number of fixed effects p."""
        return int(self.design.shape[1])

    def data(self) -> dict[str, Any]:
        """Return layout data."""
        data: dict[str, Any] = {
            CFG_BLOCK_SIZES: list(self.block_sizes),
            CFG_NOISE: str(self.noise),
        }
        if self.noise == NoiseFamily.STUDENT_T:
            data[CFG_DOF] = self.dof
        return data


def design_matrix(columns: tuple[DesignColumn, ...], n: int) -> FloatArray:
    """Return the n x p design of intercept and linear trend columns."""
    if not columns:
        raise InvalidParam("designMatrix: no design columns")
    built: list[FloatArray] = []
    for column in columns:
        if column == DesignColumn.INTERCEPT:
            built.append(np.ones(n))
        elif column == DesignColumn.TREND:
            built.append(np.linspace(0.0, 1.0, n))
        else:
            raise InvalidParam(f"designMatrix: unknown column {column}")
    return np.column_stack(built)


def mixed_effects_names(coefficients: int) -> tuple[str, ...]:
    """Return (beta1..betap, zeta, sigma)."""
    betas = tuple(f"beta{index}" for index in range(1, coefficients + 1))
    return betas + ("zeta", "sigma")


def mixed_effects_simulate(
    config: MixedEffectsConfig,
    beta: FloatArray,
    zeta: float,
    sigma: float,
    rng: np.random.Generator,
) -> Dataset:
    """Draw y = Xβ + b[block] + ε."""
    beta = np.asarray(beta, dtype=np.float64)
    if beta.size != config.coefficients:
        raise InvalidParam(
            f"mixedEffectsSimulate: {beta.size} coefficients, "
            f"design has {config.coefficients}"
        )
    if not (zeta >= 0.0 and sigma >= 0.0):
        raise InvalidParam(f"mixedEffectsSimulate: ζ={zeta}, σ={sigma} must be >= 0")
    effects = zeta * rng.standard_normal(len(config.block_sizes))
    if config.noise == NoiseFamily.STUDENT_T:
        noise = sigma * rng.standard_t(config.dof, config.n)
    else:
        noise = sigma * rng.standard_normal(config.n)
    y = config.design @ beta + effects[config.blocks] + noise
    return Dataset(y, blocks=config.blocks, design=config.design)


def method_of_moments(
    y: FloatArray, design: FloatArray, blocks: npt.NDArray[np.int64]
) -> FloatArray:
    """Return (β̂, ζ̂, σ̂) from OLS and one-way ANOVA of the residuals."""
    beta, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ beta
    counts = np.bincount(blocks)
    present = counts > 0
    sums = np.bincount(blocks, weights=resid)
    means = np.zeros_like(sums)
    means[present] = sums[present] / counts[present]
    blocks_present = int(present.sum())
    within_df = y.size - blocks_present
    within = 0.0
    if within_df > 0:
        within = float(np.sum((resid - means[blocks]) ** 2)) / within_df
    if blocks_present > 1:
        between = float(np.var(means[present], ddof=1))
        zeta_sq = max(between - within * float(np.mean(1.0 / counts[present])), 0.0)
    else:
        zeta_sq = 0.0
    return np.concatenate([beta, [math.sqrt(zeta_sq), math.sqrt(within)]])


class MixedEffectsModel(Simulator):
    """Linear mixed-effects model with random block intercepts."""

    def __init__(self, config: MixedEffectsConfig):
        """MixedEffectsModel init."""
        super().__init__(mixed_effects_names(config.coefficients), config.n)
        self.config = config

    def data(self) -> dict[str, Any]:
        """Return model description."""
        return {**super().data(), **self.config.data()}

    def make_dataset(self, values: npt.ArrayLike) -> Dataset:
        """Wrap responses with the configured blocks and design."""
        return Dataset(
            np.asarray(values), blocks=self.config.blocks, design=self.config.design
        )

    def default_statistic(self) -> StatisticSpec:
        """Return mean, variance components and OLS slopes."""
        return StatisticSpec(StatisticKind.MIXED_EFFECTS)

    def simulate(
        self,
        theta: ParamVector,
        rng: np.random.Generator,
        size: int | None = None,
    ) -> Dataset:
        """Draw one dataset on the configured design."""
        if size is not None and size != self.n:
            raise InvalidParam(f"MixedEffectsModel: design fixes n={self.n}")
        values = self.check(theta)
        p = self.config.coefficients
        return mixed_effects_simulate(
            self.config, values[:p], values[p], values[p + 1], rng
        )

    def estimate(self, data: Dataset, index: npt.NDArray[np.int64]) -> FloatArray:
        """Return method-of-moments estimates for each row of resample indices."""
        if data.blocks is None or data.design is None:
            raise InvalidData("MixedEffectsModel: dataset has no blocks or design")
        rows = np.atleast_2d(index)
        y, design, blocks = data.observations, data.design, data.blocks
        return np.vstack(
            [method_of_moments(y[row], design[row], blocks[row]) for row in rows]
        )
