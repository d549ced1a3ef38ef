"""ABC summary statistics, distances and smoothing kernels."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
import math
from typing import Any

import numpy as np
from scipy import stats

from .common import DistanceKind, KernelKind, StatisticKind
from .const import (
    CFG_BANDWIDTH,
    CFG_KIND,
    CFG_ORDERS,
    CFG_PROBS,
    CFG_SCALE,
    IDENTITY_MAX_SIZE,
    MAD_FLOOR,
    MIN_SCALE_PILOTS,
)
from .core import Dataset, FloatArray
from .exceptions import (
    DimensionMismatch,
    IncompatibleStatistic,
    InsufficientSamples,
    InvalidDistance,
    InvalidParam,
)

OCTILES: tuple[float, ...] = (0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875)
SQRT_2PI: float = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class StatisticSpec:
    """Summary statistic t(·) selection."""

    kind: StatisticKind
    orders: tuple[int, ...] = ()
    probs: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        """StatisticSpec validation."""
        if self.kind == StatisticKind.UNKNOWN:
            raise InvalidParam("StatisticSpec: unknown statistic kind")
        if self.kind == StatisticKind.MOMENTS:
            if not self.orders or min(self.orders) < 1:
                raise InvalidParam(
                    f"StatisticSpec: invalid moment orders {self.orders}"
                )
        if self.kind == StatisticKind.QUANTILES:
            if not self.probs or not all(0.0 <= p <= 1.0 for p in self.probs):
                raise InvalidParam(
                    f"StatisticSpec: invalid quantile probs {self.probs}"
                )

    @classmethod
    def octiles(cls) -> StatisticSpec:
        """Return the seven-octile statistic."""
        return cls(StatisticKind.QUANTILES, probs=OCTILES)

    def data(self) -> dict[str, Any]:
        """Return statistic data."""
        data: dict[str, Any] = {CFG_KIND: str(self.kind)}
        if self.orders:
            data[CFG_ORDERS] = list(self.orders)
        if self.probs:
            data[CFG_PROBS] = list(self.probs)
        return data


@dataclass(frozen=True)
class DistanceSpec:
    """Summary distance ρ selection."""

    kind: DistanceKind
    scale: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        """DistanceSpec validation."""
        if self.kind == DistanceKind.UNKNOWN:
            raise InvalidDistance("DistanceSpec: unknown distance kind")
        if self.kind == DistanceKind.SCALED_EUCLIDEAN and not self.scale:
            raise InvalidDistance("DistanceSpec: scaled distance without scales")
        if any(not value > 0 for value in self.scale):
            raise InvalidDistance(f"DistanceSpec: non-positive scale in {self.scale}")

    def data(self) -> dict[str, Any]:
        """Return distance data."""
        data: dict[str, Any] = {CFG_KIND: str(self.kind)}
        if self.scale:
            data[CFG_SCALE] = list(self.scale)
        return data


@dataclass(frozen=True)
class SmoothKernelSpec:
    """Smoothing kernel K_δ selection."""

    kind: KernelKind
    bandwidth: float

    def __post_init__(self) -> None:
        """SmoothKernelSpec validation."""
        if self.kind == KernelKind.UNKNOWN:
            raise InvalidParam("SmoothKernelSpec: unknown kernel kind")
        if not (self.bandwidth > 0 and math.isfinite(self.bandwidth)):
            raise InvalidParam(f"SmoothKernelSpec: bandwidth {self.bandwidth} <= 0")

    def data(self) -> dict[str, Any]:
        """Return kernel data."""
        return {CFG_KIND: str(self.kind), CFG_BANDWIDTH: self.bandwidth}


def lattice_edges(rows: int, cols: int) -> tuple[np.ndarray, np.ndarray]:
    """Return first-order neighbour pairs (i, l) of a free-boundary lattice."""
    index = np.arange(rows * cols).reshape(rows, cols)
    left = np.concatenate([index[:, :-1].ravel(), index[:-1, :].ravel()])
    right = np.concatenate([index[:, 1:].ravel(), index[1:, :].ravel()])
    return left, right


def potts_statistic(states: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Return neighbour agreement counts Σ δ(y_i, y_l) along the last axis."""
    left, right = lattice_edges(rows, cols)
    return np.sum(states[..., left] == states[..., right], axis=-1)


def _mixed_effects_summary(data: Dataset) -> FloatArray:
    """Grand mean, between-block and pooled within-block variance, OLS slopes."""
    if data.blocks is None or data.design is None:
        raise IncompatibleStatistic(
            "computeSummary: mixed-effects needs blocks and design"
        )
    y = data.observations
    labels, blocks = np.unique(data.blocks, return_inverse=True)
    if labels.size < 2:
        raise IncompatibleStatistic("computeSummary: mixed-effects needs >= 2 blocks")
    counts = np.bincount(blocks)
    means = np.bincount(blocks, weights=y) / counts
    within_df = y.size - labels.size
    within = (
        float(np.sum((y - means[blocks]) ** 2) / within_df) if within_df > 0 else 0.0
    )
    slopes, *_ = np.linalg.lstsq(data.design, y, rcond=None)
    return np.concatenate(
        [[float(np.mean(y)), float(np.var(means, ddof=1)), within], slopes]
    )


def compute_summary(spec: StatisticSpec, data: Dataset) -> FloatArray:
    """Return t(y) for the selected statistic."""
    if spec.kind == StatisticKind.POTTS:
        if not data.is_lattice() or data.shape is None:
            raise IncompatibleStatistic(
                "computeSummary: potts statistic needs lattice data"
            )
        rows, cols = data.shape
        return np.array(
            [potts_statistic(data.observations, rows, cols)], dtype=np.float64
        )
    if spec.kind == StatisticKind.MIXED_EFFECTS:
        return _mixed_effects_summary(data)
    if data.is_lattice():
        raise IncompatibleStatistic(f"computeSummary: {spec.kind} on lattice data")

    y = data.observations
    if spec.kind == StatisticKind.IDENTITY:
        if data.n > IDENTITY_MAX_SIZE:
            raise IncompatibleStatistic(
                f"computeSummary: identity statistic for n={data.n} "
                f"> {IDENTITY_MAX_SIZE}"
            )
        return np.array(y, dtype=np.float64)
    if spec.kind == StatisticKind.QUANTILES:
        return np.quantile(y, spec.probs)

    # Order 1 is the mean; higher orders are central moments.
    mean = float(np.mean(y))
    return np.array(
        [
            mean if order == 1 else float(np.mean((y - mean) ** order))
            for order in spec.orders
        ]
    )


def distance(spec: DistanceSpec, a: FloatArray, b: FloatArray) -> float:
    """Return ρ(a, b)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"distance: lengths {a.size} and {b.size} differ")
    diff = a - b
    if spec.kind == DistanceKind.SCALED_EUCLIDEAN:
        if len(spec.scale) != diff.size:
            raise DimensionMismatch(
                f"distance: {len(spec.scale)} scales for {diff.size} summaries"
            )
        diff = diff / np.asarray(spec.scale)
    return float(np.sqrt(np.dot(diff, diff)))


def estimate_scales(sims: Sequence[FloatArray]) -> tuple[float, ...]:
    """Return per-component MAD of pilot summaries, floored at MAD_FLOOR."""
    if len(sims) < MIN_SCALE_PILOTS:
        raise InsufficientSamples(
            f"estimateScales: {len(sims)} pilots < {MIN_SCALE_PILOTS}"
        )
    mad = stats.median_abs_deviation(np.vstack(sims), axis=0, scale=1.0)
    return tuple(float(value) for value in np.maximum(mad, MAD_FLOOR))


def smooth_kernel(spec: SmoothKernelSpec, rho: float) -> float:
    """Return K(ρ/δ); the Epanechnikov kernel is 0.75(1-u²) on |u| < 1."""
    u = rho / spec.bandwidth
    if spec.kind == KernelKind.GAUSSIAN:
        return math.exp(-0.5 * u * u) / SQRT_2PI
    if abs(u) >= 1.0:
        return 0.0
    return 0.75 * (1.0 - u * u)
