"""ABC bootstrap likelihood surrogate."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
import logging
import math

import numpy as np
import numpy.typing as npt
from scipy import stats

from .common import BandwidthRule
from .const import BL_MIN_INNER, BL_MIN_OUTER, BL_MIN_PAIRS
from .core import Dataset, FloatArray, ParamVector
from .exceptions import DimensionMismatch, InvalidSurrogate

_LOGGER = logging.getLogger(__name__)

Estimator = Callable[[Dataset, npt.NDArray[np.int64]], FloatArray]


def bandwidth(values: FloatArray, rule: BandwidthRule) -> float:
    """Return the KDE bandwidth h of a sample."""
    sd = float(np.std(values))
    factor = values.size ** (-0.2)
    if rule == BandwidthRule.SCOTT:
        return 1.06 * sd * factor
    spread = min(sd, float(stats.iqr(values)) / 1.34)
    if spread <= 0.0:
        spread = sd
    return 0.9 * spread * factor


def epanechnikov_density(point: float, values: FloatArray, h: float) -> float:
    """Return (1/(K h)) Σ ker((point - v_k)/h) with the Epanechnikov ker."""
    u = (point - values) / h
    inside = np.abs(u) < 1.0
    return float(np.sum(0.75 * (1.0 - u[inside] ** 2)) / (values.size * h))


class LocalQuadraticSmoother:
    """Scatterplot smoother: tricube-weighted local quadratic regression."""

    def __init__(self, x: FloatArray, y: FloatArray, span: float):
        """LocalQuadraticSmoother init."""
        order = np.argsort(x, kind="stable")
        self.x: FloatArray = np.asarray(x, dtype=np.float64)[order]
        self.y: FloatArray = np.asarray(y, dtype=np.float64)[order]
        self.neighbours: int = min(
            self.x.size, max(BL_MIN_PAIRS, math.ceil(span * self.x.size))
        )

    @property
    def lower(self) -> float:
        """Return smallest abscissa."""
        return float(self.x[0])

    @property
    def upper(self) -> float:
        """Return largest abscissa."""
        return float(self.x[-1])

    def local_fit(self, point: float) -> tuple[float, float]:
        """Return fitted value and slope at `point`."""
        offset = self.x - point
        dist = np.abs(offset)
        nearest = np.argsort(dist, kind="stable")[: self.neighbours]
        radius = float(dist[nearest].max())
        if radius == 0.0:
            return float(np.mean(self.y[nearest])), 0.0
        weights = (1.0 - (dist[nearest] / (radius * (1.0 + 1e-9))) ** 3) ** 3
        root = np.sqrt(weights)
        dx = offset[nearest]
        design = np.column_stack([np.ones_like(dx), dx, dx**2]) * root[:, None]
        coef, *_ = np.linalg.lstsq(design, self.y[nearest] * root, rcond=None)
        return float(coef[0]), float(coef[1])

    def __call__(self, point: float) -> float:
        """Evaluate the curve, extended linearly outside the data range."""
        if point < self.lower:
            value, slope = self.local_fit(self.lower)
            return value + slope * (point - self.lower)
        if point > self.upper:
            value, slope = self.local_fit(self.upper)
            return value + slope * (point - self.upper)
        return self.local_fit(point)[0]

    def extrapolated(self, point: float) -> bool:
        """Return if `point` lies outside the fitted range."""
        return point < self.lower or point > self.upper


@dataclass(frozen=True, eq=False)
class BootstrapFit:
    """Fitted log bootstrap likelihood, one smoothed curve per component."""

    estimate: FloatArray
    curves: tuple[LocalQuadraticSmoother, ...] = ()
    pairs: tuple[tuple[FloatArray, FloatArray], ...] = field(default=(), repr=False)
    degenerate: bool = False

    def log_likelihood(self, theta: ParamVector) -> float:
        """Return log L̂_BL(θ), the sum of per-component curves."""
        values = theta.array()
        if values.size != self.estimate.size:
            raise DimensionMismatch(
                f"BootstrapFit: expected d={self.estimate.size}, got {values.size}"
            )
        if self.degenerate:
            return 0.0 if np.array_equal(values, self.estimate) else -math.inf
        pairs = zip(self.curves, values, strict=True)
        return float(sum(curve(value) for curve, value in pairs))

    def extrapolated(self, theta: ParamVector) -> bool:
        """Return if any component of θ lies outside its fitted range."""
        if self.degenerate:
            return False
        return any(
            curve.extrapolated(value)
            for curve, value in zip(self.curves, theta.values, strict=True)
        )


def fit_bootstrap_likelihood(
    data: Dataset,
    estimator: Estimator,
    outer: int,
    inner: int,
    bandwidth_rule: BandwidthRule,
    span: float,
    rng: np.random.Generator,
) -> BootstrapFit:
    """Build the nested-bootstrap log likelihood curve.

    Stage one draws `outer` resamples of the data and their estimates θ*_j.
    Stage two draws `inner` resamples of each first-stage resample, and the
    Epanechnikov KDE of their estimates θ**_jk is evaluated at the data
    estimate θ̂_n. The pairs (θ*_j, log f̂_j(θ̂_n)) are smoothed per component.
    """
    if outer < BL_MIN_OUTER:
        raise InvalidSurrogate(f"fitBootstrapLikelihood: J={outer} < {BL_MIN_OUTER}")
    if inner < BL_MIN_INNER:
        raise InvalidSurrogate(f"fitBootstrapLikelihood: K={inner} < {BL_MIN_INNER}")
    if not 0.0 < span <= 1.0:
        raise InvalidSurrogate(f"fitBootstrapLikelihood: span {span} outside (0, 1]")
    if bandwidth_rule == BandwidthRule.UNKNOWN:
        raise InvalidSurrogate("fitBootstrapLikelihood: unknown bandwidth rule")

    n = data.n
    estimate = np.asarray(estimator(data, np.arange(n)[None, :])[0], dtype=np.float64)
    first = rng.integers(0, n, size=(outer, n))
    theta_star = np.asarray(estimator(data, first), dtype=np.float64)
    dims = estimate.size

    log_density = np.full((outer, dims), -math.inf)
    spikes = 0
    for j in range(outer):
        second = first[j][rng.integers(0, n, size=(inner, n))]
        theta_second = np.asarray(estimator(data, second), dtype=np.float64)
        for comp in range(dims):
            h = bandwidth(theta_second[:, comp], bandwidth_rule)
            if h <= 0.0:
                spikes += 1
                continue
            density = epanechnikov_density(estimate[comp], theta_second[:, comp], h)
            if density > 0.0:
                log_density[j, comp] = math.log(density)

    if spikes == outer * dims:
        _LOGGER.debug(
            "fitBootstrapLikelihood: zero bootstrap variance, spike at %s", estimate
        )
        return BootstrapFit(estimate, degenerate=True)

    curves: list[LocalQuadraticSmoother] = []
    pairs: list[tuple[FloatArray, FloatArray]] = []
    for comp in range(dims):
        keep = np.isfinite(log_density[:, comp])
        if int(keep.sum()) < BL_MIN_PAIRS:
            _LOGGER.debug(
                "fitBootstrapLikelihood: component %s has no usable pairs", comp
            )
            return BootstrapFit(estimate, degenerate=True)
        if not keep.all():
            _LOGGER.debug(
                "fitBootstrapLikelihood: dropped %s zero-density pairs of component %s",
                int((~keep).sum()),
                comp,
            )
        x = theta_star[keep, comp]
        y = log_density[keep, comp]
        pairs.append((x, y))
        curves.append(LocalQuadraticSmoother(x, y, span))

    return BootstrapFit(estimate, tuple(curves), tuple(pairs))
