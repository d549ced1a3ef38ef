"""ABC surrogate likelihood kernels."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
import logging
import math
from typing import Any, ClassVar

import numpy as np
from scipy import linalg

from .bootstrap import BootstrapFit
from .common import BandwidthRule, SurrogateMethod
from .const import (
    BL_MIN_INNER,
    BL_MIN_OUTER,
    CFG_BANDWIDTH_RULE,
    CFG_CONSTRAINTS,
    CFG_DRAWS,
    CFG_EPSILON,
    CFG_INNER,
    CFG_KIND,
    CFG_OUTER,
    CFG_RIDGE,
    CFG_SPAN,
    DEFAULT_BL_INNER,
    DEFAULT_BL_OUTER,
    DEFAULT_BL_SPAN,
    DEFAULT_COUPLING_DRAWS,
    DEFAULT_RIDGE,
)
from .core import FloatArray, ParamVector, Simulator
from .empirical import ConstraintSet, EmpiricalFit
from .exceptions import (
    CholeskyFailure,
    CouplingNotAvailable,
    DimensionMismatch,
    InsufficientSamples,
    InvalidSurrogate,
    SurrogateMismatch,
)
from .summaries import (
    DistanceSpec,
    SmoothKernelSpec,
    StatisticSpec,
    compute_summary,
    distance,
    smooth_kernel,
)

_LOGGER = logging.getLogger(__name__)

LOG_2PI: float = math.log(2.0 * math.pi)
LOG_FLOAT_MAX: float = math.log(float(np.finfo(np.float64).max))


@dataclass(frozen=True)
class RejectionKind:
    """R-ABC: indicator kernel 1(ρ ≤ ε)."""

    method: ClassVar[SurrogateMethod] = SurrogateMethod.REJECTION

    epsilon: float = math.inf

    def __post_init__(self) -> None:
        """RejectionKind validation."""
        if not self.epsilon >= 0.0:
            raise InvalidSurrogate(f"rejection: ε={self.epsilon} < 0")

    def data(self) -> dict[str, Any]:
        """Return kind data."""
        return {CFG_KIND: str(self.method), CFG_EPSILON: self.epsilon}


@dataclass(frozen=True)
class KernelSmoothKind:
    """K-ABC: smooth kernel K_δ(ρ) without tolerance."""

    method: ClassVar[SurrogateMethod] = SurrogateMethod.KERNEL

    kernel: SmoothKernelSpec

    def data(self) -> dict[str, Any]:
        """Return kind data."""
        return {CFG_KIND: str(self.method), **self.kernel.data()}


@dataclass(frozen=True)
class CoupledKind:
    """C-ABC: indicator kernel marginalized over M shared coupling draws."""

    method: ClassVar[SurrogateMethod] = SurrogateMethod.COUPLED

    epsilon: float = math.inf
    draws: int = DEFAULT_COUPLING_DRAWS

    def __post_init__(self) -> None:
        """CoupledKind validation."""
        if not self.epsilon >= 0.0:
            raise InvalidSurrogate(f"coupled: ε={self.epsilon} < 0")
        if self.draws < 1:
            raise InvalidSurrogate(f"coupled: M={self.draws} < 1")

    def data(self) -> dict[str, Any]:
        """Return kind data."""
        return {
            CFG_KIND: str(self.method),
            CFG_EPSILON: self.epsilon,
            CFG_DRAWS: self.draws,
        }


@dataclass(frozen=True)
class SyntheticKind:
    """SL-ABC: multivariate normal fit to N synthetic summaries."""

    method: ClassVar[SurrogateMethod] = SurrogateMethod.SYNTHETIC

    ridge: float = DEFAULT_RIDGE

    def __post_init__(self) -> None:
        """SyntheticKind validation."""
        if not self.ridge >= 0.0:
            raise InvalidSurrogate(f"synthetic: ridge {self.ridge} < 0")

    def data(self) -> dict[str, Any]:
        """Return kind data."""
        return {CFG_KIND: str(self.method), CFG_RIDGE: self.ridge}


@dataclass(frozen=True)
class EmpiricalKind:
    """EL-ABC: empirical likelihood under moment constraints."""

    method: ClassVar[SurrogateMethod] = SurrogateMethod.EMPIRICAL

    constraints: ConstraintSet

    def data(self) -> dict[str, Any]:
        """Return kind data."""
        return {CFG_KIND: str(self.method), CFG_CONSTRAINTS: str(self.constraints.kind)}


@dataclass(frozen=True)
class BootstrapKind:
    """BL-ABC: nested bootstrap likelihood curve."""

    method: ClassVar[SurrogateMethod] = SurrogateMethod.BOOTSTRAP

    outer: int = DEFAULT_BL_OUTER
    inner: int = DEFAULT_BL_INNER
    bandwidth_rule: BandwidthRule = BandwidthRule.SILVERMAN
    span: float = DEFAULT_BL_SPAN

    def __post_init__(self) -> None:
        """BootstrapKind validation."""
        if self.outer < BL_MIN_OUTER:
            raise InvalidSurrogate(f"bootstrap: J={self.outer} < {BL_MIN_OUTER}")
        if self.inner < BL_MIN_INNER:
            raise InvalidSurrogate(f"bootstrap: K={self.inner} < {BL_MIN_INNER}")
        if self.bandwidth_rule == BandwidthRule.UNKNOWN:
            raise InvalidSurrogate("bootstrap: unknown bandwidth rule")
        if not 0.0 < self.span <= 1.0:
            raise InvalidSurrogate(f"bootstrap: span {self.span} outside (0, 1]")

    def data(self) -> dict[str, Any]:
        """Return kind data."""
        return {
            CFG_KIND: str(self.method),
            CFG_OUTER: self.outer,
            CFG_INNER: self.inner,
            CFG_BANDWIDTH_RULE: str(self.bandwidth_rule),
            CFG_SPAN: self.span,
        }


SurrogateKind = (
    RejectionKind
    | KernelSmoothKind
    | CoupledKind
    | SyntheticKind
    | EmpiricalKind
    | BootstrapKind
)


@dataclass(frozen=True, eq=False)
class DistanceFit:
    """Distances ρ of the N (or M coupled) synthetic summaries to t(y)."""

    distances: FloatArray


@dataclass(frozen=True, eq=False)
class SyntheticFit:
    """Synthetic likelihood estimate (μ̂, Σ̂)."""

    mean: FloatArray
    cov: FloatArray


FittedSurrogate = DistanceFit | SyntheticFit | EmpiricalFit | BootstrapFit


def weight_rejection(epsilon: float, rho: float) -> float:
    """Return 1(ρ ≤ ε)."""
    return 1.0 if rho <= epsilon else 0.0


def weight_kernel_smooth(spec: SmoothKernelSpec, rho: float) -> float:
    """Return K_δ(ρ)."""
    return smooth_kernel(spec, rho)


def fit_coupled(
    model: Simulator,
    theta: ParamVector,
    u_draws: Sequence[FloatArray],
    obs_summary: FloatArray,
    stat_spec: StatisticSpec,
    dist_spec: DistanceSpec,
) -> DistanceFit:
    """Return distances of the coupled datasets z(u_m, θ) to t(y)."""
    if not model.has_coupling():
        raise CouplingNotAvailable(
            f"weightCoupled: {type(model).__name__} has no coupling"
        )
    summaries = [compute_summary(stat_spec, model.couple(theta, u)) for u in u_draws]
    return DistanceFit(
        np.array([distance(dist_spec, obs_summary, summary) for summary in summaries])
    )


def weight_coupled(
    model: Simulator,
    theta: ParamVector,
    u_draws: Sequence[FloatArray],
    epsilon: float,
    obs_summary: FloatArray,
    stat_spec: StatisticSpec,
    dist_spec: DistanceSpec,
) -> float:
    """Return (1/M) Σ_m 1(ρ(t(y), t(z(u_m, θ))) ≤ ε)."""
    fit = fit_coupled(model, theta, u_draws, obs_summary, stat_spec, dist_spec)
    return float(np.mean(fit.distances <= epsilon))


def fit_synthetic_normal(summaries: Sequence[FloatArray], ridge: float) -> SyntheticFit:
    """Return MLE (μ̂, Σ̂) of N summaries with a trace-scaled ridge."""
    if len(summaries) < 2:
        raise InsufficientSamples(f"fitSyntheticNormal: N={len(summaries)} < 2")
    stack = np.vstack([np.atleast_1d(summary) for summary in summaries])
    stack = stack.astype(np.float64)
    dims = stack.shape[1]
    mean = stack.mean(axis=0)
    centred = stack - mean
    cov = centred.T @ centred / stack.shape[0]
    trace = float(np.trace(cov))
    scale = trace / dims if trace > 0.0 else 1.0
    cov = cov + ridge * scale * np.eye(dims)
    return SyntheticFit(mean, cov)


def log_weight_synthetic_normal(fit: SyntheticFit, obs: FloatArray) -> float:
    """Return log n(t(y) | μ̂, Σ̂)."""
    obs = np.atleast_1d(np.asarray(obs, dtype=np.float64))
    if obs.shape != fit.mean.shape:
        raise DimensionMismatch(
            f"weightSyntheticNormal: {obs.size} summaries for a {fit.mean.size}-d fit"
        )
    try:
        chol = linalg.cholesky(fit.cov, lower=True)
    except linalg.LinAlgError as err:
        raise CholeskyFailure(f"weightSyntheticNormal: {err}, ridge too small") from err
    white = linalg.solve_triangular(chol, obs - fit.mean, lower=True)
    log_det = 2.0 * float(np.sum(np.log(np.diag(chol))))
    return -0.5 * (obs.size * LOG_2PI + log_det + float(white @ white))


def weight_synthetic_normal(fit: SyntheticFit, obs: FloatArray) -> float:
    """Return n(t(y) | μ̂, Σ̂)."""
    return math.exp(log_weight_synthetic_normal(fit, obs))


def _log(value: float) -> float:
    return math.log(value) if value > 0.0 else -math.inf


def log_weight_from_surrogate(
    kind: SurrogateKind,
    fit: FittedSurrogate,
    theta: ParamVector,
    obs_summary: FloatArray,
) -> float:
    """Return the log IS weight log K(t(y) | η̂_θ) for a matching fit."""
    if isinstance(kind, RejectionKind | CoupledKind) and isinstance(fit, DistanceFit):
        return _log(float(np.mean(fit.distances <= kind.epsilon)))
    if isinstance(kind, KernelSmoothKind) and isinstance(fit, DistanceFit):
        return _log(
            float(np.mean([smooth_kernel(kind.kernel, rho) for rho in fit.distances]))
        )
    if isinstance(kind, SyntheticKind) and isinstance(fit, SyntheticFit):
        return log_weight_synthetic_normal(fit, obs_summary)
    if isinstance(kind, EmpiricalKind) and isinstance(fit, EmpiricalFit):
        return fit.log_el
    if isinstance(kind, BootstrapKind) and isinstance(fit, BootstrapFit):
        return fit.log_likelihood(theta)
    raise SurrogateMismatch(
        f"weightFromSurrogate: {type(fit).__name__} does not match {kind.method}"
    )


def weight_from_surrogate(
    kind: SurrogateKind,
    fit: FittedSurrogate,
    theta: ParamVector,
    obs_summary: FloatArray,
) -> float:
    """Return the IS weight, exp of the log weight.

    Underflow maps to 0 and overflow to +inf, the latter logged.
    """
    log_weight = log_weight_from_surrogate(kind, fit, theta, obs_summary)
    if log_weight == -math.inf:
        return 0.0
    if log_weight > LOG_FLOAT_MAX:
        _LOGGER.warning(
            "weightFromSurrogate: log weight %s overflows, use the log weight",
            log_weight,
        )
        return math.inf
    return math.exp(log_weight)
