"""ABC importance sampling and Metropolis-Hastings drivers."""

from __future__ import annotations

import asyncio
from asyncio import Semaphore
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace
import logging
import math
from typing import Any, Protocol

import numpy as np

from .bootstrap import BootstrapFit, fit_bootstrap_likelihood
from .common import DistanceKind, SamplerKind, StreamDomain, SurrogateMethod
from .const import (
    ABC_ACCEPTANCE_RATE,
    ABC_ACCEPTED,
    ABC_DEGENERATE,
    ABC_EPSILON,
    ABC_ESS,
    ABC_EXTRAPOLATED,
    ABC_ITERATIONS,
    ABC_METHOD,
    ABC_NAMES,
    ABC_SAMPLER,
    ABC_SYNTHETIC_SETS,
    DEFAULT_CHUNK_SIZE,
    DEFAULT_ITERATIONS,
    DEFAULT_MAX_ITERATIONS_FACTOR,
    DEFAULT_PILOT_SIZE,
    DEFAULT_QUANTILE,
    DEFAULT_SCALE_PILOT_SIZE,
    DEFAULT_SL_SETS,
    DEFAULT_WORKERS,
)
from .core import Dataset, FloatArray, ParamVector, RngStream, Simulator
from .empirical import fit_empirical_likelihood
from .exceptions import (
    DegenerateSample,
    InsufficientSamples,
    InvalidParam,
    InvalidSurrogate,
    InvalidTolerance,
    InvalidWeight,
)
from .prior import Prior
from .summaries import (
    DistanceSpec,
    StatisticSpec,
    compute_summary,
    distance,
    estimate_scales,
)
from .surrogate import (
    BootstrapKind,
    CoupledKind,
    DistanceFit,
    EmpiricalKind,
    FittedSurrogate,
    KernelSmoothKind,
    RejectionKind,
    SurrogateKind,
    SyntheticKind,
    fit_coupled,
    fit_synthetic_normal,
    log_weight_from_surrogate,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class FixedTolerance:
    """Fixed tolerance ε."""

    epsilon: float

    def __post_init__(self) -> None:
        """FixedTolerance validation."""
        if not self.epsilon >= 0.0:
            raise InvalidTolerance(f"FixedTolerance: ε={self.epsilon} < 0")


@dataclass(frozen=True)
class QuantileTolerance:
    """Tolerance ε chosen as the q-th quantile of pilot distances."""

    quantile: float = DEFAULT_QUANTILE
    pilot_size: int = DEFAULT_PILOT_SIZE

    def __post_init__(self) -> None:
        """QuantileTolerance validation."""
        if not 0.0 < self.quantile < 1.0:
            raise InvalidTolerance(
                f"QuantileTolerance: q={self.quantile} outside (0, 1)"
            )
        if self.pilot_size < 1:
            raise InvalidTolerance(
                f"QuantileTolerance: pilot size {self.pilot_size} < 1"
            )


ToleranceRule = FixedTolerance | QuantileTolerance


def default_synthetic_sets(method: SurrogateMethod) -> int:
    """Return the default number N of synthetic sets per iteration."""
    if method == SurrogateMethod.SYNTHETIC:
        return DEFAULT_SL_SETS
    if method in (SurrogateMethod.KERNEL, SurrogateMethod.REJECTION):
        return 1
    return 0


@dataclass(frozen=True, kw_only=True)
class SamplerConfig:
    """Settings shared by the IS and MH drivers.

    `statistic` defaults to the model's own statistic and `distance` to a
    MAD-scaled Euclidean distance estimated from a prior-predictive pilot.
    When `tolerance` is unset the surrogate's own ε is used.
    """

    iterations: int = DEFAULT_ITERATIONS
    surrogate: SurrogateKind = field(default_factory=RejectionKind)
    statistic: StatisticSpec | None = None
    distance: DistanceSpec | None = None
    tolerance: ToleranceRule | None = None
    seed: int = 0
    synthetic_sets: int | None = None
    synthetic_size: int | None = None

    def __post_init__(self) -> None:
        """SamplerConfig validation."""
        method = self.surrogate.method
        name = type(self).__name__
        if self.iterations < 1:
            raise InvalidParam(f"{name}: S={self.iterations} < 1")
        if self.synthetic_size is not None and self.synthetic_size < 1:
            raise InvalidParam(f"{name}: synthetic size {self.synthetic_size} < 1")
        if self.tolerance is not None and not method.uses_tolerance():
            raise InvalidTolerance(f"{name}: {method} has no tolerance")
        sets = self.sets
        if method == SurrogateMethod.SYNTHETIC and sets < 2:
            raise InvalidSurrogate(f"{name}: N ≥ 2 required, got N={sets}")
        if method.simulates() and sets < 1:
            raise InvalidSurrogate(f"{name}: N ≥ 1 required, got N={sets}")
        if not method.simulates() and sets != 0:
            raise InvalidSurrogate(f"{name}: {method} uses N=0, got N={sets}")

    @property
    def sets(self) -> int:
        """Return the number N of synthetic sets per iteration."""
        if self.synthetic_sets is None:
            return default_synthetic_sets(self.surrogate.method)
        return self.synthetic_sets


@dataclass(frozen=True, kw_only=True)
class RunConfig(SamplerConfig):
    """ABC-IS run configuration."""

    workers: int = DEFAULT_WORKERS
    chunk_size: int = DEFAULT_CHUNK_SIZE
    min_accepted: int | None = None
    max_iterations: int | None = None

    def __post_init__(self) -> None:
        """RunConfig validation."""
        super().__post_init__()
        if self.workers < 1:
            raise InvalidParam(f"RunConfig: workers={self.workers} < 1")
        if self.chunk_size < 1:
            raise InvalidParam(f"RunConfig: chunk size {self.chunk_size} < 1")
        if self.min_accepted is not None:
            if not self.surrogate.method.uses_tolerance():
                raise InvalidParam(
                    "RunConfig: min accepted needs an ε kernel, "
                    f"not {self.surrogate.method}"
                )
            if self.min_accepted < 1:
                raise InvalidParam(f"RunConfig: min accepted {self.min_accepted} < 1")
        if self.max_iterations is not None and self.max_iterations < self.iterations:
            raise InvalidParam(
                f"RunConfig: max iterations {self.max_iterations} < S={self.iterations}"
            )

    @property
    def iteration_limit(self) -> int:
        """Return the iteration cap when running to `min_accepted`."""
        if self.max_iterations is None:
            return DEFAULT_MAX_ITERATIONS_FACTOR * self.iterations
        return self.max_iterations


class Proposal(Protocol):
    """MH proposal kernel q(θ* | θ)."""

    def propose(self, theta: ParamVector, rng: np.random.Generator) -> ParamVector:
        """Draw θ* ~ q(· | θ)."""

    def log_ratio(self, current: ParamVector, candidate: ParamVector) -> float:
        """Return log q(θ | θ*) - log q(θ* | θ)."""


@dataclass(frozen=True)
class RandomWalkProposal:
    """Symmetric Gaussian random walk."""

    scale: tuple[float, ...]

    def propose(self, theta: ParamVector, rng: np.random.Generator) -> ParamVector:
        """Draw θ* = θ + scale·ξ, ξ ~ N(0, I)."""
        step = np.asarray(self.scale) * rng.standard_normal(len(self.scale))
        return ParamVector.from_array(theta.array() + step, theta.names)

    def log_ratio(self, current: ParamVector, candidate: ParamVector) -> float:
        """Return 0, the walk is symmetric."""
        return 0.0


@dataclass(frozen=True, kw_only=True)
class MhConfig(SamplerConfig):
    """ABC-MH chain configuration."""

    proposal_scale: tuple[float, ...] = ()
    burn_in: int = 0
    proposal: Proposal | None = None

    def __post_init__(self) -> None:
        """MhConfig validation."""
        super().__post_init__()
        if self.proposal is None:
            if not self.proposal_scale:
                raise InvalidParam("MhConfig: no proposal scale")
            if any(not scale >= 0.0 for scale in self.proposal_scale):
                raise InvalidParam(
                    f"MhConfig: negative proposal scale {self.proposal_scale}"
                )
        if not 0 <= self.burn_in < self.iterations:
            raise InvalidParam(
                f"MhConfig: burn-in {self.burn_in} outside [0, S={self.iterations})"
            )

    def get_proposal(self) -> Proposal:
        """Return the configured proposal, a random walk by default."""
        if self.proposal is not None:
            return self.proposal
        return RandomWalkProposal(self.proposal_scale)


@dataclass(frozen=True, eq=False)
class WeightedSample:
    """Sampler output (θ_s, ω_s, ω̄_s) with diagnostics."""

    thetas: FloatArray
    names: tuple[str, ...]
    log_weights: FloatArray
    raw_weights: FloatArray
    norm_weights: FloatArray
    ess: float
    accepted_count: int
    degenerate: bool
    method: SurrogateMethod
    sampler: SamplerKind = SamplerKind.IMPORTANCE
    epsilon: float | None = None
    synthetic_sets: int = 0
    distances: FloatArray | None = None
    pilot_distances: FloatArray | None = None
    extrapolated: int = 0
    acceptance_rate: float | None = None

    @property
    def size(self) -> int:
        """Return sample size S."""
        return int(self.thetas.shape[0])

    @property
    def draws(self) -> list[tuple[ParamVector, float, float]]:
        """Return (θ_s, ω_s, ω̄_s) triples."""
        return [
            (ParamVector.from_array(theta, self.names), float(raw), float(norm))
            for theta, raw, norm in zip(
                self.thetas, self.raw_weights, self.norm_weights, strict=True
            )
        ]

    def data(self) -> dict[str, Any]:
        """Return sample summary data."""
        data: dict[str, Any] = {
            ABC_ACCEPTED: self.accepted_count,
            ABC_DEGENERATE: self.degenerate,
            ABC_ESS: self.ess,
            ABC_ITERATIONS: self.size,
            ABC_METHOD: str(self.method),
            ABC_NAMES: list(self.names),
            ABC_SAMPLER: str(self.sampler),
            ABC_SYNTHETIC_SETS: self.synthetic_sets,
        }
        if self.epsilon is not None:
            data[ABC_EPSILON] = self.epsilon
        if self.method == SurrogateMethod.BOOTSTRAP:
            data[ABC_EXTRAPOLATED] = self.extrapolated
        if self.acceptance_rate is not None:
            data[ABC_ACCEPTANCE_RATE] = self.acceptance_rate
        return data


def normalize_weights(raw: Sequence[float] | FloatArray) -> FloatArray:
    """Return ω̄_s = ω_s / Σω_j, all zeros when Σω_j = 0."""
    weights = np.asarray(raw, dtype=np.float64)
    if not np.all(np.isfinite(weights)):
        raise InvalidWeight("normalizeWeights: non-finite weight")
    if np.any(weights < 0.0):
        raise InvalidWeight("normalizeWeights: negative weight")
    total = float(weights.sum())
    if total <= 0.0:
        return np.zeros_like(weights)
    return weights / total


def normalize_log_weights(log_weights: Sequence[float] | FloatArray) -> FloatArray:
    """Return normalized weights from log weights, shifted by their maximum."""
    values = np.asarray(log_weights, dtype=np.float64)
    if np.any(np.isnan(values)) or np.any(values == math.inf):
        raise InvalidWeight("normalizeWeights: NaN or +inf log weight")
    if values.size == 0 or np.all(values == -math.inf):
        return np.zeros_like(values)
    shifted = np.exp(values - values.max())
    return shifted / shifted.sum()


def effective_sample_size(normalized: Sequence[float] | FloatArray) -> float:
    """Return 1/Σω̄_s², 0 for an all-zero (degenerate) input."""
    weights = np.asarray(normalized, dtype=np.float64)
    if np.any(weights < 0.0):
        raise InvalidWeight("effectiveSampleSize: negative weight")
    square = float(np.dot(weights, weights))
    if square == 0.0:
        return 0.0
    return 1.0 / square


def select_tolerance(
    rule: ToleranceRule, pilot_distances: Sequence[float] | FloatArray
) -> float:
    """Return ε for a tolerance rule, the q-th quantile of pilot distances."""
    if isinstance(rule, FixedTolerance):
        return rule.epsilon
    distances = np.asarray(pilot_distances, dtype=np.float64)
    if distances.size == 0:
        raise InvalidTolerance("selectTolerance: empty pilot")
    if not 0.0 < rule.quantile < 1.0:
        raise InvalidTolerance(f"selectTolerance: q={rule.quantile} outside (0, 1)")
    if distances.size != rule.pilot_size:
        _LOGGER.debug(
            "selectTolerance: %s pilot distances for pilot size %s",
            distances.size,
            rule.pilot_size,
        )
    return float(np.quantile(distances, rule.quantile))


def _positive(sample: WeightedSample, func: str) -> tuple[FloatArray, FloatArray]:
    if sample.degenerate or not np.any(sample.norm_weights > 0.0):
        raise DegenerateSample(f"{func}: degenerate sample, all weights are zero")
    keep = sample.norm_weights > 0.0
    weights = sample.norm_weights[keep]
    return sample.thetas[keep], weights / weights.sum()


def posterior_expectation(
    sample: WeightedSample,
    g: Callable[[ParamVector], Any] | None = None,
) -> FloatArray:
    """Return Σ ω̄_s g(θ_s), the posterior mean for g = identity."""
    thetas, weights = _positive(sample, "posteriorExpectation")
    if g is None:
        values = thetas
    else:
        points = [ParamVector.from_array(theta, sample.names) for theta in thetas]
        values = np.array(
            [np.atleast_1d(np.asarray(g(point))) for point in points],
            dtype=np.float64,
        )
    return np.asarray(weights @ values, dtype=np.float64)


def posterior_sd(sample: WeightedSample) -> FloatArray:
    """Return the weighted posterior standard deviation per component."""
    thetas, weights = _positive(sample, "posteriorSd")
    mean = weights @ thetas
    return np.sqrt(np.maximum(weights @ (thetas - mean) ** 2, 0.0))


def weighted_quantiles(
    values: FloatArray, weights: FloatArray, probs: Sequence[float]
) -> FloatArray:
    """Return inf{x : F(x) ≥ p} of the weighted empirical CDF, per p."""
    order = np.argsort(values, kind="stable")
    cdf = np.cumsum(weights[order])
    cdf = cdf / cdf[-1]
    targets = np.asarray(probs, dtype=np.float64) - 1e-12
    index = np.searchsorted(cdf, targets, side="left")
    return values[order][np.clip(index, 0, values.size - 1)]


def posterior_quantiles(sample: WeightedSample, probs: Sequence[float]) -> FloatArray:
    """Return the len(probs) x d matrix of weighted posterior quantiles."""
    if any(not 0.0 <= p <= 1.0 for p in probs):
        raise InvalidParam(
            f"posteriorQuantiles: probabilities {list(probs)} outside [0, 1]"
        )
    thetas, weights = _positive(sample, "posteriorQuantiles")
    return np.column_stack(
        [
            weighted_quantiles(thetas[:, comp], weights, probs)
            for comp in range(thetas.shape[1])
        ]
    )


def tolerance_diagnostics(
    sample: WeightedSample, epsilons: Sequence[float]
) -> list[tuple[float, int, float]]:
    """Return (ε, accepted count, ESS) over a tolerance grid.

    Weights are recomputed from the stored per-iteration distances, so no
    new simulations are drawn.
    """
    if sample.distances is None:
        raise InvalidTolerance(
            f"toleranceDiagnostics: {sample.method} stores no distances"
        )
    rows: list[tuple[float, int, float]] = []
    for epsilon in epsilons:
        weights = np.mean(sample.distances <= epsilon, axis=1)
        rows.append(
            (
                float(epsilon),
                int(np.count_nonzero(weights)),
                effective_sample_size(normalize_weights(weights)),
            )
        )
    return rows


@dataclass(frozen=True, eq=False)
class PilotResult:
    """Prior-predictive pilot draws and their distances to t(y)."""

    thetas: FloatArray
    summaries: FloatArray
    distances: FloatArray
    distance: DistanceSpec


def run_pilot(
    model: Simulator,
    prior: Prior,
    observed: Dataset,
    statistic: StatisticSpec,
    distance_spec: DistanceSpec | None,
    seed: int,
    count: int,
    size: int | None = None,
) -> PilotResult:
    """Simulate `count` prior-predictive summaries from the pilot streams.

    Without a distance spec the MAD scales of the pilot summaries define a
    scaled Euclidean distance.
    """
    if count < 1:
        raise InsufficientSamples(f"pilot: size {count} < 1")
    obs_summary = compute_summary(statistic, observed)
    thetas: list[FloatArray] = []
    summaries: list[FloatArray] = []
    for stream_id in range(count):
        rng = RngStream(seed, stream_id, StreamDomain.PILOT).generator()
        theta = prior.sample(rng)
        thetas.append(theta.array())
        summaries.append(compute_summary(statistic, model.simulate(theta, rng, size)))
    if distance_spec is None:
        scales = estimate_scales(summaries[:DEFAULT_SCALE_PILOT_SIZE])
        distance_spec = DistanceSpec(DistanceKind.SCALED_EUCLIDEAN, scales)
        _LOGGER.debug("pilot: MAD scales %s", scales)
    distances = np.array([distance(distance_spec, obs_summary, s) for s in summaries])
    return PilotResult(
        np.vstack(thetas), np.vstack(summaries), distances, distance_spec
    )


@dataclass(frozen=True, eq=False)
class _RunContext:
    model: Simulator
    prior: Prior
    observed: Dataset
    kind: SurrogateKind
    statistic: StatisticSpec
    distance: DistanceSpec | None
    obs_summary: FloatArray
    sets: int
    size: int | None
    u_draws: tuple[FloatArray, ...] = ()
    bootstrap: BootstrapFit | None = None
    pilot: PilotResult | None = None

    @property
    def epsilon(self) -> float | None:
        if isinstance(self.kind, RejectionKind | CoupledKind):
            return self.kind.epsilon
        return None

    def simulate_summaries(
        self, theta: ParamVector, rng: np.random.Generator
    ) -> list[FloatArray]:
        return [
            compute_summary(self.statistic, self.model.simulate(theta, rng, self.size))
            for _ in range(self.sets)
        ]

    def fit(self, theta: ParamVector, rng: np.random.Generator) -> FittedSurrogate:
        """Return η̂_θ from the synthetic sets drawn with `rng`."""
        kind = self.kind
        if isinstance(kind, RejectionKind | KernelSmoothKind):
            assert self.distance is not None
            return DistanceFit(
                np.array(
                    [
                        distance(self.distance, self.obs_summary, summary)
                        for summary in self.simulate_summaries(theta, rng)
                    ]
                )
            )
        if isinstance(kind, CoupledKind):
            assert self.distance is not None
            return fit_coupled(
                self.model,
                theta,
                self.u_draws,
                self.obs_summary,
                self.statistic,
                self.distance,
            )
        if isinstance(kind, SyntheticKind):
            return fit_synthetic_normal(self.simulate_summaries(theta, rng), kind.ridge)
        if isinstance(kind, EmpiricalKind):
            return fit_empirical_likelihood(self.observed, theta, kind.constraints)
        assert self.bootstrap is not None
        return self.bootstrap

    def log_weight(
        self, theta: ParamVector, rng: np.random.Generator
    ) -> tuple[float, FittedSurrogate]:
        fit = self.fit(theta, rng)
        return log_weight_from_surrogate(self.kind, fit, theta, self.obs_summary), fit


def _prepare(
    model: Simulator,
    prior: Prior,
    observed: Dataset,
    config: SamplerConfig,
) -> _RunContext:
    if prior.dimension != model.dimension:
        raise InvalidParam(
            f"{type(config).__name__}: prior d={prior.dimension}, "
            f"model d={model.dimension}"
        )
    kind = config.surrogate
    method = kind.method
    statistic = config.statistic or model.default_statistic()
    summarizes = method.uses_distance() or method == SurrogateMethod.SYNTHETIC
    obs_summary = compute_summary(statistic, observed) if summarizes else np.zeros(0)

    distance_spec = config.distance
    pilot: PilotResult | None = None
    if method.uses_distance():
        rule = config.tolerance
        if isinstance(rule, QuantileTolerance):
            pilot = run_pilot(
                model,
                prior,
                observed,
                statistic,
                distance_spec,
                config.seed,
                rule.pilot_size,
                config.synthetic_size,
            )
        elif distance_spec is None:
            pilot = run_pilot(
                model,
                prior,
                observed,
                statistic,
                None,
                config.seed,
                DEFAULT_SCALE_PILOT_SIZE,
                config.synthetic_size,
            )
        if pilot is not None:
            distance_spec = pilot.distance
        if isinstance(kind, RejectionKind | CoupledKind) and rule is not None:
            pilot_distances = pilot.distances if pilot is not None else ()
            epsilon = select_tolerance(rule, pilot_distances)
            kind = replace(kind, epsilon=epsilon)
            _LOGGER.debug("%s: ε=%s", method, epsilon)

    u_draws: tuple[FloatArray, ...] = ()
    if isinstance(kind, CoupledKind):
        u_draws = tuple(
            model.draw_coupling(
                RngStream(config.seed, draw, StreamDomain.COUPLING).generator(),
                config.synthetic_size,
            )
            for draw in range(kind.draws)
        )

    bootstrap: BootstrapFit | None = None
    if isinstance(kind, BootstrapKind):
        bootstrap = fit_bootstrap_likelihood(
            observed,
            model.estimate,
            kind.outer,
            kind.inner,
            kind.bandwidth_rule,
            kind.span,
            RngStream(config.seed, 0, StreamDomain.BOOTSTRAP).generator(),
        )

    return _RunContext(
        model=model,
        prior=prior,
        observed=observed,
        kind=kind,
        statistic=statistic,
        distance=distance_spec,
        obs_summary=obs_summary,
        sets=config.sets,
        size=config.synthetic_size,
        u_draws=u_draws,
        bootstrap=bootstrap,
        pilot=pilot,
    )


@dataclass(frozen=True, eq=False)
class _Chunk:
    thetas: FloatArray
    log_weights: FloatArray
    distances: FloatArray | None
    extrapolated: int


def _run_chunk(context: _RunContext, seed: int, start: int, stop: int) -> _Chunk:
    """Run IS iterations [start, stop), iteration s on stream s."""
    thetas = np.empty((stop - start, context.prior.dimension))
    log_weights = np.empty(stop - start)
    rows: list[FloatArray] = []
    extrapolated = 0
    for row, stream_id in enumerate(range(start, stop)):
        rng = RngStream(seed, stream_id).generator()
        theta = context.prior.sample(rng)
        log_weight, fit = context.log_weight(theta, rng)
        thetas[row] = theta.values
        log_weights[row] = log_weight
        if isinstance(fit, DistanceFit):
            rows.append(fit.distances)
        elif isinstance(fit, BootstrapFit) and fit.extrapolated(theta):
            extrapolated += 1
    distances = np.vstack(rows) if rows else None
    return _Chunk(thetas, log_weights, distances, extrapolated)


def _accepted(chunks: Sequence[_Chunk]) -> int:
    return sum(int(np.count_nonzero(chunk.log_weights > -math.inf)) for chunk in chunks)


async def _run_iterations(
    context: _RunContext, config: RunConfig, start: int, stop: int
) -> list[_Chunk]:
    semaphore = Semaphore(config.workers)

    async def run(first: int, last: int) -> _Chunk:
        async with semaphore:
            return await asyncio.to_thread(
                _run_chunk, context, config.seed, first, last
            )

    tasks = [
        asyncio.create_task(run(first, min(first + config.chunk_size, stop)))
        for first in range(start, stop, config.chunk_size)
    ]
    _LOGGER.debug(
        "runAbcIs: iterations [%s, %s) in %s chunks on %s workers",
        start,
        stop,
        len(tasks),
        config.workers,
    )
    return list(await asyncio.gather(*tasks))


def _build_sample(
    context: _RunContext,
    log_weights: FloatArray,
    thetas: FloatArray,
    sampler: SamplerKind,
    accepted: int | None = None,
    **kwargs: Any,
) -> WeightedSample:
    norm_weights = normalize_log_weights(log_weights)
    with np.errstate(under="ignore"):
        raw_weights = np.exp(log_weights)
    if accepted is None:
        accepted = int(np.count_nonzero(log_weights > -math.inf))
    degenerate = not np.any(log_weights > -math.inf)
    if degenerate:
        _LOGGER.warning(
            "%s: all %s weights are zero, consider a larger tolerance",
            context.kind.method,
            log_weights.size,
        )
    return WeightedSample(
        thetas=thetas,
        names=context.prior.names,
        log_weights=log_weights,
        raw_weights=raw_weights,
        norm_weights=norm_weights,
        ess=effective_sample_size(norm_weights),
        accepted_count=accepted,
        degenerate=degenerate,
        method=context.kind.method,
        sampler=sampler,
        epsilon=context.epsilon,
        synthetic_sets=context.sets,
        pilot_distances=None if context.pilot is None else context.pilot.distances,
        **kwargs,
    )


async def async_run_abc_is(
    model: Simulator,
    prior: Prior,
    observed: Dataset,
    config: RunConfig,
) -> WeightedSample:
    """Run the ABC importance sampler.

    Each iteration s samples θ_s from the prior, fits the surrogate from N
    synthetic sets and sets ω_s = K(t(y) | η̂_θs). Iterations run in chunks
    on `workers` threads; iteration s always draws from stream s.
    """
    context = _prepare(model, prior, observed, config)
    chunks = await _run_iterations(context, config, 0, config.iterations)

    if config.min_accepted is not None:
        accepted = _accepted(chunks)
        done = config.iterations
        while accepted < config.min_accepted and done < config.iteration_limit:
            stop = min(done + config.iterations, config.iteration_limit)
            more = await _run_iterations(context, config, done, stop)
            accepted += _accepted(more)
            chunks += more
            done = stop
        if accepted < config.min_accepted:
            _LOGGER.warning(
                "runAbcIs: %s of %s acceptances after %s iterations",
                accepted,
                config.min_accepted,
                done,
            )

    rows = [chunk.distances for chunk in chunks if chunk.distances is not None]
    extrapolated = sum(chunk.extrapolated for chunk in chunks)
    if extrapolated:
        _LOGGER.warning(
            "runAbcIs: %s draws outside the bootstrap curve range", extrapolated
        )
    return _build_sample(
        context,
        np.concatenate([chunk.log_weights for chunk in chunks]),
        np.vstack([chunk.thetas for chunk in chunks]),
        SamplerKind.IMPORTANCE,
        distances=np.vstack(rows) if rows else None,
        extrapolated=extrapolated,
    )


def run_abc_is(
    model: Simulator,
    prior: Prior,
    observed: Dataset,
    config: RunConfig,
) -> WeightedSample:
    """Run the ABC importance sampler to completion."""
    return asyncio.run(async_run_abc_is(model, prior, observed, config))


def run_abc_mh(
    model: Simulator,
    prior: Prior,
    observed: Dataset,
    config: MhConfig,
    init: ParamVector,
) -> WeightedSample:
    """Run an ABC Metropolis-Hastings chain from `init`.

    The surrogate weight of the current state is kept from the step that
    accepted it. Candidates off the prior support are rejected without
    simulation, and a candidate equal to the current state counts as an
    accepted non-move.
    """
    if not prior.in_support(init):
        raise InvalidParam(f"runAbcMh: init {init.values} off the prior support")
    context = _prepare(model, prior, observed, config)
    proposal = config.get_proposal()
    rng = RngStream(config.seed, 0, StreamDomain.CHAIN).generator()

    current = init
    current_prior = prior.log_density(current)
    current_weight, _ = context.log_weight(current, rng)
    chain = np.empty((config.iterations, prior.dimension))
    moves = 0
    for step in range(config.iterations):
        candidate = proposal.propose(current, rng)
        candidate_prior = prior.log_density(candidate)
        if candidate_prior > -math.inf and candidate.values != current.values:
            candidate_weight, _ = context.log_weight(candidate, rng)
            if current_weight == -math.inf:
                accept = True
            elif candidate_weight == -math.inf:
                accept = False
            else:
                log_ratio = (
                    candidate_weight
                    + candidate_prior
                    - current_weight
                    - current_prior
                    + proposal.log_ratio(current, candidate)
                )
                accept = log_ratio >= 0.0 or math.log(rng.uniform()) < log_ratio
            if accept:
                current = candidate
                current_prior = candidate_prior
                current_weight = candidate_weight
                moves += 1
        chain[step] = current.values

    kept = chain[config.burn_in :]
    rate = moves / config.iterations
    _LOGGER.debug("runAbcMh: acceptance rate %s", rate)
    return _build_sample(
        context,
        np.zeros(kept.shape[0]),
        kept,
        SamplerKind.METROPOLIS,
        accepted=moves,
        acceptance_rate=rate,
    )
