"""ABC batch command line."""

from __future__ import annotations

import argparse
from collections.abc import Sequence
import logging
from pathlib import Path
import time

import numpy as np

from .common import parse_floats
from .config import ExperimentConfig, emit_config, load_experiment, parse_config
from .const import (
    ABC_CONFIG,
    ABC_SEED,
    ABC_VERSIONS,
    ABC_WALL_SECONDS,
    DEFAULT_PILOT_SIZE,
    DEFAULT_SUMMARY_PROBS,
    DEFAULT_TOLERANCE_GRID,
    EXIT_DEGENERATE,
    EXIT_FAILURE,
    EXIT_OK,
    FILE_DIAGNOSTICS,
    FILE_MANIFEST,
    FILE_PILOT,
    FILE_POSTERIOR,
    FILE_SUMMARY,
)
from .core import ParamVector
from .exceptions import AbcError, InvalidParam
from .results import (
    read_posterior,
    summarize_posterior,
    versions,
    write_diagnostics,
    write_manifest,
    write_pilot,
    write_posterior,
    write_summary,
)
from .sampler import (
    MhConfig,
    QuantileTolerance,
    RunConfig,
    WeightedSample,
    run_abc_is,
    run_abc_mh,
    run_pilot,
    tolerance_diagnostics,
)

_LOGGER = logging.getLogger(__name__)


def _run_sampler(config: ExperimentConfig) -> WeightedSample:
    experiment = load_experiment(config)
    sampler = config.sampler
    if isinstance(sampler, MhConfig):
        if config.init is None:
            raise InvalidParam("run: MH sampler without [mh] init")
        init = ParamVector(config.init, experiment.model.names)
        return run_abc_mh(
            experiment.model, experiment.prior, experiment.observed, sampler, init
        )
    assert isinstance(sampler, RunConfig)
    return run_abc_is(experiment.model, experiment.prior, experiment.observed, sampler)


def run_command(
    config: ExperimentConfig,
    out: Path,
    seed: int | None = None,
    workers: int | None = None,
) -> int:
    """Run one experiment and write posterior, manifest and diagnostics files."""
    config = config.with_overrides(seed, workers)
    out.mkdir(parents=True, exist_ok=True)

    start = time.perf_counter()
    sample = _run_sampler(config)
    wall = time.perf_counter() - start
    _LOGGER.info(
        "run: %s %s, S=%s, ESS=%.1f, accepted=%s in %.2fs",
        sample.method,
        sample.sampler,
        sample.size,
        sample.ess,
        sample.accepted_count,
        wall,
    )

    write_posterior(out / FILE_POSTERIOR, sample)
    if (
        isinstance(config.sampler.tolerance, QuantileTolerance)
        and sample.pilot_distances is not None
        and sample.distances is not None
    ):
        epsilons = np.quantile(sample.pilot_distances, DEFAULT_TOLERANCE_GRID)
        write_diagnostics(
            out / FILE_DIAGNOSTICS,
            DEFAULT_TOLERANCE_GRID,
            tolerance_diagnostics(sample, epsilons),
        )
    write_manifest(
        out / FILE_MANIFEST,
        {
            **sample.data(),
            ABC_CONFIG: emit_config(config),
            ABC_SEED: config.sampler.seed,
            ABC_VERSIONS: versions(),
            ABC_WALL_SECONDS: wall,
        },
    )

    if sample.degenerate:
        _LOGGER.warning("run: degenerate sample, every weight is zero")
        return EXIT_DEGENERATE
    return EXIT_OK


def summarize_command(
    posterior: Path,
    probs: Sequence[float] = DEFAULT_SUMMARY_PROBS,
    out: Path | None = None,
) -> int:
    """Write weighted mean, sd and quantiles of a posterior file."""
    table = read_posterior(posterior)
    summaries = summarize_posterior(table, probs)
    for item in summaries:
        _LOGGER.info("%s: mean=%s sd=%s", item.name, item.mean, item.sd)
    write_summary((out or posterior.parent) / FILE_SUMMARY, summaries, probs)
    return EXIT_OK


def pilot_command(
    config: ExperimentConfig,
    out: Path,
    seed: int | None = None,
    size: int | None = None,
) -> int:
    """Write the prior-predictive distance distribution for tolerance tuning."""
    config = config.with_overrides(seed)
    out.mkdir(parents=True, exist_ok=True)
    experiment = load_experiment(config)
    sampler = config.sampler
    if size is None:
        tolerance = sampler.tolerance
        if isinstance(tolerance, QuantileTolerance):
            size = tolerance.pilot_size
        else:
            size = DEFAULT_PILOT_SIZE
    pilot = run_pilot(
        experiment.model,
        experiment.prior,
        experiment.observed,
        sampler.statistic or experiment.model.default_statistic(),
        sampler.distance,
        sampler.seed,
        size,
        sampler.synthetic_size,
    )
    write_pilot(out / FILE_PILOT, experiment.model.names, pilot)
    for quantile, epsilon in zip(
        DEFAULT_TOLERANCE_GRID,
        np.quantile(pilot.distances, DEFAULT_TOLERANCE_GRID),
        strict=True,
    ):
        _LOGGER.info("pilot: quantile %s -> epsilon %s", quantile, epsilon)
    return EXIT_OK


def _probs(value: str) -> tuple[float, ...]:
    probs = parse_floats(value)
    if not probs:
        raise argparse.ArgumentTypeError(f"invalid probabilities {value!r}")
    return probs


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser of the run, summarize and pilot verbs."""
    parser = argparse.ArgumentParser(
        prog="abcsurrogate",
        description="Approximate Bayesian computation with surrogate likelihoods.",
    )
    parser.add_argument("--verbose", action="store_true", help="Enable debug logging.")
    verbs = parser.add_subparsers(dest="command", required=True)

    run = verbs.add_parser("run", help="Run an ABC sampler.")
    run.add_argument("--config", type=Path, required=True, help="Run configuration.")
    run.add_argument("--out", type=Path, default=Path("."), help="Output directory.")
    run.add_argument("--seed", type=int, default=None, help="Override the seed.")
    run.add_argument(
        "--workers", type=int, default=None, help="Worker threads (IS sampler)."
    )

    summarize = verbs.add_parser("summarize", help="Summarize a posterior file.")
    summarize.add_argument("posterior", type=Path, help="posterior.csv to summarize.")
    summarize.add_argument(
        "--probs",
        type=_probs,
        default=DEFAULT_SUMMARY_PROBS,
        help="Comma separated quantile probabilities.",
    )
    summarize.add_argument(
        "--out", type=Path, default=None, help="Output directory (posterior's)."
    )

    pilot = verbs.add_parser("pilot", help="Sample prior-predictive distances.")
    pilot.add_argument("--config", type=Path, required=True, help="Run configuration.")
    pilot.add_argument("--out", type=Path, default=Path("."), help="Output directory.")
    pilot.add_argument("--seed", type=int, default=None, help="Override the seed.")
    pilot.add_argument("--size", type=int, default=None, help="Pilot draws.")
    return parser


def main(args: Sequence[str] | None = None) -> int:
    """Run the command line, returning the process exit code."""
    parsed = build_parser().parse_args(args)
    logging.basicConfig(
        level=logging.DEBUG if parsed.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if parsed.command == "summarize":
            return summarize_command(parsed.posterior, parsed.probs, parsed.out)
        config = parse_config(parsed.config)
        if parsed.command == "pilot":
            return pilot_command(config, parsed.out, parsed.seed, parsed.size)
        return run_command(config, parsed.out, parsed.seed, parsed.workers)
    except (AbcError, OSError) as err:
        _LOGGER.error("%s: %s", parsed.command, err)
        return EXIT_FAILURE
