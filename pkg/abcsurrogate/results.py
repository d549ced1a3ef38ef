"""ABC result files: posterior, summary, diagnostics, pilot and manifest."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
import csv
from dataclasses import dataclass
from importlib import metadata
import logging
import math
from pathlib import Path
import platform
from typing import Any

import numpy as np
from packaging.version import InvalidVersion, Version

from .common import json_dumps
from .const import (
    CSV_FLOAT_FORMAT,
    CSV_NORM_WEIGHT,
    CSV_RAW_WEIGHT,
    WEIGHT_SUM_TOL,
)
from .core import FloatArray
from .exceptions import InvalidData, InvalidParam, PosteriorFormatError
from .sampler import PilotResult, WeightedSample, weighted_quantiles

_LOGGER = logging.getLogger(__name__)

VERSION_PACKAGES: tuple[str, ...] = ("abcsurrogate", "numpy", "packaging", "scipy")


def _format(value: float) -> str:
    return CSV_FLOAT_FORMAT % value


def _write_rows(
    path: Path, header: Sequence[str], rows: Iterable[Sequence[str]]
) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_posterior(path: Path, sample: WeightedSample) -> None:
    """Write θ_1..θ_d, raw_weight, norm_weight rows in draw order."""
    rows = (
        [_format(value) for value in theta] + [_format(raw), _format(norm)]
        for theta, raw, norm in zip(
            sample.thetas, sample.raw_weights, sample.norm_weights, strict=True
        )
    )
    _write_rows(path, [*sample.names, CSV_RAW_WEIGHT, CSV_NORM_WEIGHT], rows)


@dataclass(frozen=True, eq=False)
class PosteriorTable:
    """Posterior draws read back from a posterior file."""

    names: tuple[str, ...]
    thetas: FloatArray
    raw_weights: FloatArray
    norm_weights: FloatArray

    @property
    def size(self) -> int:
        """Return number of draws."""
        return int(self.thetas.shape[0])


def read_posterior(path: Path) -> PosteriorTable:
    """Read a posterior file, naming the first malformed row on error."""
    with path.open(encoding="utf-8", newline="") as file:
        rows = list(csv.reader(file))
    if not rows:
        raise PosteriorFormatError(f"readPosterior: {path} is empty")
    header = [column.strip() for column in rows[0]]
    if len(header) < 3 or header[-2:] != [CSV_RAW_WEIGHT, CSV_NORM_WEIGHT]:
        raise PosteriorFormatError(
            "readPosterior: row 1: header must end with "
            f"{CSV_RAW_WEIGHT},{CSV_NORM_WEIGHT}"
        )
    values: list[list[float]] = []
    for number, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise PosteriorFormatError(
                f"readPosterior: row {number}: {len(row)} fields, "
                f"expected {len(header)}"
            )
        try:
            parsed = [float(field) for field in row]
        except ValueError as err:
            raise PosteriorFormatError(f"readPosterior: row {number}: {err}") from err
        if not all(math.isfinite(value) for value in parsed):
            raise PosteriorFormatError(f"readPosterior: row {number}: non-finite value")
        if parsed[-1] < 0.0 or parsed[-2] < 0.0:
            raise PosteriorFormatError(f"readPosterior: row {number}: negative weight")
        values.append(parsed)
    if not values:
        raise PosteriorFormatError(f"readPosterior: {path} has no draws")
    table = np.array(values, dtype=np.float64)
    return PosteriorTable(tuple(header[:-2]), table[:, :-2], table[:, -2], table[:, -1])


@dataclass(frozen=True)
class ParameterSummary:
    """Weighted posterior mean, sd and quantiles of one component."""

    name: str
    mean: float
    sd: float
    quantiles: tuple[float, ...]


def summarize_posterior(
    table: PosteriorTable, probs: Sequence[float]
) -> list[ParameterSummary]:
    """Return per-parameter weighted summaries of a posterior table.

    Normalized weights that do not sum to 1 are renormalized with a warning.
    """
    if any(not 0.0 <= p <= 1.0 for p in probs):
        raise InvalidParam(f"summarize: probabilities {list(probs)} outside [0, 1]")
    weights = table.norm_weights
    total = float(weights.sum())
    if total <= 0.0:
        raise PosteriorFormatError("summarize: all normalized weights are zero")
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        _LOGGER.warning("summarize: weights sum to %s, renormalizing", total)
    weights = weights / total
    keep = weights > 0.0
    summaries: list[ParameterSummary] = []
    for index, name in enumerate(table.names):
        column = table.thetas[:, index]
        mean = float(weights @ column)
        var = float(weights @ (column - mean) ** 2)
        quantiles = weighted_quantiles(column[keep], weights[keep], probs)
        summaries.append(
            ParameterSummary(
                name,
                mean,
                math.sqrt(max(var, 0.0)),
                tuple(float(value) for value in quantiles),
            )
        )
    return summaries


def write_summary(
    path: Path, summaries: Sequence[ParameterSummary], probs: Sequence[float]
) -> None:
    """Write one row per parameter: mean, sd and the requested quantiles."""
    header = ["parameter", "mean", "sd"] + [f"q{p!r}" for p in probs]
    rows = (
        [item.name, _format(item.mean), _format(item.sd)]
        + [_format(value) for value in item.quantiles]
        for item in summaries
    )
    _write_rows(path, header, rows)


def write_diagnostics(
    path: Path, quantiles: Sequence[float], rows: Sequence[tuple[float, int, float]]
) -> None:
    """Write the tolerance grid: quantile, ε, accepted count and ESS."""
    _write_rows(
        path,
        ["quantile", "epsilon", "accepted", "ess"],
        (
            [_format(q), _format(epsilon), str(accepted), _format(ess)]
            for q, (epsilon, accepted, ess) in zip(quantiles, rows, strict=True)
        ),
    )


def write_pilot(path: Path, names: Sequence[str], pilot: PilotResult) -> None:
    """Write prior-predictive pilot draws with their distances."""
    _write_rows(
        path,
        [*names, "distance"],
        (
            [_format(value) for value in theta] + [_format(rho)]
            for theta, rho in zip(pilot.thetas, pilot.distances, strict=True)
        ),
    )


def _json_value(value: Any) -> Any:
    if isinstance(value, dict):
        return {key: _json_value(item) for key, item in value.items()}
    if isinstance(value, list | tuple):
        return [_json_value(item) for item in value]
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def write_manifest(path: Path, data: dict[str, Any]) -> None:
    """Write the run manifest as sorted-key JSON.

    Non-finite floats are written as the strings "inf", "-inf" and "nan".
    """
    data = _json_value(data)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as file:
        file.write(json_dumps(data))


def read_values(path: Path) -> FloatArray:
    """Read observed values, comma or newline separated, '#' comments allowed."""
    try:
        values = np.loadtxt(
            path, delimiter=",", comments="#", ndmin=1, dtype=np.float64
        )
    except ValueError as err:
        raise InvalidData(f"readValues: {path}: {err}") from err
    return np.ravel(values)


def versions() -> dict[str, str]:
    """Return installed versions of the run's packages and Python."""
    data: dict[str, str] = {"python": platform.python_version()}
    for package in VERSION_PACKAGES:
        try:
            raw = metadata.version(package)
        except metadata.PackageNotFoundError:
            data[package] = "unknown"
            continue
        try:
            data[package] = str(Version(raw))
        except InvalidVersion:
            data[package] = raw
    return data
