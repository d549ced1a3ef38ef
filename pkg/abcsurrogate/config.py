"""ABC run configuration files."""

from __future__ import annotations

from collections.abc import Callable
import configparser
from dataclasses import dataclass, field, replace
import logging
from pathlib import Path
import re
from typing import Any, TypeVar

import numpy as np
from packaging.version import InvalidVersion, Version

from .common import (
    BandwidthRule,
    ConstraintKind,
    DesignColumn,
    DistanceKind,
    KernelKind,
    ModelName,
    NoiseFamily,
    PriorFamily,
    SamplerKind,
    StatisticKind,
    StreamDomain,
    SurrogateMethod,
    format_float,
    format_floats,
    parse_float,
    parse_floats,
    parse_int,
    parse_ints,
    parse_str,
)
from .const import (
    CFG_BANDWIDTH,
    CFG_BANDWIDTH_RULE,
    CFG_BLOCK_SIZES,
    CFG_BURN_IN,
    CFG_C,
    CFG_COLS,
    CFG_CONSTRAINTS,
    CFG_DESIGN,
    CFG_DOF,
    CFG_DRAWS,
    CFG_EPSILON,
    CFG_FAMILY,
    CFG_INIT,
    CFG_INNER,
    CFG_ITERATIONS,
    CFG_KIND,
    CFG_LIKELIHOOD_SD,
    CFG_LOWER,
    CFG_MAX_ITERATIONS,
    CFG_MEAN,
    CFG_METHOD,
    CFG_MIN_ACCEPTED,
    CFG_MODEL,
    CFG_N,
    CFG_NOISE,
    CFG_ORDERS,
    CFG_OUTER,
    CFG_PATH,
    CFG_PILOT_SIZE,
    CFG_PROBS,
    CFG_PROPOSAL_SCALE,
    CFG_QUANTILE,
    CFG_RIDGE,
    CFG_ROWS,
    CFG_SAMPLER,
    CFG_SCALE,
    CFG_SCHEMA,
    CFG_SD,
    CFG_SEED,
    CFG_SPAN,
    CFG_STATES,
    CFG_SWEEPS,
    CFG_SYNTHETIC_SETS,
    CFG_SYNTHETIC_SIZE,
    CFG_TRUTH,
    CFG_UPPER,
    CFG_VALUES,
    CFG_WORKERS,
    CONFIG_SCHEMA_VERSION,
    DEFAULT_BL_INNER,
    DEFAULT_BL_OUTER,
    DEFAULT_BL_SPAN,
    DEFAULT_COUPLING_DRAWS,
    DEFAULT_GK_C,
    DEFAULT_ITERATIONS,
    DEFAULT_PILOT_SIZE,
    DEFAULT_POTTS_SWEEPS,
    DEFAULT_QUANTILE,
    DEFAULT_RIDGE,
    DEFAULT_T_DOF,
    DEFAULT_WORKERS,
    SECTION_BOOTSTRAP,
    SECTION_COUPLED,
    SECTION_DISTANCE,
    SECTION_EMPIRICAL,
    SECTION_KERNEL,
    SECTION_MH,
    SECTION_MODEL,
    SECTION_OBSERVED,
    SECTION_PRIOR,
    SECTION_RUN,
    SECTION_STATISTIC,
    SECTION_SYNTHETIC,
    SECTION_TOLERANCE,
)
from .core import Dataset, ParamVector, RngStream, Simulator
from .empirical import ConstraintSet
from .exceptions import AbcError, ConfigError, ConfigViolation, InvalidParam
from .gk import GkModel
from .mixedeffects import MixedEffectsConfig, MixedEffectsModel, design_matrix
from .oracle import BernoulliModel, ConjugateNormalModel
from .potts import PottsModel
from .prior import Prior, PriorComponent
from .results import read_values
from .sampler import FixedTolerance, MhConfig, QuantileTolerance, RunConfig
from .summaries import DistanceSpec, SmoothKernelSpec, StatisticSpec
from .surrogate import (
    BootstrapKind,
    CoupledKind,
    EmpiricalKind,
    KernelSmoothKind,
    RejectionKind,
    SurrogateKind,
    SyntheticKind,
)

_LOGGER = logging.getLogger(__name__)

_T = TypeVar("_T")

SECTION_KEYS: dict[str, tuple[str, ...]] = {
    SECTION_BOOTSTRAP: (CFG_BANDWIDTH_RULE, CFG_INNER, CFG_OUTER, CFG_SPAN),
    SECTION_COUPLED: (CFG_DRAWS,),
    SECTION_DISTANCE: (CFG_KIND, CFG_SCALE),
    SECTION_EMPIRICAL: (CFG_CONSTRAINTS,),
    SECTION_KERNEL: (CFG_BANDWIDTH, CFG_KIND),
    SECTION_MH: (CFG_BURN_IN, CFG_INIT, CFG_PROPOSAL_SCALE),
    SECTION_MODEL: (
        CFG_BLOCK_SIZES,
        CFG_C,
        CFG_COLS,
        CFG_DESIGN,
        CFG_DOF,
        CFG_LIKELIHOOD_SD,
        CFG_N,
        CFG_NOISE,
        CFG_ROWS,
        CFG_STATES,
        CFG_SWEEPS,
    ),
    SECTION_OBSERVED: (CFG_PATH, CFG_TRUTH, CFG_VALUES),
    SECTION_RUN: (
        CFG_ITERATIONS,
        CFG_MAX_ITERATIONS,
        CFG_METHOD,
        CFG_MIN_ACCEPTED,
        CFG_MODEL,
        CFG_SAMPLER,
        CFG_SCHEMA,
        CFG_SEED,
        CFG_SYNTHETIC_SETS,
        CFG_SYNTHETIC_SIZE,
        CFG_WORKERS,
    ),
    SECTION_STATISTIC: (CFG_KIND, CFG_ORDERS, CFG_PROBS),
    SECTION_SYNTHETIC: (CFG_RIDGE,),
    SECTION_TOLERANCE: (CFG_EPSILON, CFG_PILOT_SIZE, CFG_QUANTILE),
}

PRIOR_KEYS: tuple[str, ...] = (CFG_FAMILY, CFG_LOWER, CFG_MEAN, CFG_SD, CFG_UPPER)

METHOD_SECTIONS: dict[SurrogateMethod, str] = {
    SurrogateMethod.BOOTSTRAP: SECTION_BOOTSTRAP,
    SurrogateMethod.COUPLED: SECTION_COUPLED,
    SurrogateMethod.EMPIRICAL: SECTION_EMPIRICAL,
    SurrogateMethod.KERNEL: SECTION_KERNEL,
    SurrogateMethod.SYNTHETIC: SECTION_SYNTHETIC,
}

SECTION_RE = re.compile(r"^\s*\[(?P<name>[^\]]+)\]")
OPTION_RE = re.compile(r"^(?P<key>[^\s=:#;][^=:]*?)\s*[=:]")


@dataclass(frozen=True)
class ModelSpec:
    """Model selection and its structural options."""

    name: ModelName
    n: int | None = None
    likelihood_sd: float = 1.0
    c: float = DEFAULT_GK_C
    rows: int | None = None
    cols: int | None = None
    states: int | None = None
    sweeps: int = DEFAULT_POTTS_SWEEPS
    block_sizes: tuple[int, ...] = ()
    design: tuple[DesignColumn, ...] = (DesignColumn.INTERCEPT,)
    noise: NoiseFamily = NoiseFamily.NORMAL
    dof: float = DEFAULT_T_DOF

    def has_free_size(self) -> bool:
        """Return if n is not fixed by the model structure."""
        return self.name in (
            ModelName.BERNOULLI,
            ModelName.CONJUGATE_NORMAL,
            ModelName.G_AND_K,
        )

    def names(self) -> tuple[str, ...]:
        """Return the model parameter names without building it."""
        return self.build(self.n or 1).names

    def build(self, n: int | None = None) -> Simulator:
        """Build the simulator, `n` filling a free data size."""
        size = self.n if self.n is not None else n
        if self.name == ModelName.POTTS:
            if self.rows is None or self.cols is None or self.states is None:
                raise InvalidParam("potts: rows, cols and states are required")
            return PottsModel(self.rows, self.cols, self.states, self.sweeps)
        if self.name == ModelName.MIXED_EFFECTS:
            total = sum(self.block_sizes)
            return MixedEffectsModel(
                MixedEffectsConfig(
                    self.block_sizes,
                    design_matrix(self.design, total),
                    self.noise,
                    self.dof,
                )
            )
        if size is None:
            raise InvalidParam(f"{self.name}: data size n is required")
        if self.name == ModelName.BERNOULLI:
            return BernoulliModel(size)
        if self.name == ModelName.CONJUGATE_NORMAL:
            return ConjugateNormalModel(size, self.likelihood_sd)
        if self.name == ModelName.G_AND_K:
            return GkModel(size, self.c)
        raise InvalidParam(f"unknown model {self.name}")


@dataclass(frozen=True)
class ObservedSource:
    """Where the observed data come from: literal values, a file or a truth θ."""

    values: tuple[float, ...] | None = None
    path: str | None = None
    truth: tuple[float, ...] | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    """Parsed run configuration file."""

    model: ModelSpec
    prior: tuple[PriorComponent, ...]
    observed: ObservedSource
    sampler: RunConfig | MhConfig
    init: tuple[float, ...] | None = None
    schema: str = str(CONFIG_SCHEMA_VERSION)
    source: Path | None = field(default=None, compare=False)

    @property
    def kind(self) -> SamplerKind:
        """Return the sampling driver."""
        if isinstance(self.sampler, MhConfig):
            return SamplerKind.METROPOLIS
        return SamplerKind.IMPORTANCE

    def get_prior(self) -> Prior:
        """Return the prior π(θ)."""
        return Prior(self.prior)

    def with_overrides(
        self, seed: int | None = None, workers: int | None = None
    ) -> ExperimentConfig:
        """Return a copy with command line overrides applied."""
        sampler = self.sampler
        if seed is not None:
            sampler = replace(sampler, seed=seed)
        if workers is not None:
            if not isinstance(sampler, RunConfig):
                raise InvalidParam("workers: only the IS sampler runs in parallel")
            sampler = replace(sampler, workers=workers)
        return replace(self, sampler=sampler)


@dataclass(frozen=True, eq=False)
class Experiment:
    """Built model, prior and observed dataset of a configuration."""

    model: Simulator
    prior: Prior
    observed: Dataset


def load_experiment(config: ExperimentConfig) -> Experiment:
    """Build the simulator and load or simulate the observed data."""
    source = config.observed
    values = None
    if source.values is not None:
        values = np.asarray(source.values, dtype=np.float64)
    elif source.path is not None:
        path = Path(source.path)
        if not path.is_absolute() and config.source is not None:
            path = config.source.parent / path
        values = read_values(path)

    model = config.model.build(None if values is None else values.size)
    prior = config.get_prior()
    if values is not None:
        observed = model.make_dataset(values)
    else:
        assert source.truth is not None
        truth = ParamVector(source.truth, model.names)
        rng = RngStream(config.sampler.seed, 0, StreamDomain.OBSERVED).generator()
        observed = model.simulate(truth, rng)
        _LOGGER.debug("load_experiment: observed data simulated at %s", truth.data())
    if observed.n != model.n:
        raise InvalidParam(f"observed: n={observed.n}, model n={model.n}")
    return Experiment(model, prior, observed)


class _Reader:
    """Collects typed values and violations from a parsed INI document."""

    def __init__(self, parser: configparser.ConfigParser, text: str):
        self.parser = parser
        self.violations: list[ConfigViolation] = []
        self.lines: dict[tuple[str, str | None], int] = {}
        section: str | None = None
        for number, line in enumerate(text.splitlines(), start=1):
            if match := SECTION_RE.match(line):
                section = match.group("name").strip()
                self.lines.setdefault((section, None), number)
            elif section is not None and (match := OPTION_RE.match(line)):
                key = parser.optionxform(match.group("key").strip())
                self.lines.setdefault((section, key), number)

    def line(self, section: str, key: str | None = None) -> int | None:
        return self.lines.get((section, key), self.lines.get((section, None)))

    def error(self, section: str, key: str | None, message: str) -> None:
        label = section if key is None else f"{section}.{key}"
        self.violations.append(ConfigViolation(self.line(section, key), label, message))

    def raw(self, section: str, key: str) -> str | None:
        if not self.parser.has_section(section):
            return None
        return self.parser.get(section, key, fallback=None)

    def get(
        self,
        section: str,
        key: str,
        convert: Callable[[Any], _T | None],
        default: _T | None = None,
        required: bool = False,
    ) -> _T | None:
        value = self.raw(section, key)
        if value is None:
            if required:
                self.error(section, key, "missing required key")
            return default
        try:
            converted = convert(value)
        except ValueError:
            self.error(section, key, f"invalid value {value!r}")
            return default
        return converted

    def build(
        self, section: str, key: str | None, factory: Callable[[], _T]
    ) -> _T | None:
        try:
            return factory()
        except AbcError as err:
            self.error(section, key, str(err))
            return None


def _enum(enum: Callable[[str], Any]) -> Callable[[Any], Any]:
    def convert(value: Any) -> Any:
        member = enum(str(value).strip())
        if str(member.value) == "unknown":
            raise ValueError(value)
        return member

    return convert


def _design(value: Any) -> tuple[DesignColumn, ...]:
    items = [item.strip() for item in str(value).split(",")]
    columns = tuple(DesignColumn(item) for item in items if item)
    if not columns or DesignColumn.UNKNOWN in columns:
        raise ValueError(value)
    return columns


def _check_keys(reader: _Reader) -> tuple[list[str], set[str]]:
    """Report unknown sections and keys; return prior section names in order."""
    prior_names: list[str] = []
    present: set[str] = set()
    for section in reader.parser.sections():
        if section.startswith(SECTION_PRIOR):
            name = section[len(SECTION_PRIOR) :].strip()
            if not name:
                reader.error(section, None, "prior section without parameter name")
                continue
            prior_names.append(section)
            allowed: tuple[str, ...] = PRIOR_KEYS
        elif section in SECTION_KEYS:
            present.add(section)
            allowed = SECTION_KEYS[section]
        else:
            reader.error(section, None, "unknown section")
            continue
        for key in reader.parser.options(section):
            if key not in allowed:
                reader.error(section, key, "unknown key")
    return prior_names, present


def _parse_prior(reader: _Reader, section: str) -> PriorComponent | None:
    name = section[len(SECTION_PRIOR) :].strip()
    family = reader.get(section, CFG_FAMILY, _enum(PriorFamily), required=True)
    if family is None:
        return None
    if family == PriorFamily.UNIFORM:
        first = reader.get(section, CFG_LOWER, parse_float, required=True)
        second = reader.get(section, CFG_UPPER, parse_float, required=True)
    else:
        first = reader.get(section, CFG_MEAN, parse_float, required=True)
        second = reader.get(section, CFG_SD, parse_float, required=True)
    if first is None or second is None:
        return None
    return reader.build(
        section, CFG_FAMILY, lambda: PriorComponent(name, family, first, second)
    )


def _parse_model(reader: _Reader) -> ModelSpec | None:
    name = reader.get(SECTION_RUN, CFG_MODEL, _enum(ModelName), required=True)
    if name is None:
        return None
    section = SECTION_MODEL
    spec = ModelSpec(
        name=name,
        n=reader.get(section, CFG_N, parse_int),
        likelihood_sd=reader.get(section, CFG_LIKELIHOOD_SD, parse_float, 1.0),
        c=reader.get(section, CFG_C, parse_float, DEFAULT_GK_C),
        rows=reader.get(section, CFG_ROWS, parse_int),
        cols=reader.get(section, CFG_COLS, parse_int),
        states=reader.get(section, CFG_STATES, parse_int),
        sweeps=reader.get(section, CFG_SWEEPS, parse_int, DEFAULT_POTTS_SWEEPS),
        block_sizes=reader.get(section, CFG_BLOCK_SIZES, parse_ints, ()),
        design=reader.get(section, CFG_DESIGN, _design, (DesignColumn.INTERCEPT,)),
        noise=reader.get(section, CFG_NOISE, _enum(NoiseFamily), NoiseFamily.NORMAL),
        dof=reader.get(section, CFG_DOF, parse_float, DEFAULT_T_DOF),
    )
    if reader.build(section, None, lambda: spec.build(spec.n or 1)) is None:
        return None
    return spec


def _parse_statistic(reader: _Reader) -> StatisticSpec | None:
    section = SECTION_STATISTIC
    if not reader.parser.has_section(section):
        return None
    kind = reader.get(section, CFG_KIND, _enum(StatisticKind), required=True)
    if kind is None:
        return None
    orders = reader.get(section, CFG_ORDERS, parse_ints, ())
    probs = reader.get(section, CFG_PROBS, parse_floats, ())
    return reader.build(section, CFG_KIND, lambda: StatisticSpec(kind, orders, probs))


def _parse_distance(reader: _Reader) -> DistanceSpec | None:
    section = SECTION_DISTANCE
    if not reader.parser.has_section(section):
        return None
    kind = reader.get(section, CFG_KIND, _enum(DistanceKind), required=True)
    if kind is None:
        return None
    scale = reader.get(section, CFG_SCALE, parse_floats, ())
    return reader.build(section, CFG_SCALE, lambda: DistanceSpec(kind, scale))


def _parse_tolerance(reader: _Reader) -> FixedTolerance | QuantileTolerance | None:
    section = SECTION_TOLERANCE
    if not reader.parser.has_section(section):
        return QuantileTolerance()
    epsilon = reader.get(section, CFG_EPSILON, parse_float)
    if epsilon is not None:
        for key in (CFG_QUANTILE, CFG_PILOT_SIZE):
            if reader.raw(section, key) is not None:
                reader.error(section, key, "not allowed together with epsilon")
        return reader.build(section, CFG_EPSILON, lambda: FixedTolerance(epsilon))
    quantile = reader.get(section, CFG_QUANTILE, parse_float, DEFAULT_QUANTILE)
    pilot_size = reader.get(section, CFG_PILOT_SIZE, parse_int, DEFAULT_PILOT_SIZE)
    return reader.build(
        section, CFG_QUANTILE, lambda: QuantileTolerance(quantile, pilot_size)
    )


def _parse_surrogate(reader: _Reader, method: SurrogateMethod) -> SurrogateKind | None:
    if method == SurrogateMethod.REJECTION:
        return RejectionKind()
    if method == SurrogateMethod.KERNEL:
        section = SECTION_KERNEL
        kind = reader.get(section, CFG_KIND, _enum(KernelKind), KernelKind.EPANECHNIKOV)
        bandwidth = reader.get(section, CFG_BANDWIDTH, parse_float, required=True)
        if kind is None or bandwidth is None:
            return None
        spec = reader.build(
            section, CFG_BANDWIDTH, lambda: SmoothKernelSpec(kind, bandwidth)
        )
        return None if spec is None else KernelSmoothKind(spec)
    if method == SurrogateMethod.COUPLED:
        section = SECTION_COUPLED
        draws = reader.get(section, CFG_DRAWS, parse_int, DEFAULT_COUPLING_DRAWS)
        return reader.build(section, CFG_DRAWS, lambda: CoupledKind(draws=draws))
    if method == SurrogateMethod.SYNTHETIC:
        ridge = reader.get(SECTION_SYNTHETIC, CFG_RIDGE, parse_float, DEFAULT_RIDGE)
        return reader.build(SECTION_SYNTHETIC, CFG_RIDGE, lambda: SyntheticKind(ridge))
    if method == SurrogateMethod.EMPIRICAL:
        constraint = reader.get(
            SECTION_EMPIRICAL,
            CFG_CONSTRAINTS,
            _enum(ConstraintKind),
            ConstraintKind.MEAN,
        )
        constraints = reader.build(
            SECTION_EMPIRICAL, CFG_CONSTRAINTS, lambda: ConstraintSet(constraint)
        )
        return None if constraints is None else EmpiricalKind(constraints)
    section = SECTION_BOOTSTRAP
    outer = reader.get(section, CFG_OUTER, parse_int, DEFAULT_BL_OUTER)
    inner = reader.get(section, CFG_INNER, parse_int, DEFAULT_BL_INNER)
    rule = reader.get(
        section, CFG_BANDWIDTH_RULE, _enum(BandwidthRule), BandwidthRule.SILVERMAN
    )
    span = reader.get(section, CFG_SPAN, parse_float, DEFAULT_BL_SPAN)
    return reader.build(section, None, lambda: BootstrapKind(outer, inner, rule, span))


def _parse_sampler(
    reader: _Reader, present: set[str]
) -> tuple[RunConfig | MhConfig | None, tuple[float, ...] | None]:
    run = SECTION_RUN
    method = reader.get(run, CFG_METHOD, _enum(SurrogateMethod), required=True)
    sampler = reader.get(run, CFG_SAMPLER, _enum(SamplerKind), SamplerKind.IMPORTANCE)
    if method is None or sampler is None:
        return None, None

    for other, section in METHOD_SECTIONS.items():
        if other != method and section in present:
            reader.error(section, None, f"does not apply to method {method.value}")

    surrogate = _parse_surrogate(reader, method)
    statistic = _parse_statistic(reader)
    distance_spec = _parse_distance(reader)
    tolerance = None
    if method.uses_tolerance():
        tolerance = _parse_tolerance(reader)
    elif SECTION_TOLERANCE in present:
        reader.error(SECTION_TOLERANCE, None, f"method {method.value} has no tolerance")

    common: dict[str, Any] = {
        "iterations": reader.get(run, CFG_ITERATIONS, parse_int, DEFAULT_ITERATIONS),
        "statistic": statistic,
        "distance": distance_spec,
        "tolerance": tolerance,
        "seed": reader.get(run, CFG_SEED, parse_int, 0),
        "synthetic_sets": reader.get(run, CFG_SYNTHETIC_SETS, parse_int),
        "synthetic_size": reader.get(run, CFG_SYNTHETIC_SIZE, parse_int),
    }
    if surrogate is None or None in (common["iterations"], common["seed"]):
        return None, None
    common["surrogate"] = surrogate

    if sampler == SamplerKind.METROPOLIS:
        for key in (CFG_WORKERS, CFG_MIN_ACCEPTED, CFG_MAX_ITERATIONS):
            if reader.raw(run, key) is not None:
                reader.error(run, key, "only applies to the IS sampler")
        scale = reader.get(SECTION_MH, CFG_PROPOSAL_SCALE, parse_floats, required=True)
        burn_in = reader.get(SECTION_MH, CFG_BURN_IN, parse_int, 0)
        init = reader.get(SECTION_MH, CFG_INIT, parse_floats, required=True)
        if scale is None or burn_in is None:
            return None, init
        return (
            reader.build(
                run,
                None,
                lambda: MhConfig(proposal_scale=scale, burn_in=burn_in, **common),
            ),
            init,
        )

    if SECTION_MH in present:
        reader.error(SECTION_MH, None, "only applies to the MH sampler")
    workers = reader.get(run, CFG_WORKERS, parse_int, DEFAULT_WORKERS)
    min_accepted = reader.get(run, CFG_MIN_ACCEPTED, parse_int)
    max_iterations = reader.get(run, CFG_MAX_ITERATIONS, parse_int)
    if workers is None:
        return None, None
    return (
        reader.build(
            run,
            None,
            lambda: RunConfig(
                workers=workers,
                min_accepted=min_accepted,
                max_iterations=max_iterations,
                **common,
            ),
        ),
        None,
    )


def _parse_observed(reader: _Reader, model: ModelSpec | None) -> ObservedSource | None:
    section = SECTION_OBSERVED
    if not reader.parser.has_section(section):
        reader.error(section, None, "missing required section")
        return None
    source = ObservedSource(
        values=reader.get(section, CFG_VALUES, parse_floats),
        path=reader.get(section, CFG_PATH, parse_str),
        truth=reader.get(section, CFG_TRUTH, parse_floats),
    )
    choices = (source.values, source.path, source.truth)
    given = [value for value in choices if value is not None]
    if len(given) != 1:
        reader.error(section, None, "exactly one of values, path or truth required")
        return None
    if source.truth is not None and model is not None:
        if model.has_free_size() and model.n is None:
            reader.error(SECTION_MODEL, CFG_N, "required to simulate observed data")
    return source


def _read(text: str) -> tuple[configparser.ConfigParser | None, list[ConfigViolation]]:
    parser = configparser.ConfigParser(interpolation=None, strict=True)
    try:
        parser.read_string(text)
    except configparser.DuplicateOptionError as err:
        key = f"{err.section}.{err.option}"
        return None, [ConfigViolation(err.lineno, key, "duplicate key")]
    except configparser.DuplicateSectionError as err:
        return None, [ConfigViolation(err.lineno, err.section, "duplicate section")]
    except configparser.MissingSectionHeaderError as err:
        return None, [ConfigViolation(err.lineno, "config", "key outside any section")]
    except configparser.ParsingError as err:
        return None, [
            ConfigViolation(lineno, "config", f"cannot parse {line!r}")
            for lineno, line in err.errors
        ]
    return parser, []


def parse_config_text(text: str, source: Path | None = None) -> ExperimentConfig:
    """Parse configuration text, raising ConfigError with every violation."""
    parser, violations = _read(text)
    if parser is None:
        raise ConfigError(violations)
    reader = _Reader(parser, text)
    if not parser.has_section(SECTION_RUN):
        reader.error(SECTION_RUN, None, "missing required section")
        raise ConfigError(reader.violations)

    schema = reader.get(SECTION_RUN, CFG_SCHEMA, parse_str, str(CONFIG_SCHEMA_VERSION))
    try:
        if Version(schema or "").major != CONFIG_SCHEMA_VERSION.major:
            reader.error(
                SECTION_RUN,
                CFG_SCHEMA,
                f"unsupported schema {schema}, expected {CONFIG_SCHEMA_VERSION}",
            )
    except InvalidVersion:
        reader.error(SECTION_RUN, CFG_SCHEMA, f"invalid version {schema!r}")

    prior_sections, present = _check_keys(reader)
    model = _parse_model(reader)
    prior = [_parse_prior(reader, section) for section in prior_sections]
    if not prior_sections:
        reader.error(SECTION_PRIOR + "*", None, "no prior sections")
    if model is not None and prior_sections:
        names = tuple(
            section[len(SECTION_PRIOR) :].strip() for section in prior_sections
        )
        expected = model.names()
        if names != expected:
            reader.error(
                prior_sections[0],
                None,
                f"prior names {list(names)} do not match "
                f"model parameters {list(expected)}",
            )
    observed = _parse_observed(reader, model)
    sampler, init = _parse_sampler(reader, present)
    if observed is not None and observed.truth is not None and model is not None:
        if len(observed.truth) != len(model.names()):
            reader.error(SECTION_OBSERVED, CFG_TRUTH, "length differs from d")
    if init is not None and prior_sections and len(init) != len(prior_sections):
        reader.error(SECTION_MH, CFG_INIT, "length differs from parameter count")

    if reader.violations:
        raise ConfigError(reader.violations)
    assert model is not None and observed is not None and sampler is not None
    components = tuple(component for component in prior if component is not None)
    return ExperimentConfig(
        model=model,
        prior=components,
        observed=observed,
        sampler=sampler,
        init=init,
        schema=str(schema),
        source=source,
    )


def parse_config(path: Path | str) -> ExperimentConfig:
    """Parse a configuration file."""
    path = Path(path)
    return parse_config_text(path.read_text(encoding="utf-8"), source=path)


def _emit_model(spec: ModelSpec) -> dict[str, str]:
    """Return [model] keys whose values differ from the defaults."""
    default = ModelSpec(spec.name)
    items: dict[str, str] = {}
    if spec.n is not None:
        items[CFG_N] = str(spec.n)
    if spec.likelihood_sd != default.likelihood_sd:
        items[CFG_LIKELIHOOD_SD] = format_float(spec.likelihood_sd)
    if spec.c != default.c:
        items[CFG_C] = format_float(spec.c)
    lattice = ((CFG_ROWS, spec.rows), (CFG_COLS, spec.cols), (CFG_STATES, spec.states))
    for key, size in lattice:
        if size is not None:
            items[key] = str(size)
    if spec.sweeps != default.sweeps:
        items[CFG_SWEEPS] = str(spec.sweeps)
    if spec.block_sizes:
        items[CFG_BLOCK_SIZES] = ", ".join(str(size) for size in spec.block_sizes)
    if spec.design != default.design:
        items[CFG_DESIGN] = ", ".join(str(column) for column in spec.design)
    if spec.noise != default.noise:
        items[CFG_NOISE] = str(spec.noise)
    if spec.dof != default.dof:
        items[CFG_DOF] = format_float(spec.dof)
    return items


def _emit_surrogate(kind: SurrogateKind) -> tuple[str, dict[str, str]] | None:
    if isinstance(kind, KernelSmoothKind):
        return SECTION_KERNEL, {
            CFG_KIND: str(kind.kernel.kind),
            CFG_BANDWIDTH: format_float(kind.kernel.bandwidth),
        }
    if isinstance(kind, CoupledKind):
        return SECTION_COUPLED, {CFG_DRAWS: str(kind.draws)}
    if isinstance(kind, SyntheticKind):
        return SECTION_SYNTHETIC, {CFG_RIDGE: format_float(kind.ridge)}
    if isinstance(kind, EmpiricalKind):
        return SECTION_EMPIRICAL, {CFG_CONSTRAINTS: str(kind.constraints.kind)}
    if isinstance(kind, BootstrapKind):
        return SECTION_BOOTSTRAP, {
            CFG_OUTER: str(kind.outer),
            CFG_INNER: str(kind.inner),
            CFG_BANDWIDTH_RULE: str(kind.bandwidth_rule),
            CFG_SPAN: format_float(kind.span),
        }
    return None


def emit_config(config: ExperimentConfig) -> str:
    """Return the canonical text of a configuration."""
    sampler = config.sampler
    method = sampler.surrogate.method
    sections: list[tuple[str, dict[str, str]]] = []

    run: dict[str, str] = {
        CFG_SCHEMA: config.schema,
        CFG_MODEL: str(config.model.name),
        CFG_METHOD: method.value,
        CFG_SAMPLER: str(config.kind),
        CFG_SEED: str(sampler.seed),
        CFG_ITERATIONS: str(sampler.iterations),
    }
    if sampler.synthetic_sets is not None:
        run[CFG_SYNTHETIC_SETS] = str(sampler.synthetic_sets)
    if sampler.synthetic_size is not None:
        run[CFG_SYNTHETIC_SIZE] = str(sampler.synthetic_size)
    if isinstance(sampler, RunConfig):
        run[CFG_WORKERS] = str(sampler.workers)
        if sampler.min_accepted is not None:
            run[CFG_MIN_ACCEPTED] = str(sampler.min_accepted)
        if sampler.max_iterations is not None:
            run[CFG_MAX_ITERATIONS] = str(sampler.max_iterations)
    sections.append((SECTION_RUN, run))

    for component in config.prior:
        items = {CFG_FAMILY: str(component.family)}
        if component.family == PriorFamily.UNIFORM:
            items[CFG_LOWER] = format_float(component.first)
            items[CFG_UPPER] = format_float(component.second)
        else:
            items[CFG_MEAN] = format_float(component.first)
            items[CFG_SD] = format_float(component.second)
        sections.append((SECTION_PRIOR + component.name, items))

    observed = config.observed
    if observed.values is not None:
        sections.append(
            (SECTION_OBSERVED, {CFG_VALUES: format_floats(observed.values)})
        )
    elif observed.path is not None:
        sections.append((SECTION_OBSERVED, {CFG_PATH: observed.path}))
    elif observed.truth is not None:
        sections.append((SECTION_OBSERVED, {CFG_TRUTH: format_floats(observed.truth)}))

    model_items = _emit_model(config.model)
    if model_items:
        sections.append((SECTION_MODEL, model_items))

    if sampler.statistic is not None:
        stat: dict[str, str] = {CFG_KIND: str(sampler.statistic.kind)}
        if sampler.statistic.orders:
            orders = sampler.statistic.orders
            stat[CFG_ORDERS] = ", ".join(str(order) for order in orders)
        if sampler.statistic.probs:
            stat[CFG_PROBS] = format_floats(sampler.statistic.probs)
        sections.append((SECTION_STATISTIC, stat))
    if sampler.distance is not None:
        dist: dict[str, str] = {CFG_KIND: str(sampler.distance.kind)}
        if sampler.distance.scale:
            dist[CFG_SCALE] = format_floats(sampler.distance.scale)
        sections.append((SECTION_DISTANCE, dist))

    if method.uses_tolerance():
        rule = sampler.tolerance
        if rule is None:
            assert isinstance(sampler.surrogate, RejectionKind | CoupledKind)
            rule = FixedTolerance(sampler.surrogate.epsilon)
        if isinstance(rule, FixedTolerance):
            sections.append(
                (SECTION_TOLERANCE, {CFG_EPSILON: format_float(rule.epsilon)})
            )
        else:
            sections.append(
                (
                    SECTION_TOLERANCE,
                    {
                        CFG_QUANTILE: format_float(rule.quantile),
                        CFG_PILOT_SIZE: str(rule.pilot_size),
                    },
                )
            )

    surrogate = _emit_surrogate(sampler.surrogate)
    if surrogate is not None:
        sections.append(surrogate)

    if isinstance(sampler, MhConfig):
        mh = {
            CFG_PROPOSAL_SCALE: format_floats(sampler.proposal_scale),
            CFG_BURN_IN: str(sampler.burn_in),
        }
        if config.init is not None:
            mh[CFG_INIT] = format_floats(config.init)
        sections.append((SECTION_MH, mh))

    lines: list[str] = []
    for name, items in sections:
        if lines:
            lines.append("")
        lines.append(f"[{name}]")
        lines.extend(f"{key} = {value}" for key, value in items.items())
    return "\n".join(lines) + "\n"
