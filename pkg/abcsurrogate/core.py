"""ABC core types: parameters, datasets, RNG streams and simulators."""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np
import numpy.typing as npt

from .common import StreamDomain
from .const import ABC_NAMES
from .exceptions import (
    CouplingNotAvailable,
    DimensionMismatch,
    EstimatorNotAvailable,
    InvalidData,
    InvalidParam,
)

if TYPE_CHECKING:
    from .summaries import StatisticSpec

FloatArray = npt.NDArray[np.float64]

SEED_MAX: int = 2**64


@dataclass(frozen=True)
class ParamVector:
    """Point θ of the parameter space, with named components."""

    values: tuple[float, ...]
    names: tuple[str, ...]

    def __post_init__(self) -> None:
        """ParamVector validation."""
        if len(self.values) != len(self.names):
            raise DimensionMismatch(
                f"ParamVector: {len(self.values)} values for {len(self.names)} names"
            )
        if not all(np.isfinite(self.values)):
            raise InvalidParam(f"ParamVector: non-finite value in {self.values}")

    @classmethod
    def from_array(cls, values: Any, names: Sequence[str]) -> ParamVector:
        """Build ParamVector from an array-like."""
        return cls(
            tuple(float(value) for value in np.ravel(values)),
            tuple(names),
        )

    def array(self) -> FloatArray:
        """Return values as a float64 array."""
        return np.asarray(self.values, dtype=np.float64)

    def data(self) -> dict[str, float]:
        """Return parameter values keyed by name."""
        return dict(zip(self.names, self.values, strict=True))

    def get_dimension(self) -> int:
        """Return parameter dimension d."""
        return len(self.values)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Observed or simulated data y_n.

    Continuous models store real observations. Lattice models store integer
    states in {1..k} flattened in raster order together with the lattice shape.
    Mixed-effects data carry block labels and the fixed-effect design.
    """

    observations: npt.NDArray[Any]
    states: int | None = None
    shape: tuple[int, int] | None = None
    blocks: npt.NDArray[np.int64] | None = None
    design: FloatArray | None = None

    def __post_init__(self) -> None:
        """Dataset validation."""
        if self.states is None:
            obs = np.array(self.observations, dtype=np.float64).ravel()
            if not np.all(np.isfinite(obs)):
                raise InvalidData("Dataset: non-finite observation")
        else:
            obs = np.array(self.observations, dtype=np.int64).ravel()
            if self.states < 2:
                raise InvalidData(f"Dataset: state count {self.states} < 2")
            if obs.size > 0 and (obs.min() < 1 or obs.max() > self.states):
                raise InvalidData(f"Dataset: states outside 1..{self.states}")
        if obs.size < 1:
            raise InvalidData("Dataset: n must be >= 1")
        obs.flags.writeable = False
        object.__setattr__(self, "observations", obs)

        if self.shape is not None and self.shape[0] * self.shape[1] != obs.size:
            raise InvalidData(f"Dataset: shape {self.shape} does not hold n={obs.size}")

        if self.blocks is not None:
            blocks = np.array(self.blocks, dtype=np.int64).ravel()
            if blocks.size != obs.size:
                raise InvalidData("Dataset: one block label per observation required")
            blocks.flags.writeable = False
            object.__setattr__(self, "blocks", blocks)

        if self.design is not None:
            design = np.array(self.design, dtype=np.float64)
            if design.ndim == 1:
                design = design[:, None]
            if design.shape[0] != obs.size:
                raise InvalidData("Dataset: one design row per observation required")
            design.flags.writeable = False
            object.__setattr__(self, "design", design)

    @property
    def n(self) -> int:
        """Return sample size n."""
        return int(self.observations.size)

    def is_lattice(self) -> bool:
        """Return if the dataset holds discrete lattice states."""
        return self.states is not None and self.shape is not None

    def lattice(self) -> npt.NDArray[np.int64]:
        """Return lattice states as a rows x cols array."""
        if self.shape is None:
            raise InvalidData("Dataset: not a lattice")
        return self.observations.reshape(self.shape)

    def same(self, other: Dataset) -> bool:
        """Return if both datasets hold bitwise identical observations."""
        return (
            self.observations.dtype == other.observations.dtype
            and self.observations.tobytes() == other.observations.tobytes()
        )


@dataclass(frozen=True)
class RngStream:
    """Counter-based RNG stream, one per IS iteration.

    Streams are keyed by (seed, domain, stream_id) through a spawned
    SeedSequence feeding a Philox generator, so distinct ids give independent
    sequences and every stream can be rebuilt on any worker.
    """

    seed: int
    stream_id: int
    domain: StreamDomain = StreamDomain.ITERATION

    def __post_init__(self) -> None:
        """RngStream validation."""
        if not 0 <= self.seed < SEED_MAX:
            raise InvalidParam(f"RngStream: seed {self.seed} is not a 64-bit value")
        if not 0 <= self.stream_id < SEED_MAX:
            raise InvalidParam(f"RngStream: stream id {self.stream_id} out of range")

    def generator(self) -> np.random.Generator:
        """Return a fresh generator positioned at the start of the stream."""
        seq = np.random.SeedSequence(
            self.seed, spawn_key=(int(self.domain), self.stream_id)
        )
        return np.random.Generator(np.random.Philox(seq))


def make_streams(
    seed: int,
    count: int,
    domain: StreamDomain = StreamDomain.ITERATION,
    start: int = 0,
) -> list[RngStream]:
    """Return `count` independent streams derived from `seed`."""
    if count < 1:
        raise InvalidParam(f"make_streams: count {count} < 1")
    return [RngStream(seed, start + index, domain) for index in range(count)]


class Simulator(ABC):
    """Generative model f(·|θ) with a fixed data size n."""

    def __init__(self, names: Sequence[str], n: int):
        """Simulator init."""
        if n < 1:
            raise InvalidParam(f"{type(self).__name__}: n={n} < 1")
        self.names: tuple[str, ...] = tuple(names)
        self.n: int = n

    @property
    def dimension(self) -> int:
        """Return parameter dimension d."""
        return len(self.names)

    def check(self, theta: ParamVector) -> FloatArray:
        """Return θ as an array after checking its dimension."""
        if theta.get_dimension() != self.dimension:
            raise DimensionMismatch(
                f"{type(self).__name__}: expected d={self.dimension}, "
                f"got {theta.get_dimension()}"
            )
        return theta.array()

    def data(self) -> dict[str, Any]:
        """Return simulator description."""
        return {ABC_NAMES: list(self.names)}

    def parameters(self, values: Any) -> ParamVector:
        """Return ParamVector for this model."""
        return ParamVector.from_array(values, self.names)

    def make_dataset(self, values: Any) -> Dataset:
        """Wrap observed values as a Dataset of this model."""
        return Dataset(np.asarray(values))

    @abstractmethod
    def default_statistic(self) -> StatisticSpec:
        """Return the model's default summary statistic."""

    @abstractmethod
    def simulate(
        self,
        theta: ParamVector,
        rng: np.random.Generator,
        size: int | None = None,
    ) -> Dataset:
        """Draw one dataset z ~ f(·|θ) of `size` (default n) observations."""

    def has_coupling(self) -> bool:
        """Return if the model exposes a deterministic coupling z(u, θ)."""
        return False

    def draw_coupling(
        self, rng: np.random.Generator, size: int | None = None
    ) -> FloatArray:
        """Draw a coupling vector u."""
        raise CouplingNotAvailable(f"{type(self).__name__}: no coupling")

    def couple(self, theta: ParamVector, u: FloatArray) -> Dataset:
        """Map coupling vector u and θ to a dataset."""
        raise CouplingNotAvailable(f"{type(self).__name__}: no coupling")

    def estimate(self, data: Dataset, index: npt.NDArray[np.int64]) -> FloatArray:
        """Return point estimates of θ, one row per row of resample indices."""
        raise EstimatorNotAvailable(f"{type(self).__name__}: no point estimator")
