"""ABC g-and-k quantile distribution model."""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Any

import numpy as np
import numpy.typing as npt
from scipy import optimize, special

from .const import CFG_C, CFG_N, DEFAULT_GK_C
from .core import Dataset, FloatArray, ParamVector, Simulator
from .exceptions import InvalidParam
from .summaries import StatisticSpec

GK_NAMES: tuple[str, ...] = ("A", "B", "g", "k")
GK_Z_LIMIT: float = 40.0


@dataclass(frozen=True)
class GkParams:
    """g-and-k parameters with asymmetry constant c."""

    A: float
    B: float
    g: float
    k: float
    c: float = DEFAULT_GK_C

    def __post_init__(self) -> None:
        """GkParams validation."""
        if not self.B > 0.0:
            raise InvalidParam(f"GkParams: B={self.B} <= 0")
        if not self.g >= 0.0:
            raise InvalidParam(f"GkParams: g={self.g} < 0")
        if not self.k >= 0.0:
            raise InvalidParam(f"GkParams: k={self.k} < 0")

    @classmethod
    def from_vector(cls, theta: ParamVector, c: float = DEFAULT_GK_C) -> GkParams:
        """Build GkParams from θ = (A, B, g, k)."""
        a, b, g, k = theta.values
        return cls(a, b, g, k, c)

    def quantile_z(self, z: npt.ArrayLike) -> FloatArray:
        """Return Q as a function of the standard normal quantile z."""
        z = np.asarray(z, dtype=np.float64)
        return np.asarray(
            self.A
            + self.B
            * (1.0 + self.c * np.tanh(self.g * z / 2.0))
            * z
            * (1.0 + z**2) ** self.k
        )

    def derivative_z(self, z: npt.ArrayLike) -> FloatArray:
        """Return dQ/dz."""
        z = np.asarray(z, dtype=np.float64)
        half = self.g * z / 2.0
        square = 1.0 + z**2
        return np.asarray(
            self.B
            * (
                self.c * self.g / 2.0 / np.cosh(half) ** 2 * z * square**self.k
                + (1.0 + self.c * np.tanh(half))
                * square ** (self.k - 1.0)
                * (1.0 + (2.0 * self.k + 1.0) * z**2)
            )
        )


def gk_quantile(params: GkParams, u: npt.ArrayLike) -> Any:
    """Return F⁻¹(u) = A + B(1 + c·tanh(g·z/2))·z·(1 + z²)^k, z = Φ⁻¹(u)."""
    values = np.asarray(u, dtype=np.float64)
    if np.any(~(values > 0.0)) or np.any(~(values < 1.0)):
        raise InvalidParam("gkQuantile: u outside (0, 1)")
    result = params.quantile_z(special.ndtri(values))
    if result.ndim == 0:
        return float(result)
    return result


def _solve_z(params: GkParams, x: float) -> float:
    """Return z with Q(z) = x, ±inf outside the representable range."""
    if x <= float(params.quantile_z(-GK_Z_LIMIT)):
        return -math.inf
    if x >= float(params.quantile_z(GK_Z_LIMIT)):
        return math.inf
    return float(
        optimize.brentq(
            lambda z: float(params.quantile_z(z)) - x,
            -GK_Z_LIMIT,
            GK_Z_LIMIT,
            xtol=1e-14,
        )
    )


def gk_cdf(params: GkParams, x: npt.ArrayLike) -> FloatArray:
    """Return F(x) by numerical inversion of the quantile function."""
    points = np.atleast_1d(np.asarray(x, dtype=np.float64))
    return np.asarray(special.ndtr([_solve_z(params, point) for point in points]))


def gk_pdf(params: GkParams, x: npt.ArrayLike) -> FloatArray:
    """Return f(x) = φ(z)/Q'(z) with z solving Q(z) = x."""
    points = np.atleast_1d(np.asarray(x, dtype=np.float64))
    density = np.zeros(points.size)
    for index, point in enumerate(points):
        z = _solve_z(params, point)
        if math.isfinite(z):
            density[index] = math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi) / float(
                params.derivative_z(z)
            )
    return density


class GkModel(Simulator):
    """i.i.d. g-and-k observations, simulated by inverse-CDF coupling."""

    def __init__(self, n: int, c: float = DEFAULT_GK_C):
        """GkModel init."""
        super().__init__(GK_NAMES, n)
        self.c = c

    def params(self, theta: ParamVector) -> GkParams:
        """Return GkParams of θ."""
        self.check(theta)
        return GkParams.from_vector(theta, self.c)

    def data(self) -> dict[str, Any]:
        """Return model description."""
        return {**super().data(), CFG_N: self.n, CFG_C: self.c}

    def default_statistic(self) -> StatisticSpec:
        """Return the octile statistic."""
        return StatisticSpec.octiles()

    def has_coupling(self) -> bool:
        """Return True, F⁻¹(U) is a deterministic coupling."""
        return True

    def draw_coupling(
        self, rng: np.random.Generator, size: int | None = None
    ) -> FloatArray:
        """Draw u ~ U(0, 1)^n, excluding 0."""
        return rng.uniform(np.finfo(np.float64).tiny, 1.0, size or self.n)

    def couple(self, theta: ParamVector, u: FloatArray) -> Dataset:
        """Return z(u, θ) = F⁻¹(u | θ)."""
        return Dataset(gk_quantile(self.params(theta), u))

    def simulate(
        self,
        theta: ParamVector,
        rng: np.random.Generator,
        size: int | None = None,
    ) -> Dataset:
        """Draw one g-and-k dataset."""
        return self.couple(theta, self.draw_coupling(rng, size))


def gk_simulate(params: GkParams, n: int, rng: np.random.Generator) -> Dataset:
    """Draw n i.i.d. g-and-k observations."""
    if n < 1:
        raise InvalidParam(f"gkSimulate: n={n} < 1")
    model = GkModel(n, params.c)
    return model.simulate(
        ParamVector((params.A, params.B, params.g, params.k), GK_NAMES), rng
    )
