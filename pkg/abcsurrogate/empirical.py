"""ABC empirical likelihood surrogate."""

from __future__ import annotations

from dataclasses import dataclass
import logging
import math
from typing import Any

import numpy as np
from scipy import linalg

from .common import ConstraintKind
from .const import (
    CFG_KIND,
    EL_GRADIENT_TOL,
    EL_MAX_HALVINGS,
    EL_MAX_ITERATIONS,
    EL_SUM_TOL,
)
from .core import Dataset, FloatArray, ParamVector
from .exceptions import IncompatibleStatistic, InvalidSurrogate

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConstraintSet:
    """Moment functions h(y, θ) with E_F[h(Y, θ)] = 0.

    MEAN uses h = y - θ[i]; MEAN_VAR adds h = (y - θ[i])² - θ[j], where
    (i, j) are the component indices (default (0, 1)).
    """

    kind: ConstraintKind
    indices: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        """ConstraintSet validation."""
        if self.kind == ConstraintKind.UNKNOWN:
            raise InvalidSurrogate("ConstraintSet: unknown constraint kind")
        if not self.indices:
            object.__setattr__(self, "indices", tuple(range(self.kind.count())))
        if len(self.indices) != self.kind.count():
            raise InvalidSurrogate(
                f"ConstraintSet: {self.kind} needs {self.kind.count()} indices"
            )

    @property
    def count(self) -> int:
        """Return number of constraints q."""
        return self.kind.count()

    def evaluate(self, y: FloatArray, theta: FloatArray) -> FloatArray:
        """Return the n x q matrix of h(y_i, θ)."""
        if max(self.indices) >= theta.size:
            raise InvalidSurrogate(
                f"ConstraintSet: index {max(self.indices)} outside d={theta.size}"
            )
        centred = y - theta[self.indices[0]]
        if self.kind == ConstraintKind.MEAN:
            return centred[:, None]
        return np.column_stack([centred, centred**2 - theta[self.indices[1]]])

    def data(self) -> dict[str, Any]:
        """Return constraint data."""
        return {CFG_KIND: str(self.kind)}


@dataclass(frozen=True, eq=False)
class EmpiricalFit:
    """Profile weights p(θ) and log empirical likelihood."""

    weights: FloatArray
    log_el: float
    multiplier: FloatArray
    iterations: int

    def feasible(self) -> bool:
        """Return if 0 lies inside the convex hull of h(y_i, θ)."""
        return self.log_el > -math.inf


def _infeasible(n: int, q: int, iterations: int) -> EmpiricalFit:
    return EmpiricalFit(np.zeros(n), -math.inf, np.full(q, np.nan), iterations)


def _dual(lam: FloatArray, h: FloatArray) -> float:
    arg = 1.0 + h @ lam
    if np.any(arg <= 0.0):
        return math.inf
    return float(-np.sum(np.log(arg)))


def solve_empirical_likelihood(h: FloatArray) -> EmpiricalFit:
    """Maximize Σ log p_i subject to Σ p_i = 1 and Σ p_i h_i = 0.

    The Lagrange dual λ minimizes -Σ log(1 + λᵀh_i) and is found by damped
    Newton with step halving; p_i = 1 / (n(1 + λᵀh_i)).
    """
    n, q = h.shape
    if q == 1 and (np.min(h) >= 0.0 or np.max(h) <= 0.0):
        return _infeasible(n, q, 0)

    lam = np.zeros(q)
    value = _dual(lam, h)
    converged = False
    iteration = 0
    for iteration in range(1, EL_MAX_ITERATIONS + 1):
        arg = 1.0 + h @ lam
        gradient = -(h / arg[:, None]).sum(axis=0)
        if float(np.linalg.norm(gradient)) < EL_GRADIENT_TOL:
            converged = True
            break
        scaled = h / arg[:, None]
        hessian = scaled.T @ scaled
        try:
            step = linalg.solve(hessian, -gradient, assume_a="pos")
        except (linalg.LinAlgError, ValueError):
            break
        # Rounding slack so steps at the optimum are not rejected.
        slack = 1e-14 * max(1.0, abs(value))
        for _ in range(EL_MAX_HALVINGS):
            candidate = lam + step
            candidate_value = _dual(candidate, h)
            if candidate_value <= value + slack:
                break
            step = step / 2.0
        else:
            break
        lam = candidate
        value = candidate_value

    if not converged:
        _LOGGER.debug(
            "fitEmpiricalLikelihood: no convergence after %s steps", iteration
        )
        return _infeasible(n, q, iteration)

    arg = 1.0 + h @ lam
    weights = 1.0 / (n * arg)
    if (
        np.any(weights > 1.0)
        or abs(float(weights.sum()) - 1.0) > EL_SUM_TOL
        or float(np.abs(weights @ h).max()) > EL_SUM_TOL
    ):
        _LOGGER.debug("fitEmpiricalLikelihood: multiplier diverged, 0 outside hull")
        return _infeasible(n, q, iteration)
    return EmpiricalFit(weights, float(np.sum(np.log(weights))), lam, iteration)


def fit_empirical_likelihood(
    data: Dataset, theta: ParamVector, constraints: ConstraintSet
) -> EmpiricalFit:
    """Return the EL profile weights of the observed data at θ."""
    if data.is_lattice():
        raise IncompatibleStatistic("fitEmpiricalLikelihood: lattice data")
    if constraints.count > theta.get_dimension():
        raise InvalidSurrogate(
            f"fitEmpiricalLikelihood: {constraints.count} constraints > "
            f"d={theta.get_dimension()}"
        )
    if constraints.count > data.n - 1:
        raise InvalidSurrogate(
            f"fitEmpiricalLikelihood: {constraints.count} constraints "
            f"> n-1={data.n - 1}"
        )
    h = constraints.evaluate(data.observations, theta.array())
    return solve_empirical_likelihood(h)
