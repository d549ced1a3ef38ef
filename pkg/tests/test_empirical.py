from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from abcsurrogate.common import ConstraintKind
from abcsurrogate.core import Dataset, ParamVector, RngStream
from abcsurrogate.empirical import (
    ConstraintSet,
    fit_empirical_likelihood,
    solve_empirical_likelihood,
)
from abcsurrogate.exceptions import IncompatibleStatistic, InvalidSurrogate

MEAN = ConstraintSet(ConstraintKind.MEAN)
MEAN_VAR = ConstraintSet(ConstraintKind.MEAN_VAR)


def _mu(value: float) -> ParamVector:
    return ParamVector((value,), ("mu",))


def test_constraint_set_defaults():
    assert MEAN.indices == (0,)
    assert MEAN_VAR.indices == (0, 1)
    assert MEAN_VAR.count == 2
    with pytest.raises(InvalidSurrogate, match="needs 2 indices"):
        ConstraintSet(ConstraintKind.MEAN_VAR, (0,))
    with pytest.raises(InvalidSurrogate, match="unknown"):
        ConstraintSet(ConstraintKind("median"))


def test_sample_mean_gives_uniform_weights():
    data = Dataset(np.array([1.0, 2.0, 3.0]))
    fit = fit_empirical_likelihood(data, _mu(2.0), MEAN)
    assert fit.feasible()
    assert fit.weights == pytest.approx(np.full(3, 1.0 / 3.0))
    assert fit.log_el == pytest.approx(-3.0 * math.log(3.0))


def test_profile_matches_brute_force():
    data = Dataset(np.array([1.0, 2.0, 3.0]))
    fit = fit_empirical_likelihood(data, _mu(2.5), MEAN)
    # p = (t, 0.5 - 2t, 0.5 + t) spans every feasible weight vector
    t = np.linspace(1e-7, 0.25 - 1e-7, 200001)
    brute = np.max(np.log(t) + np.log(0.5 - 2.0 * t) + np.log(0.5 + t))
    assert fit.feasible()
    assert fit.log_el == pytest.approx(brute, abs=1e-6)
    assert fit.weights.sum() == pytest.approx(1.0, abs=1e-8)
    assert float(fit.weights @ (data.observations - 2.5)) == pytest.approx(
        0.0, abs=1e-8
    )


def test_outside_hull_is_infeasible():
    data = Dataset(np.array([1.0, 2.0, 3.0]))
    for value in (0.5, 3.0, 4.0):
        fit = fit_empirical_likelihood(data, _mu(value), MEAN)
        assert not fit.feasible()
        assert fit.log_el == -math.inf
        assert not fit.weights.any()


def test_mean_var_at_moment_estimates():
    data = Dataset(np.array([1.0, 2.0, 3.0, 4.0]))
    theta = ParamVector((2.5, 1.25), ("mu", "var"))
    fit = fit_empirical_likelihood(data, theta, MEAN_VAR)
    assert fit.log_el == pytest.approx(-4.0 * math.log(4.0))


def test_mean_var_off_centre_is_below_maximum():
    data = Dataset(np.array([0.3, 1.1, 1.9, 2.2, 3.5, 4.0, 4.4, 5.1]))
    best = -8.0 * math.log(8.0)
    theta = ParamVector((2.6, 2.0), ("mu", "var"))
    fit = fit_empirical_likelihood(data, theta, MEAN_VAR)
    assert fit.feasible()
    assert fit.log_el < best
    assert fit.weights.sum() == pytest.approx(1.0, abs=1e-8)


def test_solver_on_raw_moment_matrix():
    h = np.array([[-1.0], [0.0], [2.0]])
    fit = solve_empirical_likelihood(h)
    assert fit.feasible()
    assert fit.multiplier.shape == (1,)
    assert float(fit.weights @ h[:, 0]) == pytest.approx(0.0, abs=1e-8)


def test_constraint_limits():
    with pytest.raises(InvalidSurrogate, match="d=1"):
        fit_empirical_likelihood(Dataset(np.arange(5.0)), _mu(2.0), MEAN_VAR)
    with pytest.raises(InvalidSurrogate, match="n-1=1"):
        fit_empirical_likelihood(
            Dataset(np.array([1.0, 2.0])),
            ParamVector((1.5, 0.25), ("mu", "var")),
            MEAN_VAR,
        )
    lattice = Dataset(np.array([1, 2, 2, 1]), states=2, shape=(2, 2))
    with pytest.raises(IncompatibleStatistic):
        fit_empirical_likelihood(lattice, _mu(1.5), MEAN)


def test_sample_mean_is_fixed_point_for_random_data():
    rng = RngStream(8, 0).generator()
    for _ in range(100):
        n = int(rng.integers(5, 201))
        values = rng.normal(rng.uniform(-5.0, 5.0), rng.uniform(0.1, 3.0), n)
        fit = fit_empirical_likelihood(Dataset(values), _mu(values.mean()), MEAN)
        assert fit.feasible()
        assert np.abs(fit.weights - 1.0 / n).max() < 1e-12
        assert abs(fit.log_el + n * math.log(n)) < 1e-10


def test_feasibility_matches_convex_hull():
    rng = RngStream(9, 0).generator()
    checked = {True: 0, False: 0}
    for _ in range(300):
        n = int(rng.integers(4, 13))
        h = rng.normal(size=(n, 2)) + rng.normal(scale=1.5, size=2)
        hull = ConvexHull(h)
        # Facet offsets are signed distances of the origin, negative inside.
        depth = -float(hull.equations[:, 2].max())
        if abs(depth) < 0.05:
            continue
        fit = solve_empirical_likelihood(h)
        assert fit.feasible() == (depth > 0.0)
        if fit.feasible():
            assert fit.weights.sum() == pytest.approx(1.0, abs=1e-8)
            assert np.abs(fit.weights @ h).max() < 1e-8
        checked[depth > 0.0] += 1
    assert min(checked.values()) > 20
