from __future__ import annotations

import math

import numpy as np
import pytest

from abcsurrogate.common import DistanceKind, StatisticKind
from abcsurrogate.core import Dataset, RngStream
from abcsurrogate.exceptions import InvalidData, InvalidParam
from abcsurrogate.oracle import (
    BernoulliModel,
    ConjugateNormalConfig,
    ConjugateNormalModel,
    bernoulli_successes,
    beta_posterior_mean,
    conjugate_normal_posterior,
)
from abcsurrogate.prior import Prior, PriorComponent
from abcsurrogate.sampler import (
    FixedTolerance,
    RunConfig,
    posterior_expectation,
    run_abc_is,
)
from abcsurrogate.summaries import DistanceSpec, compute_summary, distance
from abcsurrogate.surrogate import weight_rejection

EUCLIDEAN = DistanceSpec(DistanceKind.EUCLIDEAN)


def test_bernoulli_model():
    model = BernoulliModel(8)
    data = model.simulate(model.parameters([0.3]), RngStream(1, 0).generator())
    assert set(data.observations.tolist()) <= {0.0, 1.0}
    assert model.default_statistic().kind == StatisticKind.IDENTITY
    with pytest.raises(InvalidParam, match="outside"):
        model.simulate(model.parameters([1.2]), RngStream(1, 0).generator())


def test_bernoulli_exact_likelihood_and_posterior():
    model = BernoulliModel(5)
    data = Dataset(np.array([1.0, 0.0, 1.0, 1.0, 0.0]))
    assert bernoulli_successes(data) == 3
    assert model.exact_likelihood(0.4, data) == pytest.approx(0.4**3 * 0.6**2)
    assert beta_posterior_mean(data) == pytest.approx(4.0 / 7.0)
    index = np.array([[0, 2, 3, 1, 4], [1, 1, 4, 4, 0]])
    assert model.estimate(data, index)[:, 0].tolist() == [0.6, 0.2]
    with pytest.raises(InvalidData, match="0 or 1"):
        bernoulli_successes(Dataset(np.array([0.5, 1.0])))


def test_conjugate_normal_posterior():
    config = ConjugateNormalConfig(0.0, 2.0, 1.0, 3)
    data = Dataset(np.array([1.0, 2.0, 3.0]))
    mean, sd = conjugate_normal_posterior(config, data)
    assert mean == pytest.approx(6.0 / 3.25)
    assert sd == pytest.approx(1.0 / math.sqrt(3.25))
    assert conjugate_normal_posterior(config, None) == (0.0, 2.0)
    assert config.data()["n"] == 3
    with pytest.raises(InvalidParam, match="sds"):
        ConjugateNormalConfig(0.0, 0.0, 1.0, 3)
    with pytest.raises(InvalidParam, match="n=-1"):
        ConjugateNormalConfig(0.0, 1.0, 1.0, -1)


def test_conjugate_normal_model():
    config = ConjugateNormalConfig(0.0, 2.0, 0.5, 30)
    model = ConjugateNormalModel.from_config(config)
    assert (model.n, model.likelihood_sd) == (30, 0.5)
    data = model.simulate(model.parameters([1.0]), RngStream(2, 0).generator())
    assert data.n == 30
    estimate = model.estimate(data, np.arange(30)[None, :])
    assert estimate.shape == (1, 1)
    assert estimate[0, 0] == pytest.approx(float(np.mean(data.observations)))
    assert model.data()["likelihood-sd"] == 0.5
    with pytest.raises(InvalidParam, match="sd"):
        ConjugateNormalModel(5, 0.0)


def test_bernoulli_indicator_weight_is_unbiased():
    model = BernoulliModel(5)
    observed = Dataset(np.array([1.0, 0.0, 1.0, 1.0, 0.0]))
    theta = model.parameters([0.4])
    statistic = model.default_statistic()
    obs = compute_summary(statistic, observed)
    rng = RngStream(31, 0).generator()
    draws = 100000
    weights = np.empty(draws)
    for index in range(draws):
        sim = compute_summary(statistic, model.simulate(theta, rng))
        weights[index] = weight_rejection(0.0, distance(EUCLIDEAN, obs, sim))
    exact = model.exact_likelihood(0.4, observed)
    se = math.sqrt(exact * (1.0 - exact) / draws)
    assert abs(weights.mean() - exact) < 3.0 * se


@pytest.mark.slow
def test_bernoulli_rejection_posterior_mean():
    model = BernoulliModel(5)
    observed = Dataset(np.array([1.0, 0.0, 1.0, 1.0, 0.0]))
    prior = Prior([PriorComponent.uniform("theta", 0.0, 1.0)])
    config = RunConfig(
        iterations=60000, distance=EUCLIDEAN, tolerance=FixedTolerance(0.0), workers=4
    )
    sample = run_abc_is(model, prior, observed, config)
    assert sample.accepted_count > 500
    assert posterior_expectation(sample)[0] == pytest.approx(
        beta_posterior_mean(observed), abs=0.02
    )
