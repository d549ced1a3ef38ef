from __future__ import annotations

import numpy as np
import pytest
from scipy import stats

from abcsurrogate.common import StreamDomain
from abcsurrogate.core import RngStream
from abcsurrogate.exceptions import InvalidParam
from abcsurrogate.gk import (
    GK_NAMES,
    GkModel,
    GkParams,
    gk_cdf,
    gk_pdf,
    gk_quantile,
    gk_simulate,
)
from abcsurrogate.prior import Prior, PriorComponent
from abcsurrogate.sampler import (
    QuantileTolerance,
    RunConfig,
    posterior_quantiles,
    run_abc_is,
)
from abcsurrogate.summaries import compute_summary

SKEWED = GkParams(3.0, 1.0, 2.0, 0.5)
NORMAL = GkParams(1.0, 2.0, 0.0, 0.0)


def test_gk_params_validation():
    with pytest.raises(InvalidParam, match="B=0"):
        GkParams(0.0, 0.0, 1.0, 1.0)
    with pytest.raises(InvalidParam, match="g=-1"):
        GkParams(0.0, 1.0, -1.0, 1.0)
    with pytest.raises(InvalidParam, match="k=-0.1"):
        GkParams(0.0, 1.0, 1.0, -0.1)


def test_gk_quantile_median_is_location():
    assert gk_quantile(SKEWED, 0.5) == 3.0
    values = gk_quantile(SKEWED, np.linspace(0.01, 0.99, 50))
    assert np.all(np.diff(values) > 0.0)
    with pytest.raises(InvalidParam, match="outside"):
        gk_quantile(SKEWED, [0.5, 1.0])
    with pytest.raises(InvalidParam, match="outside"):
        gk_quantile(SKEWED, 0.0)


def test_gk_without_skew_or_tails_is_normal():
    x = np.array([-2.0, 0.0, 1.0, 4.5])
    assert gk_cdf(NORMAL, x) == pytest.approx(stats.norm(1.0, 2.0).cdf(x))
    assert gk_pdf(NORMAL, x) == pytest.approx(stats.norm(1.0, 2.0).pdf(x))
    assert gk_quantile(NORMAL, 0.975) == pytest.approx(
        stats.norm(1.0, 2.0).ppf(0.975)
    )


def test_gk_cdf_inverts_quantile():
    u = np.array([0.001, 0.1, 0.5, 0.8, 0.999])
    assert gk_cdf(SKEWED, gk_quantile(SKEWED, u)) == pytest.approx(u, abs=1e-10)
    assert gk_cdf(SKEWED, [-1e12, 1e12]).tolist() == [0.0, 1.0]
    assert gk_pdf(SKEWED, [1e12]).tolist() == [0.0]


def test_gk_pdf_is_cdf_derivative():
    x = np.array([1.5, 2.8, 3.0, 4.2, 9.0])
    h = 1e-5
    numeric = (gk_cdf(SKEWED, x + h) - gk_cdf(SKEWED, x - h)) / (2.0 * h)
    assert gk_pdf(SKEWED, x) == pytest.approx(numeric, rel=1e-5)


def test_gk_model_coupling_is_deterministic():
    model = GkModel(40)
    theta = model.parameters([3.0, 1.0, 2.0, 0.5])
    assert model.names == GK_NAMES
    assert model.has_coupling()
    u = model.draw_coupling(RngStream(1, 0).generator())
    assert u.shape == (40,)
    assert model.couple(theta, u).same(model.couple(theta, u))
    assert model.couple(theta, u).observations == pytest.approx(
        gk_quantile(SKEWED, u)
    )


def test_gk_model_simulate():
    model = GkModel(25, c=0.7)
    theta = model.parameters([0.0, 1.0, 0.5, 0.1])
    first = model.simulate(theta, RngStream(4, 2).generator())
    second = model.simulate(theta, RngStream(4, 2).generator())
    assert first.n == 25
    assert first.same(second)
    assert model.simulate(theta, RngStream(4, 2).generator(), size=7).n == 7
    assert model.params(theta).c == 0.7
    assert model.data()["c"] == 0.7
    with pytest.raises(InvalidParam):
        model.params(model.parameters([0.0, -1.0, 0.5, 0.1]))


def test_gk_simulate_size():
    data = gk_simulate(SKEWED, 12, RngStream(3, 0).generator())
    assert data.n == 12
    with pytest.raises(InvalidParam, match="n=0"):
        gk_simulate(SKEWED, 0, RngStream(3, 0).generator())


@pytest.mark.slow
def test_gk_sample_octiles_match_quantiles():
    model = GkModel(200000)
    theta = model.parameters([3.0, 1.0, 2.0, 0.5])
    data = model.simulate(theta, RngStream(9, 0).generator())
    octiles = compute_summary(model.default_statistic(), data)
    expected = gk_quantile(SKEWED, np.arange(1, 8) / 8.0)
    assert octiles == pytest.approx(expected, rel=0.02)


def test_gk_quantile_is_increasing_for_random_params():
    rng = RngStream(6, 0).generator()
    u = np.linspace(0.001, 0.999, 2000)
    for _ in range(50):
        params = GkParams(
            rng.uniform(-5.0, 5.0),
            rng.uniform(0.1, 5.0),
            rng.uniform(0.0, 6.0),
            rng.uniform(0.0, 3.0),
        )
        assert np.all(np.diff(gk_quantile(params, u)) > 0.0)
        assert np.all(params.derivative_z(np.linspace(-4.0, 4.0, 401)) > 0.0)


def test_gk_samples_pass_goodness_of_fit():
    plain = gk_simulate(NORMAL, 10000, RngStream(14, 0).generator())
    assert stats.kstest(plain.observations, stats.norm(1.0, 2.0).cdf).pvalue > 0.001
    skewed = gk_simulate(SKEWED, 2000, RngStream(15, 0).generator())
    result = stats.kstest(skewed.observations, lambda x: gk_cdf(SKEWED, x))
    assert result.pvalue > 0.001


@pytest.mark.slow
def test_gk_rejection_intervals_cover_truth():
    model = GkModel(100)
    truth = model.parameters([3.0, 1.0, 2.0, 0.5])
    prior = Prior([PriorComponent.uniform(name, 0.0, 10.0) for name in GK_NAMES])
    covered = np.zeros(4, dtype=int)
    replicates = 20
    for replicate in range(replicates):
        observed = model.simulate(
            truth, RngStream(replicate, 0, StreamDomain.OBSERVED).generator()
        )
        config = RunConfig(
            iterations=20000,
            tolerance=QuantileTolerance(0.005, 2000),
            seed=replicate,
            workers=4,
        )
        sample = run_abc_is(model, prior, observed, config)
        low, high = posterior_quantiles(sample, [0.025, 0.975])
        covered += (low <= truth.array()) & (truth.array() <= high)
    assert np.all(covered >= 18)
