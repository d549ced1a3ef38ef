from __future__ import annotations

import math

import numpy as np
import pytest

from abcsurrogate.common import DesignColumn, NoiseFamily
from abcsurrogate.core import Dataset, RngStream
from abcsurrogate.exceptions import InvalidData, InvalidParam
from abcsurrogate.mixedeffects import (
    MixedEffectsConfig,
    MixedEffectsModel,
    design_matrix,
    method_of_moments,
    mixed_effects_names,
    mixed_effects_simulate,
)

INTERCEPT_TREND = (DesignColumn.INTERCEPT, DesignColumn.TREND)


def _config(sizes=(3, 4, 5), noise=NoiseFamily.NORMAL) -> MixedEffectsConfig:
    return MixedEffectsConfig(
        sizes, design_matrix(INTERCEPT_TREND, sum(sizes)), noise=noise
    )


def test_design_matrix():
    design = design_matrix(INTERCEPT_TREND, 5)
    assert design[:, 0].tolist() == [1.0] * 5
    assert design[:, 1].tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]
    with pytest.raises(InvalidParam, match="no design"):
        design_matrix((), 5)
    with pytest.raises(InvalidParam, match="unknown"):
        design_matrix((DesignColumn("quadratic"),), 5)


def test_mixed_effects_names():
    assert mixed_effects_names(2) == ("beta1", "beta2", "zeta", "sigma")


def test_config_validation():
    with pytest.raises(InvalidParam, match="2 blocks"):
        MixedEffectsConfig((4,), np.ones(4))
    with pytest.raises(InvalidParam, match="empty block"):
        MixedEffectsConfig((2, 0), np.ones(2))
    with pytest.raises(InvalidParam, match="3 rows, n=4"):
        MixedEffectsConfig((2, 2), np.ones(3))
    with pytest.raises(InvalidParam, match="full column rank"):
        MixedEffectsConfig((2, 2), np.ones((4, 2)))
    with pytest.raises(InvalidParam, match="dof"):
        MixedEffectsConfig((2, 2), np.ones(4), dof=0.0)
    config = _config()
    assert config.n == 12
    assert config.coefficients == 2
    assert config.blocks.tolist() == [0] * 3 + [1] * 4 + [2] * 5
    assert "dof" not in config.data()
    assert _config(noise=NoiseFamily.STUDENT_T).data()["dof"] == 5.0


def test_noise_free_simulation_is_the_fixed_effect():
    config = _config()
    rng = RngStream(1, 0).generator()
    beta = np.array([1.0, 2.0])
    data = mixed_effects_simulate(config, beta, 0.0, 0.0, rng)
    assert data.observations == pytest.approx(config.design @ beta)
    assert data.blocks is not None
    estimate = method_of_moments(data.observations, config.design, config.blocks)
    assert estimate == pytest.approx([1.0, 2.0, 0.0, 0.0], abs=1e-10)
    with pytest.raises(InvalidParam, match="coefficients"):
        mixed_effects_simulate(config, np.ones(3), 1.0, 1.0, rng)
    with pytest.raises(InvalidParam, match="must be >= 0"):
        mixed_effects_simulate(config, beta, -1.0, 1.0, rng)


def test_method_of_moments_by_hand():
    y = np.array([1.0, 3.0, 5.0, 7.0])
    blocks = np.array([0, 0, 1, 1])
    # residual block means -2 and 2, within variance 2, between variance 8
    estimate = method_of_moments(y, np.ones((4, 1)), blocks)
    assert estimate == pytest.approx([4.0, math.sqrt(7.0), math.sqrt(2.0)])


def test_method_of_moments_floors_zeta():
    y = np.array([0.0, 2.0, 0.1, 1.9])
    estimate = method_of_moments(y, np.ones((4, 1)), np.array([0, 0, 1, 1]))
    assert estimate[1] == 0.0


def test_mixed_effects_model():
    model = MixedEffectsModel(_config(noise=NoiseFamily.STUDENT_T))
    assert model.names == ("beta1", "beta2", "zeta", "sigma")
    theta = model.parameters([1.0, -1.0, 0.5, 1.0])
    first = model.simulate(theta, RngStream(3, 0).generator())
    assert first.same(model.simulate(theta, RngStream(3, 0).generator()))
    assert first.n == 12
    index = np.vstack([np.arange(12), np.arange(12)])
    estimates = model.estimate(first, index)
    assert estimates.shape == (2, 4)
    assert np.array_equal(estimates[0], estimates[1])
    assert model.make_dataset(np.zeros(12)).blocks is not None
    with pytest.raises(InvalidParam, match="n=12"):
        model.simulate(theta, RngStream(3, 0).generator(), size=5)
    with pytest.raises(InvalidData, match="no blocks"):
        model.estimate(Dataset(np.zeros(12)), index)


@pytest.mark.slow
def test_method_of_moments_recovers_truth():
    intercept = design_matrix((DesignColumn.INTERCEPT,), 4000)
    config = MixedEffectsConfig((20,) * 200, intercept)
    data = mixed_effects_simulate(
        config, np.array([1.0]), 0.5, 1.0, RngStream(8, 0).generator()
    )
    estimate = method_of_moments(data.observations, config.design, config.blocks)
    assert estimate == pytest.approx([1.0, 0.5, 1.0], abs=0.15)
