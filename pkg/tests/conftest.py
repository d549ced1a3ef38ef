"""Shared fixtures."""

from __future__ import annotations

import numpy as np
import pytest

from abcsurrogate.common import StreamDomain
from abcsurrogate.core import Dataset, ParamVector, RngStream
from abcsurrogate.oracle import ConjugateNormalModel
from abcsurrogate.prior import Prior, PriorComponent

NORMAL_CONFIG = """\
[run]
schema = 1.0
model = conjugate-normal
method = rejection
seed = 11
iterations = 2000

[prior.mu]
family = normal
mean = 0.0
sd = 2.0

[model]
n = 20

[observed]
truth = 1.0

[tolerance]
quantile = 0.05
pilot-size = 200
"""


@pytest.fixture
def rng() -> np.random.Generator:
    return RngStream(2024, 0).generator()


@pytest.fixture
def normal_model() -> ConjugateNormalModel:
    return ConjugateNormalModel(20)


@pytest.fixture
def normal_prior() -> Prior:
    return Prior([PriorComponent.normal("mu", 0.0, 2.0)])


@pytest.fixture
def normal_observed(normal_model: ConjugateNormalModel) -> Dataset:
    rng = RngStream(7, 0, StreamDomain.OBSERVED).generator()
    return normal_model.simulate(ParamVector((1.0,), ("mu",)), rng)


@pytest.fixture
def normal_config_text() -> str:
    return NORMAL_CONFIG
