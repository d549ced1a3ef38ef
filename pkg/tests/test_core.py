from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate, stats

from abcsurrogate.common import PriorFamily, StreamDomain
from abcsurrogate.core import Dataset, ParamVector, RngStream, make_streams
from abcsurrogate.exceptions import (
    CouplingNotAvailable,
    DimensionMismatch,
    EstimatorNotAvailable,
    InvalidData,
    InvalidParam,
    InvalidPrior,
)
from abcsurrogate.gk import GkModel
from abcsurrogate.oracle import BernoulliModel, ConjugateNormalModel
from abcsurrogate.prior import (
    Prior,
    PriorComponent,
    prior_log_density,
    prior_sample,
)


def test_param_vector_names_and_values():
    theta = ParamVector.from_array(np.array([1.0, 2.0]), ("a", "b"))
    assert theta.values == (1.0, 2.0)
    assert theta.data() == {"a": 1.0, "b": 2.0}
    assert theta.get_dimension() == 2


def test_param_vector_rejects_mismatch_and_nan():
    with pytest.raises(DimensionMismatch):
        ParamVector((1.0,), ("a", "b"))
    with pytest.raises(InvalidParam, match="non-finite"):
        ParamVector((math.nan,), ("a",))


def test_dataset_validation():
    with pytest.raises(InvalidData, match="non-finite"):
        Dataset(np.array([1.0, math.inf]))
    with pytest.raises(InvalidData, match="n must be"):
        Dataset(np.array([]))
    with pytest.raises(InvalidData, match="states outside"):
        Dataset(np.array([1, 3]), states=2, shape=(1, 2))
    with pytest.raises(InvalidData, match="shape"):
        Dataset(np.array([1, 2, 1]), states=2, shape=(2, 2))


def test_dataset_is_read_only():
    data = Dataset(np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        data.observations[0] = 5.0
    lattice = Dataset(np.array([1, 2, 2, 1]), states=2, shape=(2, 2))
    assert lattice.is_lattice()
    assert lattice.lattice().tolist() == [[1, 2], [2, 1]]
    assert not data.is_lattice()


def test_rng_stream_reproducible():
    first = RngStream(5, 3).generator().random(8)
    second = RngStream(5, 3).generator().random(8)
    assert np.array_equal(first, second)


def test_rng_streams_are_distinct():
    base = RngStream(5, 3).generator().random(8)
    assert not np.array_equal(base, RngStream(5, 4).generator().random(8))
    assert not np.array_equal(base, RngStream(6, 3).generator().random(8))
    other = RngStream(5, 3, StreamDomain.PILOT).generator().random(8)
    assert not np.array_equal(base, other)


def test_rng_stream_range():
    with pytest.raises(InvalidParam, match="seed"):
        RngStream(-1, 0)
    with pytest.raises(InvalidParam, match="stream id"):
        RngStream(0, 2**64)


def test_make_streams():
    streams = make_streams(9, 3, start=10)
    assert [stream.stream_id for stream in streams] == [10, 11, 12]
    assert all(stream.seed == 9 for stream in streams)
    with pytest.raises(InvalidParam):
        make_streams(9, 0)


def test_make_streams_are_uncorrelated():
    streams = make_streams(17, 10)
    draws = np.vstack([stream.generator().random(20000) for stream in streams])
    corr = np.corrcoef(draws)
    off_diagonal = corr[~np.eye(len(streams), dtype=bool)]
    assert np.max(np.abs(off_diagonal)) < 0.05
    lagged = np.corrcoef(draws[0, :-1], draws[1, 1:])[0, 1]
    assert abs(lagged) < 0.05


def test_prior_component_validation():
    with pytest.raises(InvalidPrior, match="uniform bounds"):
        PriorComponent.uniform("a", 1.0, 1.0)
    with pytest.raises(InvalidPrior, match="sd"):
        PriorComponent.normal("a", 0.0, 0.0)
    with pytest.raises(InvalidPrior, match="unknown"):
        PriorComponent("a", PriorFamily("beta"), 0.0, 1.0)


def test_prior_log_density():
    prior = Prior(
        [
            PriorComponent.uniform("a", 0.0, 2.0),
            PriorComponent.normal("b", 1.0, 0.5),
            PriorComponent.log_normal("c", 0.0, 1.0),
        ]
    )
    theta = ParamVector((1.0, 1.0, 1.0), prior.names)
    expected = (
        math.log(0.5)
        + stats.norm(1.0, 0.5).logpdf(1.0)
        + stats.lognorm(s=1.0).logpdf(1.0)
    )
    assert prior.log_density(theta) == pytest.approx(expected)
    assert prior.log_density(ParamVector((3.0, 1.0, 1.0), prior.names)) == -math.inf
    assert not prior.in_support(ParamVector((1.0, 1.0, -1.0), prior.names))


@pytest.mark.parametrize(
    "component",
    [
        PriorComponent.uniform("a", -1.0, 3.0),
        PriorComponent.normal("a", 1.0, 0.5),
        PriorComponent.log_normal("a", 0.0, 0.5),
    ],
    ids=["uniform", "normal", "log-normal"],
)
def test_prior_density_integrates_to_one(component):
    prior = Prior([component])
    lower, upper = component.support()
    grid = np.linspace(max(lower, -10.0), min(upper, 20.0), 4001)
    density = np.exp([prior.log_density(ParamVector((x,), ("a",))) for x in grid])
    assert integrate.trapezoid(density, grid) == pytest.approx(1.0, abs=1e-4)


def test_prior_sample_accepts_stream():
    prior = Prior([PriorComponent.normal("a", 0.0, 1.0)])
    stream = RngStream(12, 3)
    assert prior_sample(prior, stream) == prior_sample(prior, stream)
    assert prior_sample(prior, stream) == prior.sample(stream.generator())
    assert prior_log_density(prior, ParamVector((0.0,), ("a",))) == pytest.approx(
        -0.5 * math.log(2.0 * math.pi)
    )


def test_prior_sample_in_support(rng):
    prior = Prior(
        [PriorComponent.uniform("a", -1.0, 1.0), PriorComponent.log_normal("c", 0, 1)]
    )
    for _ in range(200):
        assert prior.in_support(prior.sample(rng))


def test_prior_rejects_duplicates():
    with pytest.raises(InvalidPrior, match="duplicate"):
        Prior([PriorComponent.normal("a", 0, 1), PriorComponent.normal("a", 0, 1)])
    with pytest.raises(InvalidPrior, match="no components"):
        Prior([])


def test_simulator_optional_entry_points(rng):
    model = BernoulliModel(5)
    assert not model.has_coupling()
    with pytest.raises(CouplingNotAvailable):
        model.draw_coupling(rng)
    with pytest.raises(CouplingNotAvailable):
        model.couple(model.parameters([0.5]), np.zeros(5))
    normal = ConjugateNormalModel(5)
    with pytest.raises(DimensionMismatch):
        normal.simulate(ParamVector((0.0, 1.0), ("a", "b")), rng)
    data = normal.simulate(normal.parameters([0.5]), rng, size=7)
    assert data.n == 7
    assert normal.make_dataset([1.0, 2.0]).n == 2


def test_conjugate_normal_coupling_matches_simulate():
    model = ConjugateNormalModel(6, likelihood_sd=2.0)
    theta = model.parameters([1.5])
    assert model.has_coupling()
    u = model.draw_coupling(RngStream(4, 1).generator())
    coupled = model.couple(theta, u)
    assert coupled.observations == pytest.approx(1.5 + 2.0 * u)
    simulated = model.simulate(theta, RngStream(4, 1).generator())
    assert simulated.observations == pytest.approx(coupled.observations)


def test_simulator_without_estimator(rng):
    model = GkModel(10)
    data = model.simulate(model.parameters([3.0, 1.0, 2.0, 0.5]), rng)
    with pytest.raises(EstimatorNotAvailable):
        model.estimate(data, np.arange(10)[None, :])
