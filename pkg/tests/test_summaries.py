from __future__ import annotations

import math

import numpy as np
import pytest

from abcsurrogate.common import DistanceKind, KernelKind, StatisticKind
from abcsurrogate.const import MAD_FLOOR
from abcsurrogate.core import Dataset, RngStream
from abcsurrogate.exceptions import (
    DimensionMismatch,
    IncompatibleStatistic,
    InsufficientSamples,
    InvalidDistance,
    InvalidParam,
)
from abcsurrogate.summaries import (
    DistanceSpec,
    SmoothKernelSpec,
    StatisticSpec,
    compute_summary,
    distance,
    estimate_scales,
    potts_statistic,
    smooth_kernel,
)


def test_octiles():
    data = Dataset(np.arange(1.0, 10.0))
    summary = compute_summary(StatisticSpec.octiles(), data)
    assert summary == pytest.approx(np.linspace(2.0, 8.0, 7))


def test_moments():
    data = Dataset(np.array([1.0, 2.0, 3.0, 4.0]))
    summary = compute_summary(StatisticSpec(StatisticKind.MOMENTS, orders=(1, 2)), data)
    assert summary == pytest.approx([2.5, 1.25])


def test_identity_statistic_size_limit():
    spec = StatisticSpec(StatisticKind.IDENTITY)
    assert compute_summary(spec, Dataset(np.array([0.0, 1.0]))).tolist() == [0.0, 1.0]
    with pytest.raises(IncompatibleStatistic, match="identity"):
        compute_summary(spec, Dataset(np.zeros(101)))


def test_statistic_validation():
    with pytest.raises(InvalidParam, match="moment orders"):
        StatisticSpec(StatisticKind.MOMENTS)
    with pytest.raises(InvalidParam, match="quantile probs"):
        StatisticSpec(StatisticKind.QUANTILES, probs=(1.5,))
    with pytest.raises(InvalidParam, match="unknown"):
        StatisticSpec(StatisticKind("median"))


def test_potts_statistic():
    same = Dataset(np.array([2, 2, 2, 2]), states=2, shape=(2, 2))
    checker = Dataset(np.array([1, 2, 2, 1]), states=2, shape=(2, 2))
    spec = StatisticSpec(StatisticKind.POTTS)
    assert compute_summary(spec, same).tolist() == [4.0]
    assert compute_summary(spec, checker).tolist() == [0.0]
    states = np.array([[1, 1, 2, 2, 1, 1], [1, 2, 1, 2, 1, 2]])
    assert potts_statistic(states, 2, 3).tolist() == [3, 0]


def test_lattice_and_continuous_statistics_do_not_mix():
    lattice = Dataset(np.array([1, 2, 2, 1]), states=2, shape=(2, 2))
    with pytest.raises(IncompatibleStatistic):
        compute_summary(StatisticSpec.octiles(), lattice)
    with pytest.raises(IncompatibleStatistic):
        compute_summary(StatisticSpec(StatisticKind.POTTS), Dataset(np.ones(4)))


def test_mixed_effects_statistic():
    data = Dataset(
        np.array([1.0, 3.0, 5.0, 7.0]),
        blocks=np.array([0, 0, 1, 1]),
        design=np.ones(4),
    )
    summary = compute_summary(StatisticSpec(StatisticKind.MIXED_EFFECTS), data)
    # mean 4, block means 2 and 6, within variance (1+1+1+1)/2, slope 4
    assert summary == pytest.approx([4.0, 8.0, 2.0, 4.0])
    with pytest.raises(IncompatibleStatistic, match="blocks"):
        compute_summary(StatisticSpec(StatisticKind.MIXED_EFFECTS), Dataset(np.ones(4)))


def test_distance():
    euclidean = DistanceSpec(DistanceKind.EUCLIDEAN)
    scaled = DistanceSpec(DistanceKind.SCALED_EUCLIDEAN, (1.0, 2.0))
    assert distance(euclidean, np.zeros(2), np.array([3.0, 4.0])) == 5.0
    assert distance(scaled, np.zeros(2), np.array([3.0, 4.0])) == pytest.approx(
        math.sqrt(13.0)
    )
    with pytest.raises(DimensionMismatch):
        distance(euclidean, np.zeros(2), np.zeros(3))
    with pytest.raises(DimensionMismatch, match="scales"):
        distance(scaled, np.zeros(3), np.zeros(3))


def test_distance_validation():
    with pytest.raises(InvalidDistance, match="without scales"):
        DistanceSpec(DistanceKind.SCALED_EUCLIDEAN)
    with pytest.raises(InvalidDistance, match="non-positive"):
        DistanceSpec(DistanceKind.SCALED_EUCLIDEAN, (1.0, 0.0))


def test_estimate_scales():
    sims = [np.array([float(i), 5.0]) for i in range(21)]
    scales = estimate_scales(sims)
    assert scales[0] == pytest.approx(5.0)
    assert scales[1] == MAD_FLOOR
    with pytest.raises(InsufficientSamples):
        estimate_scales(sims[:19])


def test_smooth_kernels():
    epanechnikov = SmoothKernelSpec(KernelKind.EPANECHNIKOV, 2.0)
    gaussian = SmoothKernelSpec(KernelKind.GAUSSIAN, 1.0)
    assert smooth_kernel(epanechnikov, 0.0) == 0.75
    assert smooth_kernel(epanechnikov, 1.0) == pytest.approx(0.5625)
    assert smooth_kernel(epanechnikov, 2.0) == 0.0
    assert smooth_kernel(gaussian, 0.0) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi))
    with pytest.raises(InvalidParam, match="bandwidth"):
        SmoothKernelSpec(KernelKind.GAUSSIAN, 0.0)


@pytest.mark.parametrize(
    "spec",
    [
        DistanceSpec(DistanceKind.EUCLIDEAN),
        DistanceSpec(DistanceKind.SCALED_EUCLIDEAN, (0.5, 2.0, 1e-3, 7.0)),
    ],
)
def test_distance_is_a_metric(spec):
    rng = RngStream(10, 0).generator()
    for _ in range(500):
        a, b, c = rng.normal(scale=rng.uniform(0.1, 10.0), size=(3, 4))
        ab = distance(spec, a, b)
        assert ab >= 0.0
        assert distance(spec, a, a) == 0.0
        assert ab == distance(spec, b, a)
        assert ab <= distance(spec, a, c) + distance(spec, c, b) + 1e-9 * (1.0 + ab)
        if not np.array_equal(a, b):
            assert ab > 0.0


@pytest.mark.parametrize("kind", [KernelKind.GAUSSIAN, KernelKind.EPANECHNIKOV])
def test_smooth_kernel_is_non_increasing(kind):
    spec = SmoothKernelSpec(kind, 0.7)
    values = [smooth_kernel(spec, rho) for rho in np.linspace(0.0, 5.0, 501)]
    assert all(first >= second for first, second in zip(values, values[1:]))
    assert values[0] == max(values)
    assert values[0] > 0.0
