#!/usr/bin/env python3

"""
Sampling, residual checks and worker fan-out
"""

import numpy as np
import pytest

from geograph.errors import ArgumentError
from geograph.graphs import LinearFixedGraph, PerturbedGraph, ZeroGraph
from geograph.metrics import MetricParams, QPowerNorm, WeightedSquaresNorm
from geograph.verify import SampleConfig, compare_graphs, equivariance_residual, fan_out, \
    fundamental_tensor_oracle, geodesic_residual, get_worker_count, homogeneity_residual, linearity_probe, \
    run_battery, sample_directions


@pytest.fixture
def riemannian(heisenberg_family):
    return WeightedSquaresNorm(("1",), heisenberg_family, (MetricParams((1, 2)),))


@pytest.fixture
def linear_graph(heisenberg_space):
    return LinearFixedGraph(heisenberg_space, [[0, 0, 2]])


def test_sample_directions_count_and_norm():
    points = sample_directions(3, SampleConfig(200, 0))
    # 200 random, 3 axes, 6 diagonals
    assert points.shape == (209, 3)
    assert np.allclose(np.linalg.norm(points, axis=1), 1.0)
    assert sample_directions(3, SampleConfig(200, 0, include_axes=False)).shape == (200, 3)


def test_sample_directions_are_seeded():
    first = sample_directions(4, SampleConfig(20, 7))
    assert np.array_equal(first, sample_directions(4, SampleConfig(20, 7)))
    assert not np.array_equal(first, sample_directions(4, SampleConfig(20, 8)))


def test_sample_config_rejects_zero_count():
    with pytest.raises(ArgumentError):
        SampleConfig(0, 0)


def test_linear_graph_passes_battery(heisenberg_space, riemannian, linear_graph, config):
    reports = run_battery(heisenberg_space, riemannian, linear_graph, config)
    assert [report.check for report in reports] == ["geodesic_residual", "homogeneity_residual",
                                                    "equivariance_residual", "fundamental_tensor_oracle"]
    assert all(report.passed for report in reports)


def test_wrong_graphs_fail_geodesic_residual(riemannian, linear_graph, config):
    perturbed = PerturbedGraph(linear_graph, [[0.1, 0.0, 0.0]])
    report = geodesic_residual(riemannian, perturbed, config)
    assert not report.passed
    assert len(report.witness) == 3
    assert not geodesic_residual(riemannian, ZeroGraph(linear_graph.space), config).passed


def test_perturbed_graph_is_still_homogeneous(linear_graph, config):
    perturbed = PerturbedGraph(linear_graph, [[0.1, 0.0, 0.0]])
    assert homogeneity_residual(perturbed, config).passed


def test_equivariance_of_linear_graph(linear_graph, config):
    assert equivariance_residual(linear_graph, config).passed
    # y -> y1 * D does not commute with the rotation of E1, E2
    assert not equivariance_residual(LinearFixedGraph(linear_graph.space, [[1, 0, 0]]), config).passed


def test_linearity_probe_recovers_matrix(linear_graph, config):
    probe = linearity_probe(linear_graph, config)
    assert probe.linear
    assert np.allclose(probe.matrix, [[0.0, 0.0, 2.0]], atol=1e-10)
    assert probe.as_report().detail == "linear"


def test_compare_graphs(linear_graph, heisenberg_space, config):
    same = LinearFixedGraph(heisenberg_space, [[0, 0, 2]])
    assert compare_graphs(linear_graph, same, config).passed
    report = compare_graphs(linear_graph, ZeroGraph(heisenberg_space), config)
    assert not report.passed
    assert report.detail == "linear_fixed vs custom"


def test_compare_graphs_dimension_mismatch(linear_graph, catalog, config):
    other = ZeroGraph(catalog["h3xR"].space)
    with pytest.raises(ArgumentError):
        compare_graphs(linear_graph, other, config)


def test_fundamental_tensor_oracle_qpower(heisenberg_family, config):
    norm = QPowerNorm("3", heisenberg_family, (MetricParams((1, 1)), MetricParams((1, 4))))
    report = fundamental_tensor_oracle(norm, config)
    assert report.passed
    assert report.samples == 100


@pytest.mark.parametrize("value", ["0", "-2", "two"])
def test_invalid_worker_count(monkeypatch, value):
    monkeypatch.setenv("GEOGRAPH_WORKERS", value)
    with pytest.raises(EnvironmentError):
        get_worker_count()


def test_threaded_fan_out_preserves_order(monkeypatch, riemannian, linear_graph, config):
    sequential = geodesic_residual(riemannian, PerturbedGraph(linear_graph, [[0.1, 0.0, 0.0]]), config)
    monkeypatch.setenv("GEOGRAPH_WORKERS", "4")
    assert get_worker_count() == 4
    assert fan_out(lambda item: item * 2, list(range(50))) == [item * 2 for item in range(50)]
    threaded = geodesic_residual(riemannian, PerturbedGraph(linear_graph, [[0.1, 0.0, 0.0]]), config)
    assert threaded == sequential
