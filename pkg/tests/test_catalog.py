#!/usr/bin/env python3

"""
Every built-in space: graph residuals, fundamental tensor oracle, verdicts and the advisory Latifi check
"""

import pytest

from geograph.enums import Provenance, Verdict
from geograph.graphs import choose_graph, latifi_residual, reductivity_verdict, solve_linear_graph_symbolic
from geograph.space import catalog_names
from geograph.verify import SampleConfig, equivariance_residual, fundamental_tensor_oracle, geodesic_residual, \
    homogeneity_residual

CATALOG = catalog_names()

EXPECTED_VERDICTS = {
    "h3": Verdict.NATURALLY_REDUCTIVE,
    "h3xR": Verdict.NATURALLY_REDUCTIVE,
    "h3xR-beta": Verdict.NATURALLY_REDUCTIVE,
    "h3xh3-fproduct": Verdict.NATURALLY_REDUCTIVE,
    "h3-qpower": Verdict.GO_NOT_NATURALLY_REDUCTIVE,
    "h3-alphabeta": Verdict.GO_NOT_NATURALLY_REDUCTIVE,
    "h3xR-two-forms": Verdict.GO_NOT_NATURALLY_REDUCTIVE,
}

EXPECTED_PROVENANCE = {
    "h3": Provenance.THEOREM1,
    "h3xR": Provenance.THEOREM1,
    "h3xR-beta": Provenance.THEOREM1,
    "h3xh3-fproduct": Provenance.THEOREM1,
    "h3-qpower": Provenance.THEOREM1,
    "h3-alphabeta": Provenance.PROP13,
    "h3xR-two-forms": Provenance.POINTWISE,
}


@pytest.fixture(scope="module")
def graphs(catalog):
    graphs = {}
    for name, space_file in catalog.items():
        linsym = solve_linear_graph_symbolic(space_file.space, space_file.family)
        graphs[name], _ = choose_graph(space_file.space, space_file.norm, linsym)
    return graphs


@pytest.fixture(scope="module")
def verdicts(catalog):
    return {name: reductivity_verdict(space_file.space, space_file.norm, SampleConfig(200, 0))
            for name, space_file in catalog.items()}


def test_catalog_is_complete():
    assert set(CATALOG) == set(EXPECTED_VERDICTS)


@pytest.mark.parametrize("name", CATALOG)
def test_graph_provenance(graphs, name):
    assert graphs[name].provenance is EXPECTED_PROVENANCE[name]


@pytest.mark.parametrize("name", CATALOG)
def test_geodesic_residual(catalog, graphs, name):
    report = geodesic_residual(catalog[name].norm, graphs[name], SampleConfig(500, 0))
    assert report.samples == 500 + len(catalog[name].space.m_labels) ** 2
    assert report.passed, report.to_dict()


@pytest.mark.parametrize("name", CATALOG)
def test_fundamental_tensor_oracle(catalog, name):
    report = fundamental_tensor_oracle(catalog[name].norm, SampleConfig(100, 0))
    assert report.passed, report.to_dict()


@pytest.mark.parametrize("name", CATALOG)
def test_equivariance_and_homogeneity(graphs, name, config):
    assert equivariance_residual(graphs[name], config).passed
    assert homogeneity_residual(graphs[name], config).passed


@pytest.mark.parametrize("name", CATALOG)
def test_verdict(verdicts, name):
    assert verdicts[name].verdict is EXPECTED_VERDICTS[name]


def test_qpower_verdict_has_linearity_witness(verdicts):
    verdict = verdicts["h3-qpower"]
    probe = next(report for report in verdict.evidence if report.check == "linearity_probe")
    assert not probe.passed
    assert len(verdict.witness) == 3


def test_fproduct_passes_exact_check_in_shifted_split(verdicts):
    verdict = verdicts["h3xh3-fproduct"]
    f1 = [report for report in verdict.evidence if report.check == "natred_f1"]
    assert len(f1) == 2 and all(report.passed for report in f1)
    assert verdict.linear_graph == ("xi[D1] = 2 * y3", "xi[D2] = 3 * y6")
    assert verdict.split_labels == ("E1", "E2", "E3'", "F1", "F2", "F3'")


@pytest.mark.parametrize("name, threshold", [("h3xR-beta", 1e-12), ("h3xR-two-forms", 1e-10)])
def test_zeroed_form_companion(verdicts, name, threshold):
    report = next(report for report in verdicts[name].evidence if report.check == "compare_graphs")
    assert report.threshold == threshold
    assert report.passed


@pytest.mark.parametrize("name", [name for name, verdict in EXPECTED_VERDICTS.items()
                                  if verdict is Verdict.NATURALLY_REDUCTIVE])
def test_latifi_small_when_naturally_reductive(verdicts, name):
    report = next(report for report in verdicts[name].evidence if report.check == "latifi_residual")
    assert report.passed, report.to_dict()


def test_latifi_large_for_qpower(catalog):
    space_file = catalog["h3-qpower"]
    assert latifi_residual(space_file.space, space_file.norm).max_residual > 1e-2
