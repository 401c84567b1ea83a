#!/usr/bin/env python3

"""
Shared fixtures: catalog spaces and a hand-built Heisenberg space
"""

import pytest

from geograph.algebra import HomogeneousSpace, LieAlgebraSpec, ModuleSplit, ReductiveSplit
from geograph.metrics import MetricFamily
from geograph.space import catalog_names, load_catalog_space
from geograph.verify import SampleConfig


HEISENBERG_STRUCTURE = {
    (0, 1): ((2, "1"),),
    (0, 3): ((1, "-1"),),
    (1, 3): ((0, "1"),),
}


@pytest.fixture
def heisenberg_algebra() -> LieAlgebraSpec:
    return LieAlgebraSpec(4, ("E1", "E2", "E3", "D"), HEISENBERG_STRUCTURE)


@pytest.fixture
def heisenberg_space(heisenberg_algebra) -> HomogeneousSpace:
    return HomogeneousSpace(heisenberg_algebra, ReductiveSplit((3,), (0, 1, 2)),
                            ModuleSplit(((0, 1), (2,)), (0, 1, 2)), maximal_isometry_group=True, name="h3")


@pytest.fixture
def heisenberg_family() -> MetricFamily:
    return MetricFamily.standard(((0, 1), (2,)), ("1", "c"))


@pytest.fixture(scope="session")
def catalog():
    return {name: load_catalog_space(name) for name in catalog_names()}


@pytest.fixture
def config() -> SampleConfig:
    return SampleConfig(count=200, seed=0)


@pytest.fixture(autouse=True)
def single_worker(monkeypatch):
    monkeypatch.delenv("GEOGRAPH_WORKERS", raising=False)
    monkeypatch.delenv("GEOGRAPH_CATALOG_DIR", raising=False)
