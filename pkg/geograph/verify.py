#!/usr/bin/env python3

"""
Residual battery for geodesic graphs and norms.

Every check samples directions of m, evaluates a normalised residual per sample and reduces with max.
Per-sample work fans out over GEOGRAPH_WORKERS threads.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from os import environ
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import lstsq

from geograph.algebra import HomogeneousSpace, exp_ad
from geograph.enums import Part
from geograph.errors import ArgumentError, RankDeficientSampleError
from geograph.globals import DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_WORKERS, EQUIVARIANCE_TIME_RANGE, \
    EQUIVARIANCE_TOL, FUNDAMENTAL_TENSOR_SAMPLES, FUNDAMENTAL_TENSOR_TOL, GEODESIC_RESIDUAL_TOL, \
    HOMOGENEITY_FACTORS, HOMOGENEITY_TOL, LINEARITY_TOL, COMPARE_GRAPHS_TOL, SAMPLE_CUBE_DENOMINATOR, \
    WORKERS_ENV_VAR
from geograph.logging import get_logger
from geograph.metrics import NormSpec, fundamental_tensor_fd, gy_covector, gy_pair

logger = get_logger()


def get_worker_count() -> int:
    """
    Thread count for sample fan-out, from GEOGRAPH_WORKERS
    :return:
    """
    value = environ.get(WORKERS_ENV_VAR, None)
    if value is None:
        return DEFAULT_WORKERS
    try:
        workers = int(value)
    except ValueError:
        logger.error(f"Please set the environment variable '{WORKERS_ENV_VAR}' to a positive integer, "
                     f"got '{value}'")
        raise EnvironmentError(f"{WORKERS_ENV_VAR} must be a positive integer")
    if workers < 1:
        logger.error(f"Please set the environment variable '{WORKERS_ENV_VAR}' to a positive integer, "
                     f"got '{value}'")
        raise EnvironmentError(f"{WORKERS_ENV_VAR} must be a positive integer")
    return workers


def fan_out(function: Callable, items: Sequence) -> List:
    """
    map over items, threaded when more than one worker is configured. Order is preserved.
    :param function:
    :param items:
    :return:
    """
    workers = get_worker_count()
    if workers == 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, items))


@dataclass(frozen=True)
class SampleConfig:
    count: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    include_axes: bool = True

    def __post_init__(self):
        if self.count < 1:
            logger.error(f"Sample count must be positive, got {self.count}")
            raise ArgumentError(f"Sample count must be positive, got {self.count}")


def sample_directions(dim: int, config: SampleConfig) -> np.ndarray:
    """
    Unit directions of R^dim: config.count uniform samples by rejection from a cube of rationals with
    denominator 2^20, followed (with include_axes) by every basis vector and every (e_i +- e_j)/sqrt(2)
    :param dim:
    :param config:
    :return: array of shape (n_points, dim)
    """
    rng = np.random.default_rng(config.seed)
    bound = SAMPLE_CUBE_DENOMINATOR
    points = []
    while len(points) < config.count:
        numerators = [int(value) for value in rng.integers(-bound, bound + 1, size=dim)]
        squared = sum(value * value for value in numerators)
        # Exact rejection: keep points of the closed unit ball, away from the origin
        if squared == 0 or squared > bound * bound:
            continue
        point = np.array(numerators, dtype=float)
        points.append(point / np.linalg.norm(point))

    if config.include_axes:
        identity = np.eye(dim)
        points.extend(identity[index] for index in range(dim))
        for i in range(dim):
            for j in range(i + 1, dim):
                points.append((identity[i] + identity[j]) / np.sqrt(2.0))
                points.append((identity[i] - identity[j]) / np.sqrt(2.0))

    return np.array(points).reshape(len(points), dim)


@dataclass(frozen=True)
class ResidualReport:
    """
    Result of one sampled check; passed iff max_residual <= threshold
    """
    check: str
    samples: int
    seed: int
    max_residual: float
    witness: Tuple[float, ...]
    threshold: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.threshold)

    def to_dict(self) -> Dict:
        return {"check": self.check, "samples": self.samples, "seed": self.seed,
                "max_residual": float(self.max_residual), "threshold": self.threshold,
                "passed": self.passed, "witness": [float(entry) for entry in self.witness],
                "detail": self.detail}


def _reduce(check: str, config: SampleConfig, residuals: Sequence[float], witnesses: Sequence,
            threshold: float, detail: str = "") -> ResidualReport:
    if not residuals:
        return ResidualReport(check, 0, config.seed, 0.0, (), threshold, detail)
    worst = int(np.argmax(residuals))
    report = ResidualReport(check=check, samples=len(residuals), seed=config.seed,
                            max_residual=float(residuals[worst]),
                            witness=tuple(float(entry) for entry in np.ravel(witnesses[worst])),
                            threshold=threshold, detail=detail)
    if report.passed:
        logger.debug(f"{check}: max residual {report.max_residual:.3e} <= {threshold:.1e}")
    else:
        logger.info(f"{check}: max residual {report.max_residual:.3e} above {threshold:.1e}")
    return report


def lemma_residual(space: HomogeneousSpace, spec: NormSpec, y: np.ndarray, xi: np.ndarray) -> float:
    """
    max_u |g_y(y, [y + xi, u]_m)| / (1 + |y|^2) over the m-basis u
    :param space:
    :param spec:
    :param y:
    :param xi:
    :return:
    """
    frame = space.frame
    brackets = np.einsum("p,pqk->qk", y, frame.mm_m_float)
    if space.dim_h:
        brackets = brackets + np.einsum("j,jqk->qk", xi, frame.hm_m_float)
    values = brackets @ gy_covector(spec, y)
    return float(np.max(np.abs(values)) / (1.0 + y @ y)) if len(values) else 0.0


def geodesic_residual(spec: NormSpec, graph, config: SampleConfig) -> ResidualReport:
    """
    Geodesic lemma residual of a graph through the fundamental-tensor pairing
    :param spec:
    :param graph: callable m -> h carrying its space
    :param config:
    :return:
    """
    points = sample_directions(graph.space.dim_m, config)
    residuals = fan_out(lambda y: lemma_residual(graph.space, spec, y, graph(y)), points)
    return _reduce("geodesic_residual", config, residuals, points, GEODESIC_RESIDUAL_TOL,
                   detail=graph.provenance.value)


@dataclass(frozen=True)
class LinearityProbe:
    """
    Least squares linear fit xi(y) ~ A y and its worst normalised deviation
    """
    matrix: np.ndarray = field(compare=False)
    deviation: float
    witness: Tuple[float, ...]
    samples: int
    seed: int

    @property
    def linear(self) -> bool:
        return bool(self.deviation <= LINEARITY_TOL)

    def as_report(self) -> ResidualReport:
        return ResidualReport("linearity_probe", self.samples, self.seed, self.deviation, self.witness,
                              LINEARITY_TOL, detail="linear" if self.linear else "nonlinear")


def linearity_probe(graph, config: SampleConfig) -> LinearityProbe:
    """
    Fit a linear map m -> h to sampled values of the graph. Axis directions are left out, pointwise
    solutions fall back to minimum norm there.
    :param graph:
    :param config:
    :return:
    """
    space = graph.space
    points = sample_directions(space.dim_m, replace(config, include_axes=False))
    if len(points) < max(space.dim_m * space.dim_h, space.dim_m):
        logger.error(f"Linearity probe needs at least {space.dim_m * space.dim_h} points, got {len(points)}")
        raise RankDeficientSampleError(f"Linearity probe needs at least {space.dim_m * space.dim_h} points")

    values = np.array(fan_out(graph, points)).reshape(len(points), space.dim_h)
    if space.dim_h == 0:
        return LinearityProbe(np.zeros((0, space.dim_m)), 0.0, tuple(points[0]), len(points), config.seed)

    solution, _, rank, _ = lstsq(points, values)
    if rank < space.dim_m:
        logger.error(f"Sample set has rank {rank} < dim m = {space.dim_m}")
        raise RankDeficientSampleError(f"Sample set has rank {rank} < dim m = {space.dim_m}")

    matrix = solution.T
    deviations = np.linalg.norm(values - points @ solution, axis=1) / (1.0 + np.linalg.norm(points, axis=1))
    worst = int(np.argmax(deviations))
    return LinearityProbe(matrix=matrix, deviation=float(deviations[worst]), witness=tuple(points[worst]),
                          samples=len(points), seed=config.seed)


def equivariance_residual(graph, config: SampleConfig) -> ResidualReport:
    """
    max |xi(exp(t ad w) y) - exp(t ad w)|_h xi(y)| / (1 + |y|) for random w in h and t
    :param graph:
    :param config:
    :return:
    """
    space = graph.space
    points = sample_directions(space.dim_m, config)
    rng = np.random.default_rng([config.seed, 1])
    low, high = EQUIVARIANCE_TIME_RANGE
    actions = [(rng.standard_normal(space.dim_h), rng.uniform(low, high)) for _ in points]

    def residual(item) -> float:
        y, (w, t) = item
        if space.dim_h == 0:
            return 0.0
        moved = exp_ad(space, w, t, Part.M) @ y
        expected = exp_ad(space, w, t, Part.H) @ graph(y)
        return float(np.linalg.norm(graph(moved) - expected) / (1.0 + np.linalg.norm(y)))

    residuals = fan_out(residual, list(zip(points, actions)))
    return _reduce("equivariance_residual", config, residuals, points, EQUIVARIANCE_TOL)


def compare_graphs(a, b, config: SampleConfig, threshold: float = COMPARE_GRAPHS_TOL) -> ResidualReport:
    """
    max |xi_a(y) - xi_b(y)| / (1 + |y|)
    :param a:
    :param b:
    :param config:
    :param threshold:
    :return:
    """
    if (a.space.dim_m, a.space.dim_h) != (b.space.dim_m, b.space.dim_h):
        logger.error("Graphs over spaces of different dimensions cannot be compared")
        raise ArgumentError("Graphs over spaces of different dimensions cannot be compared")
    points = sample_directions(a.space.dim_m, config)
    residuals = fan_out(lambda y: float(np.linalg.norm(a(y) - b(y)) / (1.0 + np.linalg.norm(y))), points)
    return _reduce("compare_graphs", config, residuals, points, threshold,
                   detail=f"{a.provenance.value} vs {b.provenance.value}")


def homogeneity_residual(graph, config: SampleConfig,
                         factors: Sequence[float] = HOMOGENEITY_FACTORS) -> ResidualReport:
    """
    max |xi(lambda y) - lambda xi(y)| / (1 + lambda |y|)
    :param graph:
    :param config:
    :param factors:
    :return:
    """
    points = sample_directions(graph.space.dim_m, config)

    def residual(y) -> float:
        base = graph(y)
        return max(float(np.linalg.norm(graph(factor * y) - factor * base) / (1.0 + factor * np.linalg.norm(y)))
                   for factor in factors)

    residuals = fan_out(residual, points)
    return _reduce("homogeneity_residual", config, residuals, points, HOMOGENEITY_TOL)


def fundamental_tensor_oracle(spec: NormSpec, config: SampleConfig) -> ResidualReport:
    """
    Closed-form g_y(y, v) against the contraction of the finite-difference Hessian of F^2 / 2
    :param spec:
    :param config:
    :return:
    """
    count = min(config.count, FUNDAMENTAL_TENSOR_SAMPLES)
    points = sample_directions(spec.family.dim_m, replace(config, count=count, include_axes=False))
    rng = np.random.default_rng([config.seed, 2])
    partners = [rng.standard_normal(spec.family.dim_m) for _ in points]

    def residual(item) -> float:
        y, v = item
        expected = gy_pair(spec, y, v)
        contracted = float(y @ fundamental_tensor_fd(spec, y) @ v)
        scale = max(abs(expected), spec.squared(y) * np.linalg.norm(v) / np.linalg.norm(y))
        return abs(contracted - expected) / scale

    residuals = fan_out(residual, list(zip(points, partners)))
    return _reduce("fundamental_tensor_oracle", config, residuals, points, FUNDAMENTAL_TENSOR_TOL)


def run_battery(space: HomogeneousSpace, spec: NormSpec, graph, config: SampleConfig) -> List[ResidualReport]:
    """
    Pass/fail residual checks for one graph on its own: geodesic lemma, homogeneity, equivariance and the
    fundamental tensor oracle. linearity_probe and compare_graphs need a second graph or a linearity
    question and are run by reductivity_verdict.
    :param space:
    :param spec:
    :param graph:
    :param config:
    :return:
    """
    logger.info(f"Running the residual battery on {space.name or 'space'} with the {graph.provenance.value} graph")
    return [geodesic_residual(spec, graph, config),
            homogeneity_residual(graph, config),
            equivariance_residual(graph, config),
            fundamental_tensor_oracle(spec, config)]
