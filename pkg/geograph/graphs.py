#!/usr/bin/env python3

"""
Geodesic graph solvers and the natural reductivity decision.

A geodesic graph is an Ad(H)-equivariant map xi: m -> h with y + xi(y) a geodesic vector for all y != 0.
Graphs here come from
  * a symbolic linear solve for the Riemannian family g = sum c^i alpha_i (coefficients rational in c),
  * the composition of that solution with c^i -> C_i(y) for Finsler norms of the family,
  * the one-form closed form xi = F_1 / L,_1 * sum_m L,_m w_m in a naturally reductive split,
  * a pointwise least squares solve of the Finsler geodesic lemma.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import lstsq

from geograph.algebra import HomogeneousSpace, ReductiveSplit, central_shift, shift_split
from geograph.enums import Provenance, SolutionKind, Verdict
from geograph.errors import DegenerateGraphError, InvalidMetricError, NonReductiveSplitError, \
    Prop13HypothesisError, Theorem1HypothesisError, ZeroDenominatorError
from geograph.exactnum import MPoly, RatFunc, VariableContext, coordinate_monomials, format_rational, \
    linear_solve_ratfunc
from geograph.globals import DENOMINATOR_FLOOR, DENOMINATOR_SAMPLES, DEFAULT_SEED, FIT_MAX_DENOMINATOR, \
    COMPARE_GRAPHS_TOL, LATIFI_SAMPLES, LATIFI_TOL, LSTSQ_RCOND, POINTWISE_COMPARE_TOL, POINTWISE_RESIDUAL_TOL
from geograph.logging import get_logger
from geograph.metrics import MetricFamily, MetricParams, NormSpec, OneFormSpec, BC_functions, \
    L_value_and_partials, cartan_tensor_fd, fundamental_tensor_fd, gy_covector, oneform_vector_bridge
from geograph.verify import ResidualReport, SampleConfig, compare_graphs, fan_out, geodesic_residual, \
    linearity_probe, sample_directions

logger = get_logger()


def coordinate_names(dim_m: int) -> Tuple[str, ...]:
    return tuple(f"y{index + 1}" for index in range(dim_m))


def _monomial_text(names: Sequence[str], exps: Sequence[int]) -> str:
    factors = []
    for name, exp in zip(names, exps):
        factors.extend([name] * exp)
    return "*".join(factors)


def _coefficient_text(coefficient: RatFunc) -> str:
    text = str(coefficient)
    if coefficient.is_polynomial and len(coefficient.num.terms) > 1:
        text = f"({text})"
    return text


def render_linear(h_labels: Sequence[str], matrix: Sequence[Sequence[RatFunc]]) -> List[str]:
    """
    One line per h-component, e.g. "xi[D] = c * y3"
    :param h_labels:
    :param matrix: dim(h) x dim(m) coefficients
    :return:
    """
    lines = []
    for label, row in zip(h_labels, matrix):
        names = coordinate_names(len(row))
        terms = []
        for name, coefficient in zip(names, row):
            if coefficient.is_zero:
                continue
            text = _coefficient_text(coefficient)
            if text == "1":
                terms.append(name)
            elif text == "-1":
                terms.append(f"-{name}")
            else:
                terms.append(f"{text} * {name}")
        if not terms:
            lines.append(f"xi[{label}] = 0")
            continue
        body = terms[0]
        for term in terms[1:]:
            body += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        lines.append(f"xi[{label}] = {body}")
    return lines


@dataclass(frozen=True)
class InconsistentGraph:
    """
    No linear graph for generic parameters; equations are labelled (u, y-monomial)
    """
    equations: Tuple[Tuple[str, str], ...]

    consistent = False

    def to_dict(self) -> Dict:
        return {"consistent": False, "equations": [list(equation) for equation in self.equations]}


@dataclass(frozen=True)
class LinearGraphSym:
    """
    xi^j = sum_r k^j_r(c) y_r with k rational in the family symbols.
    nullspace holds directions of the affine solution space when it is not a point.
    """
    context: VariableContext
    coefficients: Tuple[Tuple[RatFunc, ...], ...]
    nullspace: Tuple[Tuple[Tuple[RatFunc, ...], ...], ...] = ()
    space: Optional[HomogeneousSpace] = field(default=None, compare=False, repr=False)
    family: Optional[MetricFamily] = field(default=None, compare=False, repr=False)

    consistent = True

    @property
    def kind(self) -> SolutionKind:
        return SolutionKind.PARAMETRIZED if self.nullspace else SolutionKind.UNIQUE

    def at(self, values: Mapping[str, Union[Fraction, float]]) -> List[List[Union[Fraction, float]]]:
        """
        Coefficient matrix at given symbol values, exact for rational values
        :param values:
        :return:
        """
        return [[coefficient.substitute(values) for coefficient in row] for row in self.coefficients]

    def render(self, h_labels: Sequence[str]) -> List[str]:
        return render_linear(h_labels, self.coefficients)

    def to_dict(self, h_labels: Sequence[str]) -> Dict:
        return {"consistent": True, "kind": self.kind.value, "graph": self.render(h_labels),
                "coefficients": [[str(entry) for entry in row] for row in self.coefficients],
                "nullspace": [[[str(entry) for entry in row] for row in direction] for direction in self.nullspace]}


GraphSolution = Union[LinearGraphSym, InconsistentGraph]


def solve_linear_graph_symbolic(space: HomogeneousSpace, family: MetricFamily) -> GraphSolution:
    """
    Linear graph of the family g = sum c^i alpha_i: expand sum_i c^i alpha_i(y, [y + xi(y), u]_m) = 0 with
    xi^j = sum_r k^j_r y_r, collect the coefficient of every quadratic y-monomial for every basis vector u
    and solve for k over the field of rational functions of the family symbols
    :param space:
    :param family:
    :return:
    """
    n, nh = space.dim_m, space.dim_h
    context = VariableContext(coordinate_names(n), family.symbols)
    ys = [context.variable(name) for name in context.y_names]
    frame = space.frame
    m_labels = space.m_labels

    # g(y, .) as a covector of polynomials in y and c
    pairing = [context.zero() for _ in range(n)]
    for block, (positions, form) in enumerate(zip(family.block_positions, family.block_forms)):
        literal = family.literal(block)
        coefficient = context.constant(literal) if literal is not None else \
            context.variable(family.coefficients[block])
        for a, row in enumerate(positions):
            for b, column in enumerate(positions):
                if form.matrix[a][b] != 0:
                    pairing[column] = pairing[column] + coefficient * ys[row] * form.matrix[a][b]

    monomials = coordinate_monomials(n, 2)
    rows, rhs, labels = [], [], []
    for q in range(n):
        # g(y, [y, e_q]_m)
        free_term = context.zero()
        for p in range(n):
            for k in range(n):
                if frame.mm_m[p][q][k] != 0:
                    free_term = free_term + pairing[k] * ys[p] * frame.mm_m[p][q][k]
        # y_r * g(y, [h_j, e_q]) is the coefficient of k^j_r
        unknown_terms = []
        for j in range(nh):
            action = context.zero()
            for k in range(n):
                if frame.hm_m[j][q][k] != 0:
                    action = action + pairing[k] * frame.hm_m[j][q][k]
            unknown_terms.extend(action * ys[r] for r in range(n))

        for monomial in monomials:
            row = [term.coeff_extract(monomial) for term in unknown_terms]
            constant = free_term.coeff_extract(monomial)
            if constant.is_zero and all(entry.is_zero for entry in row):
                continue
            rows.append(row)
            rhs.append(-constant)
            labels.append((m_labels[q], _monomial_text(context.y_names, monomial)))

    logger.debug(f"Linear graph system: {len(rows)} equations in {nh * n} unknowns")
    solution = linear_solve_ratfunc(rows, rhs, context=context.parameter_context(), ncols=nh * n)

    if solution.kind is SolutionKind.INCONSISTENT:
        equations = tuple(labels[index] for index in solution.inconsistent_rows)
        logger.info(f"No linear geodesic graph for generic parameters, e.g. equation {equations[0]}")
        return InconsistentGraph(equations)

    def as_matrix(vector):
        return tuple(tuple(vector[j * n + r] for r in range(n)) for j in range(nh))

    graph = LinearGraphSym(context=context.parameter_context(),
                           coefficients=as_matrix(solution.particular),
                           nullspace=tuple(as_matrix(direction) for direction in solution.nullspace),
                           space=space, family=family)
    for line in graph.render(space.h_labels):
        logger.info(f"Linear geodesic graph: {line}")
    return graph


def linear_graph_for_params(linsym: LinearGraphSym, family: MetricFamily,
                            params: MetricParams) -> List[List[Fraction]]:
    """
    Exact coefficient matrix of the linear graph for one metric of the family
    :param linsym:
    :param family:
    :param params:
    :return:
    """
    values = family.symbol_values(params.c)
    if values is None:
        logger.error(f"Metric {[format_rational(c) for c in params.c]} is not a scaled member of the family "
                     f"{list(family.coefficients)}")
        raise InvalidMetricError(f"Metric {[format_rational(c) for c in params.c]} is not a member of the family")
    return [[Fraction(entry) for entry in row] for row in linsym.at(values)]


class GeodesicGraph:
    """
    Callable xi: m -> h over a space, numpy in and out
    """

    provenance: Provenance = None

    def __init__(self, space: HomogeneousSpace):
        self.space = space

    def __call__(self, y) -> np.ndarray:
        raise NotImplementedError

    def describe(self) -> List[str]:
        return [f"{self.provenance.value} graph"]


class LinearFixedGraph(GeodesicGraph):
    """
    xi(y) = K y for an exact matrix K
    """

    provenance = Provenance.LINEAR_FIXED

    def __init__(self, space: HomogeneousSpace, matrix: Sequence[Sequence[Fraction]]):
        super().__init__(space)
        self.matrix = [[Fraction(entry) for entry in row] for row in matrix]
        self._matrix = np.array(self.matrix, dtype=float).reshape(space.dim_h, space.dim_m)

    def __call__(self, y) -> np.ndarray:
        return self._matrix @ np.asarray(y, dtype=float)

    def describe(self) -> List[str]:
        context = VariableContext()
        return render_linear(self.space.h_labels, [[RatFunc(MPoly.constant(context, entry)) for entry in row]
                                                   for row in self.matrix])


class Theorem1Graph(GeodesicGraph):
    """
    xi(y) = K(C(y)) y: the linear family graph with c^i replaced by C_i(y)
    """

    provenance = Provenance.THEOREM1

    def __init__(self, linsym: LinearGraphSym, spec: NormSpec):
        super().__init__(linsym.space)
        self.linsym = linsym
        self.spec = spec

    def matrix_at(self, y) -> np.ndarray:
        _, c = BC_functions(self.spec, y)
        values = self.spec.family.symbol_values(tuple(float(entry) for entry in c))
        if values is None:
            logger.error(f"C(y) = {c} is not a scaled member of the family at y = {y}")
            raise Theorem1HypothesisError(f"C(y) is not a scaled member of the family at y = {y}")
        return np.array(self.linsym.at(values), dtype=float).reshape(self.space.dim_h, self.space.dim_m)

    def __call__(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        return self.matrix_at(y) @ y

    def describe(self) -> List[str]:
        return render_linear(self.space.h_labels, theorem1_symbolic(self.linsym, self.spec))


class Prop13Graph(GeodesicGraph):
    """
    xi(y) = F_1(y) / L,_1(y) * sum_m L,_m(y) w_m with v_m - w_m central, g(v_m, .) = beta_m
    """

    provenance = Provenance.PROP13

    def __init__(self, space: HomogeneousSpace, spec: NormSpec, shifts: Sequence[Tuple[int, Tuple[Fraction, ...]]]):
        super().__init__(space)
        self.spec = spec
        self.shifts = tuple(shifts)
        self._shifts = [(index, np.array(w, dtype=float)) for index, w in self.shifts]

    def __call__(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        xi = np.zeros(self.space.dim_h)
        if not self._shifts:
            return xi
        norms = self.spec.component_norms(y)
        _, partials = L_value_and_partials(self.spec, y)
        for index, w in self._shifts:
            xi = xi + norms[0] * partials[self.spec.k + index] / partials[0] * w
        return xi

    def describe(self) -> List[str]:
        lines = []
        for index, w in self.shifts:
            w_text = " + ".join(f"{format_rational(entry)}*{label}"
                                for label, entry in zip(self.space.h_labels, w) if entry != 0) or "0"
            lines.append(f"xi += F1(y) * L,beta{index + 1}(y) / L,1(y) * ({w_text})")
        return lines or ["xi = 0"]


@dataclass(frozen=True)
class PointwiseSolution:
    xi: np.ndarray = field(compare=False)
    residual: float
    rank: int
    solved: bool


class PointwiseGraph(GeodesicGraph):
    """
    Minimum-norm least squares solution of the Finsler geodesic lemma at each point
    """

    provenance = Provenance.POINTWISE

    def __init__(self, space: HomogeneousSpace, spec: NormSpec):
        super().__init__(space)
        self.spec = spec

    def __call__(self, y) -> np.ndarray:
        return pointwise_graph(self.space, self.spec, y).xi

    def describe(self) -> List[str]:
        return ["xi(y) = minimum-norm solution of g_y(y, [y + xi, u]_m) = 0 for every u"]


class ZeroGraph(GeodesicGraph):
    provenance = Provenance.CUSTOM

    def __call__(self, y) -> np.ndarray:
        return np.zeros(self.space.dim_h)


class PerturbedGraph(GeodesicGraph):
    """
    base(y) + P y, for checking that the battery rejects wrong graphs
    """

    provenance = Provenance.CUSTOM

    def __init__(self, base: GeodesicGraph, perturbation: Sequence[Sequence[float]]):
        super().__init__(base.space)
        self.base = base
        self.perturbation = np.array(perturbation, dtype=float).reshape(base.space.dim_h, base.space.dim_m)

    def __call__(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        return self.base(y) + self.perturbation @ y


@dataclass(frozen=True)
class ExactCheck:
    """
    Outcome of an exact identity check over basis vectors; witness names the first failing basis tuple
    """
    check: str
    passed: bool
    count: int
    witness: Tuple[str, ...] = ()
    value: Fraction = Fraction(0)

    def as_report(self, seed: int = DEFAULT_SEED) -> ResidualReport:
        return ResidualReport(check=self.check, samples=self.count, seed=seed, max_residual=abs(float(self.value)),
                              witness=(), threshold=0.0,
                              detail=f"witness ({', '.join(self.witness)}) value {format_rational(self.value)}"
                              if self.witness else "exact")

    def to_dict(self) -> Dict:
        return {"check": self.check, "passed": self.passed, "witness": list(self.witness),
                "value": format_rational(self.value)}


def natred_f1(space: HomogeneousSpace, family: MetricFamily, params: MetricParams) -> ExactCheck:
    """
    <[z, x]_m, y> + <x, [z, y]_m> = 0 on all basis triples of m, exact
    :param space:
    :param family:
    :param params:
    :return:
    """
    gram = family.gram(params)
    n = space.dim_m
    mm_m = space.frame.mm_m
    labels = space.m_labels
    count = 0
    for z in range(n):
        for x in range(n):
            for y in range(n):
                count += 1
                value = sum((mm_m[z][x][k] * gram[k][y] + gram[x][k] * mm_m[z][y][k] for k in range(n)), Fraction(0))
                if value != 0:
                    logger.debug(f"f1 fails on ({labels[z]}, {labels[x]}, {labels[y]}) with value "
                                 f"{format_rational(value)}")
                    return ExactCheck("natred_f1", False, count, (labels[z], labels[x], labels[y]), value)
    return ExactCheck("natred_f1", True, count)


def beta_vanishing_check(space: HomogeneousSpace, form: OneFormSpec) -> ExactCheck:
    """
    beta([z, u]_m) = 0 for every basis z of g and u of m, exact
    :param space:
    :param form:
    :return:
    """
    tensor = space.frame.tensor
    split = space.split
    labels = [space._label(index) for index in range(space.algebra.dim)]
    count = 0
    for z in range(space.algebra.dim):
        for u in split.m_indices:
            count += 1
            value = sum((entry * tensor[z][u][index] for entry, index in zip(form.covector, split.m_indices)),
                        Fraction(0))
            if value != 0:
                return ExactCheck("beta_vanishing", False, count, (labels[z], labels[u]), value)
    return ExactCheck("beta_vanishing", True, count)


def _denominator_margin(den: MPoly, values: Mapping[str, float]) -> Tuple[float, float]:
    """
    |den(values)| against the same sum with every term taken in absolute value
    """
    value = abs(float(den.substitute(values)))
    absolute = MPoly(den.context, {exps: abs(coeff) for exps, coeff in den.terms.items()})
    scale = float(absolute.substitute({name: abs(entry) for name, entry in values.items()}))
    return value, scale


def finsler_graph_thm1(linsym: LinearGraphSym, spec: NormSpec, seed: int = DEFAULT_SEED) -> Theorem1Graph:
    """
    Finsler graph from the family graph by c^i -> C_i(y)
    :param linsym:
    :param spec:
    :param seed: sampling of the denominator check
    :return:
    """
    if not linsym.consistent:
        logger.error("Composed Finsler graph needs a linear family graph")
        raise Theorem1HypothesisError("Composed Finsler graph needs a linear family graph")

    space = linsym.space
    for index, form in enumerate(spec.forms):
        check = beta_vanishing_check(space, form)
        if not check.passed:
            logger.error(f"One-form {index + 1} does not vanish on [g, m]_m, witness {check.witness}")
            raise Theorem1HypothesisError(f"One-form {index + 1} does not vanish on [g, m]_m, "
                                          f"witness {check.witness}")

    for params in spec.metrics:
        if spec.family.symbol_values(params.c) is None:
            logger.error(f"Metric {[format_rational(c) for c in params.c]} is not a member of the family")
            raise Theorem1HypothesisError("Component metric is not a member of the family")

    denominators = [entry.den for row in linsym.coefficients for entry in row if not entry.den.is_constant]
    if denominators:
        points = sample_directions(space.dim_m, SampleConfig(DENOMINATOR_SAMPLES, seed, include_axes=True))
        for y in points:
            _, c = BC_functions(spec, y)
            values = spec.family.symbol_values(tuple(float(entry) for entry in c))
            if values is None:
                logger.error(f"C(y) leaves the family at y = {y.tolist()}")
                raise Theorem1HypothesisError(f"C(y) leaves the family at y = {y.tolist()}")
            for den in denominators:
                value, scale = _denominator_margin(den, values)
                if value <= DENOMINATOR_FLOOR * max(scale, 1.0):
                    logger.error(f"Denominator {den} vanishes at C(y) for y = {y.tolist()}")
                    raise Theorem1HypothesisError(f"Denominator {den} vanishes at C(y) for y = {y.tolist()}")

    return Theorem1Graph(linsym, spec)


def theorem1_symbolic(linsym: LinearGraphSym, spec: NormSpec) -> List[List[RatFunc]]:
    """
    Composed graph coefficients as rational functions of formal B_1 ... B_k, where C_i = sum_j B_j c_j^i
    :param linsym:
    :param spec:
    :return:
    """
    family = spec.family
    target = VariableContext((), tuple(f"B{index + 1}" for index in range(spec.k)))
    bs = [RatFunc(target.variable(name)) for name in target.c_names]
    c_exprs = []
    for block in range(family.count):
        expr = RatFunc(target.zero())
        for b, params in zip(bs, spec.metrics):
            expr = expr + b * params.c[block]
        c_exprs.append(expr)

    literal_blocks = [block for block in range(family.count) if family.literal(block) is not None]
    scale = RatFunc(target.one())
    if literal_blocks:
        scale = RatFunc(target.constant(family.literal(literal_blocks[0]))) / c_exprs[literal_blocks[0]]
    for block in literal_blocks[1:]:
        if scale * c_exprs[block] != RatFunc(target.constant(family.literal(block))):
            logger.error(f"Literal block {block} of the family is not matched by C(y)")
            raise Theorem1HypothesisError(f"Literal block {block} of the family is not matched by C(y)")

    mapping = {family.coefficients[block]: scale * c_exprs[block]
               for block in range(family.count) if family.literal(block) is None}
    return [[coefficient.compose(mapping, target) for coefficient in row] for row in linsym.coefficients]


def pointwise_graph(space: HomogeneousSpace, spec: NormSpec, y,
                    threshold: Optional[float] = None) -> PointwiseSolution:
    """
    Solve g_y(y, [y + xi, u]_m) = 0 for all basis u, linear in xi, by minimum-norm least squares
    :param space:
    :param spec:
    :param y:
    :param threshold: relative to (1 + |y|^2)
    :return:
    """
    y = np.asarray(y, dtype=float)
    frame = space.frame
    covector = gy_covector(spec, y)
    rhs = -(np.einsum("p,pqk->qk", y, frame.mm_m_float) @ covector)
    if space.dim_h == 0:
        xi = np.zeros(0)
        rank = 0
        residual = float(np.max(np.abs(rhs))) if len(rhs) else 0.0
    else:
        matrix = np.einsum("jqk,k->qj", frame.hm_m_float, covector)
        xi, _, rank, _ = lstsq(matrix, rhs, cond=LSTSQ_RCOND)
        residual = float(np.max(np.abs(matrix @ xi - rhs)))
    limit = (POINTWISE_RESIDUAL_TOL if threshold is None else threshold) * (1.0 + y @ y)
    return PointwiseSolution(xi=xi, residual=residual, rank=int(rank), solved=residual <= limit)


def prop13_graph(space: HomogeneousSpace, spec: NormSpec) -> Prop13Graph:
    """
    Closed-form graph of a single-metric norm with one-forms, in a split where the metric is naturally reductive
    :param space:
    :param spec:
    :return:
    """
    if spec.k != 1:
        logger.error(f"One-form graph needs a single component metric, got {spec.k}")
        raise Prop13HypothesisError(f"One-form graph needs a single component metric, got {spec.k}")

    if not space.maximal_isometry_group:
        logger.warning("Maximality of the isometry group is not asserted for this space, "
                       "the one-form graph is taken at face value")

    f1 = natred_f1(space, spec.family, spec.metrics[0])
    if not f1.passed:
        logger.error(f"Metric is not naturally reductive in this split, witness {f1.witness}")
        raise Prop13HypothesisError(f"Metric is not naturally reductive in this split, witness {f1.witness}")

    shifts = []
    for index, form in enumerate(spec.forms):
        if beta_vanishing_check(space, form).passed:
            continue
        v = oneform_vector_bridge(spec.family, spec.metrics[0], form)
        w = central_shift(space, v)
        if w is None:
            logger.error(f"No central shift for the dual vector of one-form {index + 1}")
            raise Prop13HypothesisError(f"No central shift for the dual vector of one-form {index + 1}")
        logger.info(f"One-form {index + 1}: central shift w = "
                    f"{[format_rational(entry) for entry in w]} in {space.h_labels}")
        shifts.append((index, w))

    hh_h = space.frame.hh_h
    for (first, w_a), (second, w_b) in combinations(shifts, 2):
        commutator = [sum((w_a[i] * w_b[j] * hh_h[i][j][l] for i in range(space.dim_h) for j in range(space.dim_h)),
                          Fraction(0)) for l in range(space.dim_h)]
        if any(entry != 0 for entry in commutator):
            logger.error(f"Central shifts of one-forms {first + 1} and {second + 1} do not commute")
            raise Prop13HypothesisError(f"Central shifts of one-forms {first + 1} and {second + 1} do not commute")

    return Prop13Graph(space, spec, shifts)


def latifi_residual(space: HomogeneousSpace, spec: NormSpec, samples: int = LATIFI_SAMPLES,
                    seed: int = DEFAULT_SEED) -> ResidualReport:
    """
    max |g_y([x, u]_m, v) + g_y(u, [x, v]_m) + 2 C_y([x, y]_m, u, v)| / max(1, |g_y|)
    over random unit x, y, u, v of m, with finite-difference tensors
    :param space:
    :param spec:
    :param samples:
    :param seed:
    :return:
    """
    rng = np.random.default_rng(seed)
    n = space.dim_m
    mm_m = space.frame.mm_m_float

    def unit():
        vector = rng.standard_normal(n)
        return vector / np.linalg.norm(vector)

    items = [(unit(), unit(), unit(), unit()) for _ in range(samples)]

    def m_bracket(a, b):
        return np.einsum("p,q,pqk->k", a, b, mm_m)

    def residual(item) -> float:
        x, y, u, v = item
        tensor = fundamental_tensor_fd(spec, y)
        value = m_bracket(x, u) @ tensor @ v + u @ tensor @ m_bracket(x, v) \
            + 2.0 * cartan_tensor_fd(spec, y, u, v, m_bracket(x, y))
        return float(abs(value) / max(1.0, np.linalg.norm(tensor, 2)))

    residuals = fan_out(residual, items)
    worst = int(np.argmax(residuals))
    report = ResidualReport("latifi_residual", samples, seed, float(residuals[worst]), tuple(items[worst][1]),
                            LATIFI_TOL, detail="advisory")
    if not report.passed:
        logger.info(f"Latifi residual {report.max_residual:.3e} above {LATIFI_TOL:.0e}")
    return report


def choose_graph(space: HomogeneousSpace, spec: NormSpec, linsym: GraphSolution,
                 seed: int = DEFAULT_SEED) -> Tuple[GeodesicGraph, List[str]]:
    """
    Composed graph when the family graph exists and every one-form vanishes on [g, m]_m, else the one-form
    closed form in the split shifted by the family graph (single metric), else pointwise
    :param space:
    :param spec:
    :param linsym:
    :param seed:
    :return:
    """
    notes = []
    forms_vanish = all(beta_vanishing_check(space, form).passed for form in spec.forms)

    if linsym.consistent and forms_vanish:
        try:
            return finsler_graph_thm1(linsym, spec, seed), notes
        except Theorem1HypothesisError as error:
            notes.append(f"composed graph unavailable: {error}")

    if linsym.consistent and spec.k == 1 and spec.has_forms:
        try:
            matrix = linear_graph_for_params(linsym, spec.family, spec.metrics[0])
            shifted = space.with_split(shift_split(space, matrix))
            return prop13_graph(shifted, spec), notes
        except (Prop13HypothesisError, NonReductiveSplitError, DegenerateGraphError, InvalidMetricError) as error:
            notes.append(f"one-form graph unavailable: {error}")

    return PointwiseGraph(space, spec), notes


def _rationalise(matrix: np.ndarray) -> List[List[Fraction]]:
    return [[Fraction(float(entry)).limit_denominator(FIT_MAX_DENOMINATOR) for entry in row] for row in matrix]


def _split_to_strings(split: ReductiveSplit) -> Optional[List[List[str]]]:
    if split.basis_change is None:
        return None
    return [[format_rational(entry) for entry in row] for row in split.basis_change]


@dataclass(frozen=True)
class ReductivityVerdict:
    verdict: Verdict
    evidence: Tuple[ResidualReport, ...]
    provenance: Provenance
    split: ReductiveSplit
    split_labels: Tuple[str, ...]
    graph: Tuple[str, ...] = ()
    linear_graph: Tuple[str, ...] = ()
    witness: Tuple[float, ...] = ()
    notes: Tuple[str, ...] = ()

    def to_dict(self) -> Dict:
        return {"verdict": self.verdict.value, "provenance": self.provenance.value,
                "split": {"h": list(self.split.h_indices), "m": list(self.split.m_indices),
                          "basis_change": _split_to_strings(self.split), "m_labels": list(self.split_labels)},
                "graph": list(self.graph), "linear_graph": list(self.linear_graph),
                "witness": list(self.witness), "notes": list(self.notes),
                "evidence": [report.to_dict() for report in self.evidence]}


def reductivity_verdict(space: HomogeneousSpace, spec: NormSpec, config: SampleConfig) -> ReductivityVerdict:
    """
    Decide natural reductivity of a Finsler norm on a space:
    family graph, graph choice, pointwise solvability, linearity probe, exact f1 in the shifted split,
    advisory Latifi residual and the zeroed-form comparison
    :param space:
    :param spec:
    :param config:
    :return:
    """
    logger.info(f"Deciding natural reductivity of {space.name or 'space'}")
    evidence: List[ResidualReport] = []
    notes: List[str] = []

    linsym = solve_linear_graph_symbolic(space, spec.family)
    metric_graphs = []
    if linsym.consistent:
        metric_graphs = [linear_graph_for_params(linsym, spec.family, params) for params in spec.metrics]
    else:
        notes.append(f"no linear graph for the family: inconsistent equations {list(linsym.equations)}")

    graph, choice_notes = choose_graph(space, spec, linsym, config.seed)
    notes.extend(choice_notes)
    logger.info(f"Using the {graph.provenance.value} graph")
    evidence.append(geodesic_residual(spec, graph, config))

    def verdict_of(verdict: Verdict, split_space: HomogeneousSpace, linear_lines: Sequence[str] = (),
                   witness: Sequence[float] = ()) -> ReductivityVerdict:
        logger.info(f"Verdict: {verdict.value}")
        return ReductivityVerdict(verdict=verdict, evidence=tuple(evidence), provenance=graph.provenance,
                                  split=split_space.split, split_labels=tuple(split_space.m_labels),
                                  graph=tuple(graph.describe()), linear_graph=tuple(linear_lines),
                                  witness=tuple(float(entry) for entry in witness), notes=tuple(notes))

    # Pointwise solvability, g.o. evidence
    points = sample_directions(graph.space.dim_m, config)
    solutions = fan_out(lambda y: pointwise_graph(graph.space, spec, y), points)
    normalised = [solution.residual / (1.0 + y @ y) for y, solution in zip(points, solutions)]
    worst = int(np.argmax(normalised))
    evidence.append(ResidualReport("pointwise_solvability", len(points), config.seed, float(normalised[worst]),
                                   tuple(points[worst]), POINTWISE_RESIDUAL_TOL))
    if not all(solution.solved for solution in solutions):
        failing = next(y for y, solution in zip(points, solutions) if not solution.solved)
        notes.append(f"no geodesic vector over y = {failing.tolist()}")
        return verdict_of(Verdict.NOT_GO_DETECTED, graph.space, witness=failing)
    generic_rank = max(solution.rank for solution in solutions)

    probe = linearity_probe(graph, config)
    evidence.append(probe.as_report())

    if probe.linear:
        if graph.provenance is Provenance.THEOREM1 and metric_graphs and \
                all(matrix == metric_graphs[0] for matrix in metric_graphs):
            matrix = metric_graphs[0]
        else:
            matrix = _rationalise(probe.matrix)
            notes.append("linear graph rationalised from the least squares fit")
        linear_lines = render_linear(graph.space.h_labels,
                                     [[RatFunc(MPoly.constant(VariableContext(), entry)) for entry in row]
                                      for row in matrix])
        try:
            reductive = graph.space.with_split(shift_split(graph.space, matrix))
        except (DegenerateGraphError, NonReductiveSplitError) as error:
            notes.append(f"shifting along the linear graph failed: {error}")
            return verdict_of(Verdict.INCONCLUSIVE, graph.space, linear_lines)

        checks = [natred_f1(reductive, spec.family, params) for params in spec.metrics]
        checks.extend(beta_vanishing_check(reductive, form) for form in spec.forms)
        evidence.extend(check.as_report(config.seed) for check in checks)
        evidence.append(latifi_residual(reductive, spec, seed=config.seed))
        _attach_companion(space, spec, linsym, graph, config, evidence, notes)
        if all(check.passed for check in checks):
            return verdict_of(Verdict.NATURALLY_REDUCTIVE, reductive, linear_lines)
        notes.append("linear graph found but an exact check fails in the shifted split")
        return verdict_of(Verdict.INCONCLUSIVE, reductive, linear_lines)

    evidence.append(latifi_residual(graph.space, spec, seed=config.seed))
    _attach_companion(space, spec, linsym, graph, config, evidence, notes)
    if generic_rank < graph.space.dim_h:
        notes.append(f"pointwise system has rank {generic_rank} < dim h = {graph.space.dim_h}, "
                     f"other geodesic graphs may be linear")
        return verdict_of(Verdict.INCONCLUSIVE, graph.space, witness=probe.witness)
    return verdict_of(Verdict.GO_NOT_NATURALLY_REDUCTIVE, graph.space, witness=probe.witness)


def _attach_companion(space: HomogeneousSpace, spec: NormSpec, linsym: GraphSolution, graph: GeodesicGraph,
                      config: SampleConfig, evidence: List[ResidualReport], notes: List[str]) -> None:
    """
    Compare with the norm whose vanishing one-forms are set to zero
    """
    vanishing = [index for index, form in enumerate(spec.forms)
                 if not form.is_zero and beta_vanishing_check(space, form).passed]
    if not vanishing:
        return
    companion_graph, _ = choose_graph(space, spec.with_zeroed_forms(vanishing), linsym, config.seed)
    if companion_graph.space.split != graph.space.split:
        notes.append("zeroed-form companion graph lives in another split, not compared")
        return
    pointwise = Provenance.POINTWISE in (graph.provenance, companion_graph.provenance)
    evidence.append(compare_graphs(graph, companion_graph, config,
                                   POINTWISE_COMPARE_TOL if pointwise else COMPARE_GRAPHS_TOL))
