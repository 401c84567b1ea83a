#!/usr/bin/env python3

"""
Invariant scalar products and Finsler norms on m.

A MetricFamily fixes the block forms alpha_i on the module blocks; a metric of the family is
g = sum_i c^i alpha_i for positive c. A NormSpec combines k such metrics and l invariant one-forms
into F^2 = L(F_1, ..., F_k, beta_1, ..., beta_l) with F_j = sqrt(g_j(y, y)).

Everything exact stays in fractions; norm values, partials and tensors are numpy floats.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from geograph.algebra import HomogeneousSpace
from geograph.enums import NormFamily
from geograph.errors import BlockIndexError, DimensionMismatchError, InvalidMetricError, ZeroVectorError
from geograph.exactnum import exact_inverse, exact_matvec, format_rational, leading_minors_positive, parse_rational
from geograph.globals import COMPLEX_STEP, FD_CARTAN_STEP, FD_HESSIAN_STEP, PSD_EIGENVALUE_FLOOR
from geograph.logging import get_logger

logger = get_logger()


@dataclass(frozen=True)
class BlockForm:
    """
    Symmetric positive definite scalar product alpha_i on one module block
    """
    block: int
    matrix: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        matrix = tuple(tuple(parse_rational(entry) for entry in row) for row in self.matrix)
        object.__setattr__(self, "matrix", matrix)
        size = len(matrix)
        if any(len(row) != size for row in matrix):
            logger.error(f"Block form {self.block} is not square")
            raise InvalidMetricError(f"Block form {self.block} is not square")
        for i in range(size):
            for j in range(i + 1, size):
                if matrix[i][j] != matrix[j][i]:
                    logger.error(f"Block form {self.block} is not symmetric at ({i}, {j})")
                    raise InvalidMetricError(f"Block form {self.block} is not symmetric at ({i}, {j})")
        if not leading_minors_positive(matrix):
            logger.error(f"Block form {self.block} is not positive definite")
            raise InvalidMetricError(f"Block form {self.block} is not positive definite")

    @classmethod
    def identity(cls, block: int, size: int) -> "BlockForm":
        return cls(block, tuple(tuple(Fraction(int(i == j)) for j in range(size)) for i in range(size)))


@dataclass(frozen=True)
class MetricParams:
    """
    Per-block coefficients c^1 ... c^s of g = sum c^i alpha_i
    """
    c: Tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(parse_rational(entry) for entry in self.c)
        object.__setattr__(self, "c", values)
        if any(value <= 0 for value in values):
            logger.error(f"Metric coefficients must be positive, got {[format_rational(v) for v in values]}")
            raise InvalidMetricError(f"Metric coefficients must be positive, "
                                     f"got {[format_rational(v) for v in values]}")


@dataclass(frozen=True)
class OneFormSpec:
    """
    Covector on m in m-coordinates
    """
    covector: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "covector", tuple(parse_rational(entry) for entry in self.covector))

    @property
    def is_zero(self) -> bool:
        return all(entry == 0 for entry in self.covector)

    def __call__(self, y):
        if isinstance(y, np.ndarray):
            return np.asarray(self.covector, dtype=float) @ y
        return sum((entry * component for entry, component in zip(self.covector, y)), Fraction(0))


def _is_symbol(coefficient: str) -> bool:
    try:
        parse_rational(coefficient)
    except (ValueError, ArithmeticError):
        return True
    return False


@dataclass(frozen=True)
class MetricFamily:
    """
    Shared block context of positively related metrics.
    coefficients hold, per block, a rational literal or a parameter symbol; each symbol appears once.
    """
    block_positions: Tuple[Tuple[int, ...], ...]
    block_forms: Tuple[BlockForm, ...]
    coefficients: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "block_positions", tuple(tuple(block) for block in self.block_positions))
        object.__setattr__(self, "block_forms", tuple(self.block_forms))
        object.__setattr__(self, "coefficients", tuple(str(coefficient) for coefficient in self.coefficients))

        if not (len(self.block_positions) == len(self.block_forms) == len(self.coefficients)):
            logger.error(f"Family has {len(self.block_positions)} blocks, {len(self.block_forms)} forms and "
                         f"{len(self.coefficients)} coefficients")
            raise DimensionMismatchError("Family needs one form and one coefficient per block")
        for positions, form in zip(self.block_positions, self.block_forms):
            if len(positions) != len(form.matrix):
                logger.error(f"Block {form.block} has {len(positions)} vectors but a "
                             f"{len(form.matrix)}x{len(form.matrix)} form")
                raise DimensionMismatchError(f"Block {form.block} size does not match its form")
        symbols = self.symbols
        if len(set(symbols)) != len(symbols):
            logger.error(f"Family symbols must be distinct, got {symbols}")
            raise InvalidMetricError(f"Family symbols must be distinct, got {symbols}")
        for coefficient in self.coefficients:
            if not _is_symbol(coefficient) and parse_rational(coefficient) <= 0:
                logger.error(f"Family literal coefficient {coefficient} must be positive")
                raise InvalidMetricError(f"Family literal coefficient {coefficient} must be positive")

    @classmethod
    def standard(cls, block_positions: Sequence[Sequence[int]], coefficients: Sequence[str]) -> "MetricFamily":
        """
        Family with identity block forms
        :param block_positions:
        :param coefficients:
        :return:
        """
        forms = tuple(BlockForm.identity(index, len(block)) for index, block in enumerate(block_positions))
        return cls(tuple(map(tuple, block_positions)), forms, tuple(coefficients))

    @property
    def count(self) -> int:
        return len(self.block_positions)

    @property
    def dim_m(self) -> int:
        return sum(len(block) for block in self.block_positions)

    @property
    def symbols(self) -> Tuple[str, ...]:
        return tuple(coefficient for coefficient in self.coefficients if _is_symbol(coefficient))

    def literal(self, block: int) -> Optional[Fraction]:
        coefficient = self.coefficients[block]
        return None if _is_symbol(coefficient) else parse_rational(coefficient)

    def params_from_symbols(self, values: Mapping[str, Fraction]) -> MetricParams:
        """
        Metric of the family at given symbol values
        :param values:
        :return:
        """
        c = []
        for block in range(self.count):
            literal = self.literal(block)
            c.append(literal if literal is not None else parse_rational(values[self.coefficients[block]]))
        return MetricParams(tuple(c))

    def symbol_values(self, c: Sequence[Union[Fraction, float]],
                      rel_tol: float = 1e-9) -> Optional[Dict[str, Union[Fraction, float]]]:
        """
        Map a full positive per-block tuple onto the family symbols, up to an overall scale.
        lambda = kappa_r / c_r for the first literal block r (1 without literals); each symbol gets
        lambda * c_i. Returns None when another literal block does not satisfy kappa_i = lambda * c_i.
        :param c:
        :param rel_tol: used when c is float
        :return:
        """
        if len(c) != self.count:
            logger.error(f"Expected {self.count} block coefficients, got {len(c)}")
            raise DimensionMismatchError(f"Expected {self.count} block coefficients, got {len(c)}")

        exact = all(isinstance(value, (int, Fraction)) for value in c)
        scale: Union[Fraction, float] = Fraction(1) if exact else 1.0
        literal_blocks = [block for block in range(self.count) if self.literal(block) is not None]
        if literal_blocks:
            first = literal_blocks[0]
            scale = self.literal(first) / c[first] if exact else float(self.literal(first)) / c[first]

        for block in literal_blocks[1:]:
            expected = self.literal(block)
            got = scale * c[block]
            if exact and got != expected:
                return None
            if not exact and abs(got - float(expected)) > rel_tol * abs(float(expected)):
                return None

        return {self.coefficients[block]: scale * c[block]
                for block in range(self.count) if self.literal(block) is None}

    def check_vector(self, y: Sequence) -> None:
        if len(y) != self.dim_m:
            logger.error(f"m-vector of length {len(y)}, expected {self.dim_m}")
            raise DimensionMismatchError(f"m-vector of length {len(y)}, expected {self.dim_m}")

    def gram(self, params: MetricParams) -> List[List[Fraction]]:
        """
        Exact Gram matrix of sum c^i alpha_i on m
        :param params:
        :return:
        """
        if len(params.c) != self.count:
            logger.error(f"Metric has {len(params.c)} coefficients for {self.count} blocks")
            raise DimensionMismatchError(f"Metric has {len(params.c)} coefficients for {self.count} blocks")
        size = self.dim_m
        gram = [[Fraction(0)] * size for _ in range(size)]
        for positions, form, coefficient in zip(self.block_positions, self.block_forms, params.c):
            for a, row in enumerate(positions):
                for b, column in enumerate(positions):
                    gram[row][column] = coefficient * form.matrix[a][b]
        return gram

    def gram_float(self, params: MetricParams) -> np.ndarray:
        return np.array(self.gram(params), dtype=float).reshape(self.dim_m, self.dim_m)

    def alpha(self, block: int, u: Sequence, v: Sequence):
        """
        alpha_i(u_i, v_i)
        :param block:
        :param u:
        :param v:
        :return:
        """
        if not 0 <= block < self.count:
            logger.error(f"Block index {block} out of range for {self.count} blocks")
            raise BlockIndexError(f"Block index {block} out of range for {self.count} blocks")
        positions = self.block_positions[block]
        matrix = self.block_forms[block].matrix
        exact = not (isinstance(u, np.ndarray) or isinstance(v, np.ndarray))
        total = Fraction(0) if exact else 0.0
        for a, row in enumerate(positions):
            for b, column in enumerate(positions):
                if matrix[a][b] == 0:
                    continue
                entry = matrix[a][b] if exact else float(matrix[a][b])
                total = total + entry * u[row] * v[column]
        return total

    def to_dict(self) -> Dict:
        return {"coefficients": list(self.coefficients),
                "block_forms": [[[format_rational(entry) for entry in row] for row in form.matrix]
                                for form in self.block_forms]}


def eval_metric(family: MetricFamily, params: MetricParams, u: Sequence, v: Sequence):
    """
    sum_i c^i alpha_i(u_i, v_i); exact for rational vectors
    :param family:
    :param params:
    :param u:
    :param v:
    :return:
    """
    family.check_vector(u)
    family.check_vector(v)
    if isinstance(u, np.ndarray) or isinstance(v, np.ndarray):
        return float(np.asarray(u, dtype=float) @ family.gram_float(params) @ np.asarray(v, dtype=float))
    total = Fraction(0)
    for block, coefficient in enumerate(params.c):
        total += coefficient * family.alpha(block, u, v)
    return total


class NormSpec:
    """
    F^2 = L(F_1, ..., F_k, beta_1, ..., beta_l) over a shared metric family.
    Subclasses provide L with its gradient and Hessian in closed form.
    """

    family_tag: NormFamily = None

    def __init__(self, family: MetricFamily, metrics: Sequence[MetricParams], forms: Sequence[OneFormSpec] = ()):
        self.family = family
        self.metrics: Tuple[MetricParams, ...] = tuple(metrics)
        self.forms: Tuple[OneFormSpec, ...] = tuple(forms)

        if not self.metrics:
            logger.error("A norm needs at least one component metric")
            raise InvalidMetricError("A norm needs at least one component metric")
        for form in self.forms:
            if len(form.covector) != family.dim_m:
                logger.error(f"One-form of length {len(form.covector)}, expected {family.dim_m}")
                raise DimensionMismatchError(f"One-form of length {len(form.covector)}, expected {family.dim_m}")

        self._grams = [family.gram_float(params) for params in self.metrics]
        self._covectors = np.array([form.covector for form in self.forms], dtype=float).reshape(len(self.forms),
                                                                                              family.dim_m)
        # coefficient_matrix[j, i] = c_j^i
        self.coefficient_matrix = np.array([params.c for params in self.metrics], dtype=float)

    @property
    def k(self) -> int:
        return len(self.metrics)

    @property
    def l(self) -> int:
        return len(self.forms)

    @property
    def has_forms(self) -> bool:
        return any(not form.is_zero for form in self.forms)

    # Closed forms of L in its arguments, complex safe

    def L(self, args: np.ndarray):
        raise NotImplementedError

    def L_gradient(self, args: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def L_hessian(self, args: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _rebuild(self, forms: Sequence[OneFormSpec]) -> "NormSpec":
        raise NotImplementedError

    def to_dict(self) -> Dict:
        raise NotImplementedError

    def without_forms(self) -> "NormSpec":
        """
        Companion norm with every one-form dropped
        :return:
        """
        return self._rebuild(())

    def with_zeroed_forms(self, indices: Sequence[int]) -> "NormSpec":
        """
        Companion norm with the listed one-forms replaced by zero
        :param indices:
        :return:
        """
        forms = [OneFormSpec((Fraction(0),) * self.family.dim_m) if index in indices else form
                 for index, form in enumerate(self.forms)]
        return self._rebuild(forms)

    # Evaluation at a vector of m

    def _vector(self, y) -> np.ndarray:
        vector = np.asarray(y)
        if vector.dtype == object:
            vector = vector.astype(float)
        if vector.shape != (self.family.dim_m,):
            logger.error(f"m-vector of shape {vector.shape}, expected ({self.family.dim_m},)")
            raise DimensionMismatchError(f"m-vector of shape {vector.shape}, expected ({self.family.dim_m},)")
        if not np.any(vector):
            logger.error("Norm quantities are undefined at the zero vector")
            raise ZeroVectorError("Norm quantities are undefined at the zero vector")
        return vector

    def component_norms(self, y) -> np.ndarray:
        y = self._vector(y)
        return np.array([np.sqrt(y @ gram @ y) for gram in self._grams])

    def form_values(self, y) -> np.ndarray:
        y = self._vector(y)
        return self._covectors @ y

    def arguments(self, y) -> np.ndarray:
        return np.concatenate([self.component_norms(y), self.form_values(y)])

    def squared(self, y) -> float:
        return float(np.real(self.L(self.arguments(y))))

    def value(self, y) -> float:
        return float(np.sqrt(self.squared(y)))

    def squared_complex(self, y: np.ndarray) -> complex:
        """
        F^2 at a complex point without conjugation, for complex-step differentiation
        :param y:
        :return:
        """
        norms = np.array([np.sqrt(y @ gram @ y) for gram in self._grams])
        forms = self._covectors @ y
        return self.L(np.concatenate([norms, forms]))

    def gram_matrices(self) -> List[np.ndarray]:
        return list(self._grams)


class QPowerNorm(NormSpec):
    """
    phi = (sum_j F_j^q)^(1/q), L = (phi + sum_m beta_m)^2
    """

    family_tag = NormFamily.QPOWER

    def __init__(self, q: Union[Fraction, str, int], family: MetricFamily, metrics: Sequence[MetricParams],
                 forms: Sequence[OneFormSpec] = ()):
        self.q = parse_rational(q)
        if self.q <= 0:
            logger.error(f"q-power norms need q > 0, got {format_rational(self.q)}")
            raise InvalidMetricError(f"q-power norms need q > 0, got {format_rational(self.q)}")
        if self.q < 2:
            logger.warning(f"q = {format_rational(self.q)} is below 2, "
                           f"admissibility is left to the sampled check")
        super().__init__(family, metrics, forms)
        self._q = float(self.q)

    def _phi(self, norms):
        return np.sum(norms ** self._q) ** (1.0 / self._q)

    def L(self, args):
        norms, forms = args[:self.k], args[self.k:]
        return (self._phi(norms) + np.sum(forms)) ** 2

    def L_gradient(self, args):
        norms, forms = args[:self.k], args[self.k:]
        phi = self._phi(norms)
        outer = phi + np.sum(forms)
        ratios = norms / phi
        return np.concatenate([2.0 * outer * ratios ** (self._q - 1.0), np.full(self.l, 2.0 * outer)])

    def L_hessian(self, args):
        norms, forms = args[:self.k], args[self.k:]
        phi = self._phi(norms)
        outer = phi + np.sum(forms)
        ratios = norms / phi
        grad_phi = np.concatenate([ratios ** (self._q - 1.0), np.ones(self.l)])
        hess_phi = np.zeros((self.k + self.l, self.k + self.l))
        power = ratios ** (self._q - 1.0)
        hess_phi[:self.k, :self.k] = (self._q - 1.0) / phi * (np.diag(ratios ** (self._q - 2.0))
                                                             - np.outer(power, power))
        return 2.0 * np.outer(grad_phi, grad_phi) + 2.0 * outer * hess_phi

    def _rebuild(self, forms):
        return QPowerNorm(self.q, self.family, self.metrics, forms)

    def to_dict(self) -> Dict:
        return {"family": self.family_tag.value, "exponent": format_rational(self.q)}


class WeightedSquaresNorm(NormSpec):
    """
    L = sum_j a_j F_j^2 + sum_m b_m beta_m^2
    """

    family_tag = NormFamily.WEIGHTED_SQUARES

    def __init__(self, weights: Sequence, family: MetricFamily, metrics: Sequence[MetricParams],
                 forms: Sequence[OneFormSpec] = (), form_weights: Sequence = ()):
        self.weights = tuple(parse_rational(weight) for weight in weights)
        self.form_weights = tuple(parse_rational(weight) for weight in form_weights) or \
            tuple(Fraction(0) for _ in forms)
        if len(self.weights) != len(metrics) or len(self.form_weights) != len(forms):
            logger.error("Weighted squares need one weight per metric and one per one-form")
            raise DimensionMismatchError("Weighted squares need one weight per metric and one per one-form")
        if any(weight <= 0 for weight in self.weights) or any(weight < 0 for weight in self.form_weights):
            logger.error("Metric weights must be positive and one-form weights non-negative")
            raise InvalidMetricError("Metric weights must be positive and one-form weights non-negative")
        super().__init__(family, metrics, forms)
        self._weights = np.array(self.weights + self.form_weights, dtype=float)

    def L(self, args):
        return np.sum(self._weights * args ** 2)

    def L_gradient(self, args):
        return 2.0 * self._weights * args

    def L_hessian(self, args):
        return np.diag(2.0 * self._weights)

    def _rebuild(self, forms):
        form_weights = self.form_weights[:len(forms)] if forms else ()
        return WeightedSquaresNorm(self.weights, self.family, self.metrics, forms, form_weights)

    def to_dict(self) -> Dict:
        return {"family": self.family_tag.value,
                "weights": [format_rational(weight) for weight in self.weights],
                "form_weights": [format_rational(weight) for weight in self.form_weights]}


class RandersNorm(NormSpec):
    """
    L = (F_1 + beta)^2 with |beta|_g < 1
    """

    family_tag = NormFamily.RANDERS_LIKE

    def __init__(self, family: MetricFamily, metric: MetricParams, form: Optional[OneFormSpec] = None):
        forms = (form,) if form is not None else ()
        super().__init__(family, (metric,), forms)
        if form is not None:
            dual = exact_matvec(exact_inverse(family.gram(metric)), form.covector)
            norm_squared = sum((a * b for a, b in zip(form.covector, dual)), Fraction(0))
            if norm_squared >= 1:
                logger.error(f"Randers one-form has squared metric norm {format_rational(norm_squared)} >= 1")
                raise InvalidMetricError(f"Randers one-form has squared metric norm "
                                         f"{format_rational(norm_squared)} >= 1")

    def L(self, args):
        return (args[0] + np.sum(args[1:])) ** 2

    def L_gradient(self, args):
        return np.full(self.k + self.l, 2.0 * (args[0] + np.sum(args[1:])))

    def L_hessian(self, args):
        return np.full((self.k + self.l, self.k + self.l), 2.0)

    def _rebuild(self, forms):
        forms = tuple(forms)
        return RandersNorm(self.family, self.metrics[0], forms[0] if forms else None)

    def to_dict(self) -> Dict:
        return {"family": self.family_tag.value}


def L_value_and_partials(spec: NormSpec, y) -> Tuple[float, np.ndarray]:
    """
    L and its partials L,_1 ... L,_{k+l} at the arguments of y
    :param spec:
    :param y:
    :return:
    """
    args = spec.arguments(y)
    return float(spec.L(args)), spec.L_gradient(args)


def BC_functions(spec: NormSpec, y) -> Tuple[np.ndarray, np.ndarray]:
    """
    B_j = L,_j / (2 F_j) and C_i = sum_j B_j c_j^i
    :param spec:
    :param y:
    :return:
    """
    norms = spec.component_norms(y)
    if np.any(norms <= 0):
        logger.error(f"Component norm vanishes at y = {y}")
        raise ZeroVectorError(f"Component norm vanishes at y = {y}")
    _, partials = L_value_and_partials(spec, y)
    b = partials[:spec.k] / (2.0 * norms)
    return b, b @ spec.coefficient_matrix


def gy_covector(spec: NormSpec, y) -> np.ndarray:
    """
    The covector g_y(y, .) = sum_j B_j g_j(y, .) + 1/2 sum_m L,_m beta_m
    :param spec:
    :param y:
    :return:
    """
    y = spec._vector(y).astype(float)
    b, _ = BC_functions(spec, y)
    _, partials = L_value_and_partials(spec, y)
    covector = np.zeros(spec.family.dim_m)
    for b_j, gram in zip(b, spec.gram_matrices()):
        covector += b_j * (gram @ y)
    if spec.l:
        covector += 0.5 * partials[spec.k:] @ spec._covectors
    return covector


def gy_pair(spec: NormSpec, y, v) -> float:
    """
    g_y(y, v) = sum_j B_j g_j(y, v) + 1/2 sum_m L,_m beta_m(v)
    :param spec:
    :param y:
    :param v:
    :return:
    """
    return float(gy_covector(spec, y) @ np.asarray(v, dtype=float))


def _squared_gradient(spec: NormSpec, y: np.ndarray) -> np.ndarray:
    # Complex step: no subtractive cancellation
    size = len(y)
    gradient = np.empty(size)
    for index in range(size):
        shifted = y.astype(complex)
        shifted[index] += 1j * COMPLEX_STEP
        gradient[index] = np.imag(spec.squared_complex(shifted)) / COMPLEX_STEP
    return gradient


def fundamental_tensor_fd(spec: NormSpec, y) -> np.ndarray:
    """
    One half of the Hessian of F^2 at y, central differences of the complex-step gradient
    :param spec:
    :param y:
    :return:
    """
    y = spec._vector(y).astype(float)
    step = FD_HESSIAN_STEP * np.linalg.norm(y)
    size = len(y)
    hessian = np.empty((size, size))
    for index in range(size):
        offset = np.zeros(size)
        offset[index] = step
        hessian[:, index] = (_squared_gradient(spec, y + offset) - _squared_gradient(spec, y - offset)) / (2 * step)
    return 0.25 * (hessian + hessian.T)


def cartan_tensor_fd(spec: NormSpec, y, u, v, w) -> float:
    """
    C_y(u, v, w) = 1/2 d/dt g_{y + t w}(u, v) at t = 0, by central differences
    :param spec:
    :param y:
    :param u:
    :param v:
    :param w:
    :return:
    """
    y = spec._vector(y).astype(float)
    u, v, w = (np.asarray(vector, dtype=float) for vector in (u, v, w))
    w_norm = np.linalg.norm(w)
    if w_norm == 0:
        return 0.0
    step = FD_CARTAN_STEP * np.linalg.norm(y) / w_norm
    forward = fundamental_tensor_fd(spec, y + step * w)
    backward = fundamental_tensor_fd(spec, y - step * w)
    return float(0.5 * u @ (forward - backward) @ v / (2 * step))


@dataclass(frozen=True)
class AdmissibilityViolation:
    condition: str
    y: Tuple[float, ...]
    value: float

    def to_dict(self) -> Dict:
        return {"condition": self.condition, "y": list(self.y), "value": self.value}


@dataclass(frozen=True)
class AdmissibilityReport:
    samples: int
    seed: int
    violations: Tuple[AdmissibilityViolation, ...] = ()
    min_partial_sum_margin: float = float("inf")
    min_value_margin: float = float("inf")

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict:
        return {"samples": self.samples, "seed": self.seed, "ok": self.ok,
                "min_partial_sum_margin": self.min_partial_sum_margin,
                "min_value_margin": self.min_value_margin,
                "violations": [violation.to_dict() for violation in self.violations]}


def admissibility_sample(spec: NormSpec, samples: int, seed: int) -> AdmissibilityReport:
    """
    Sampled check of L,_j >= 0, positive semidefinite Hess(L), sum_j L,_j > 0 and F > 0
    on random unit directions
    :param spec:
    :param samples:
    :param seed:
    :return:
    """
    rng = np.random.default_rng(seed)
    violations: List[AdmissibilityViolation] = []
    partial_margin = float("inf")
    value_margin = float("inf")

    for _ in range(samples):
        y = rng.standard_normal(spec.family.dim_m)
        y /= np.linalg.norm(y)
        args = spec.arguments(y)
        gradient = spec.L_gradient(args)
        hessian = spec.L_hessian(args)
        witness = tuple(float(component) for component in y)

        smallest_partial = float(np.min(gradient[:spec.k]))
        if smallest_partial < 0:
            violations.append(AdmissibilityViolation("partials_nonnegative", witness, smallest_partial))

        eigenvalues = np.linalg.eigvalsh(0.5 * (hessian + hessian.T))
        floor = PSD_EIGENVALUE_FLOOR * max(1.0, float(np.max(np.abs(eigenvalues))))
        if eigenvalues[0] < floor:
            violations.append(AdmissibilityViolation("hessian_psd", witness, float(eigenvalues[0])))

        partial_sum = float(np.sum(gradient[:spec.k]))
        partial_margin = min(partial_margin, partial_sum)
        if partial_sum <= 0:
            violations.append(AdmissibilityViolation("partials_sum_positive", witness, partial_sum))

        value = float(np.real(spec.L(args)))
        value_margin = min(value_margin, value)
        if value <= 0:
            violations.append(AdmissibilityViolation("value_positive", witness, value))

    if violations:
        logger.warning(f"Admissibility failed at {len(violations)} sampled conditions, "
                       f"first: {violations[0].condition}")
    return AdmissibilityReport(samples=samples, seed=seed, violations=tuple(violations),
                               min_partial_sum_margin=partial_margin, min_value_margin=value_margin)


def form_invariance_violations(space: HomogeneousSpace, form: OneFormSpec) -> List[Tuple[int, int, Fraction]]:
    """
    Pairs (h-position, m-position) with beta([h_j, m_q]_m) != 0, exact
    :param space:
    :param form:
    :return:
    """
    violations = []
    for j in range(space.dim_h):
        w = [Fraction(int(index == j)) for index in range(space.dim_h)]
        for q in range(space.dim_m):
            u = [Fraction(int(index == q)) for index in range(space.dim_m)]
            value = form(space.h_action(w, u))
            if value != 0:
                violations.append((j, q, value))
    return violations


def oneform_vector_bridge(family: MetricFamily, params: MetricParams,
                          obj: Union[OneFormSpec, Sequence[Fraction]]) -> Union[List[Fraction], OneFormSpec]:
    """
    One-form beta -> the m-vector v with g(v, .) = beta; m-vector v -> the one-form g(v, .)
    :param family:
    :param params:
    :param obj:
    :return:
    """
    gram = family.gram(params)
    if isinstance(obj, OneFormSpec):
        family.check_vector(obj.covector)
        return exact_matvec(exact_inverse(gram), obj.covector)
    family.check_vector(obj)
    return OneFormSpec(tuple(exact_matvec(gram, [parse_rational(entry) for entry in obj])))
