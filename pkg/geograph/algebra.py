#!/usr/bin/env python3

"""
Lie algebra data of a homogeneous space:
structure constants, the reductive split g = h + m, the module split m = m_1 + ... + m_s,
bracket and projection arithmetic, the adjoint exponential on m or h, and shifting a split
along the image of a linear geodesic graph.

Split coordinates: a split carries a basis change P whose columns are the split basis vectors
written in the original basis. Index sets h_indices / m_indices name split positions.
m-coordinates follow the sorted m_indices, h-coordinates the sorted h_indices.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from geograph.enums import Part, ViolationKind, SolutionKind
from geograph.errors import BlockIndexError, DegenerateGraphError, DimensionMismatchError, \
    NonReductiveSplitError, ZeroDenominatorError
from geograph.exactnum import exact_inverse, exact_matmul, exact_matvec, format_rational, linear_solve_ratfunc, \
    parse_rational, VariableContext
from geograph.globals import EXPM_NORM_BOUND, EXPM_TAYLOR_DEGREE
from geograph.logging import get_logger

logger = get_logger()

StructureEntry = Tuple[Tuple[int, Fraction], ...]

Vector = Union[Sequence[Fraction], Sequence[float], np.ndarray]


def _is_exact(vector: Vector) -> bool:
    if isinstance(vector, np.ndarray):
        return False
    return all(isinstance(entry, (int, Fraction)) and not isinstance(entry, bool) for entry in vector)


@dataclass(frozen=True)
class LieAlgebraSpec:
    """
    Structure constants over the rationals. Only ordered pairs a < b are stored,
    [e_a, e_b] = sum_k c_ab^k e_k.
    """
    dim: int
    basis_labels: Tuple[str, ...]
    structure: Mapping[Tuple[int, int], StructureEntry] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        if len(self.basis_labels) != self.dim:
            logger.error(f"Algebra of dimension {self.dim} has {len(self.basis_labels)} basis labels")
            raise DimensionMismatchError(f"Algebra of dimension {self.dim} has "
                                         f"{len(self.basis_labels)} basis labels")

        structure: Dict[Tuple[int, int], StructureEntry] = {}
        for (a, b), entries in self.structure.items():
            collected: Dict[int, Fraction] = {}
            for index, coeff in entries:
                collected[int(index)] = collected.get(int(index), Fraction(0)) + parse_rational(coeff)
            cleaned = tuple(sorted((index, coeff) for index, coeff in collected.items() if coeff != 0))
            if cleaned:
                structure[(int(a), int(b))] = cleaned
        object.__setattr__(self, "structure", structure)

    def basis_vector(self, index: int) -> List[Fraction]:
        vector = [Fraction(0)] * self.dim
        vector[index] = Fraction(1)
        return vector

    @cached_property
    def tensor_exact(self) -> List[List[List[Fraction]]]:
        """
        Dense T[a][b][k] with [e_a, e_b] = sum_k T[a][b][k] e_k, antisymmetric in a, b
        :return:
        """
        tensor = [[[Fraction(0)] * self.dim for _ in range(self.dim)] for _ in range(self.dim)]
        for (a, b), entries in self.structure.items():
            for index, coeff in entries:
                tensor[a][b][index] += coeff
                tensor[b][a][index] -= coeff
        return tensor

    @cached_property
    def tensor_float(self) -> np.ndarray:
        return np.array(self.tensor_exact, dtype=float)


def bracket(spec: LieAlgebraSpec, x: Vector, y: Vector) -> Vector:
    """
    Lie bracket of two coefficient vectors in the original basis.
    Exact for rational input, numpy for float input.
    :param spec:
    :param x:
    :param y:
    :return:
    """
    if len(x) != spec.dim or len(y) != spec.dim:
        logger.error(f"Bracket of vectors of length {len(x)} and {len(y)} in an algebra of dimension {spec.dim}")
        raise DimensionMismatchError(f"Bracket of vectors of length {len(x)} and {len(y)} "
                                     f"in an algebra of dimension {spec.dim}")

    if not (_is_exact(x) and _is_exact(y)):
        return np.einsum("a,b,abk->k", np.asarray(x, dtype=float), np.asarray(y, dtype=float), spec.tensor_float)

    result = [Fraction(0)] * spec.dim
    for (a, b), entries in spec.structure.items():
        coeff = x[a] * y[b] - x[b] * y[a]
        if coeff == 0:
            continue
        for index, structure_coeff in entries:
            result[index] += coeff * structure_coeff
    return result


@dataclass(frozen=True)
class ReductiveSplit:
    """
    g = h + m in the basis given by the columns of basis_change (identity when absent)
    """
    h_indices: Tuple[int, ...]
    m_indices: Tuple[int, ...]
    basis_change: Optional[Tuple[Tuple[Fraction, ...], ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "h_indices", tuple(sorted(int(index) for index in self.h_indices)))
        object.__setattr__(self, "m_indices", tuple(sorted(int(index) for index in self.m_indices)))
        if self.basis_change is not None:
            object.__setattr__(self, "basis_change",
                               tuple(tuple(parse_rational(entry) for entry in row) for row in self.basis_change))

    @property
    def dim(self) -> int:
        return len(self.h_indices) + len(self.m_indices)

    def matrix(self) -> List[List[Fraction]]:
        if self.basis_change is None:
            return [[Fraction(int(i == j)) for j in range(self.dim)] for i in range(self.dim)]
        return [list(row) for row in self.basis_change]

    def inverse(self) -> List[List[Fraction]]:
        if self.basis_change is None:
            return self.matrix()
        return exact_inverse(self.basis_change)

    def column(self, index: int) -> List[Fraction]:
        return [row[index] for row in self.matrix()]


@dataclass(frozen=True)
class ModuleSplit:
    """
    Ordered partition of the m split positions into Ad(H)-invariant blocks m_1 ... m_s
    """
    blocks: Tuple[Tuple[int, ...], ...]
    m_indices: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(int(index) for index in block) for block in self.blocks))
        object.__setattr__(self, "m_indices", tuple(sorted(int(index) for index in self.m_indices)))

    @property
    def count(self) -> int:
        return len(self.blocks)

    @cached_property
    def block_positions(self) -> Tuple[Tuple[int, ...], ...]:
        """
        Blocks as positions into m-coordinates
        :return:
        """
        positions = []
        for block in self.blocks:
            missing = [index for index in block if index not in self.m_indices]
            if missing:
                logger.error(f"Block {block} names indices {missing} outside m = {self.m_indices}")
                raise BlockIndexError(f"Block {block} names indices {missing} outside m")
            positions.append(tuple(self.m_indices.index(index) for index in block))
        return tuple(positions)


def project(split: ReductiveSplit, z: Vector, part: Part) -> Vector:
    """
    h- or m-component of z, both given and returned in the original basis
    :param split:
    :param z:
    :param part:
    :return:
    """
    if len(z) != split.dim:
        logger.error(f"Vector of length {len(z)} does not live in an algebra of dimension {split.dim}")
        raise DimensionMismatchError(f"Vector of length {len(z)} does not live in an algebra of "
                                     f"dimension {split.dim}")
    keep = split.h_indices if part is Part.H else split.m_indices

    if _is_exact(z):
        coords = exact_matvec(split.inverse(), z)
        coords = [coord if index in keep else Fraction(0) for index, coord in enumerate(coords)]
        return exact_matvec(split.matrix(), coords)

    matrix = np.array(split.matrix(), dtype=float)
    coords = np.array(split.inverse(), dtype=float) @ np.asarray(z, dtype=float)
    mask = np.zeros(split.dim)
    mask[list(keep)] = 1.0
    return matrix @ (coords * mask)


def block_project(msplit: ModuleSplit, y: Vector, i: int) -> Vector:
    """
    Component of an m-vector in block i
    :param msplit:
    :param y:
    :param i:
    :return:
    """
    if not 0 <= i < msplit.count:
        logger.error(f"Block index {i} out of range for {msplit.count} blocks")
        raise BlockIndexError(f"Block index {i} out of range for {msplit.count} blocks")
    if len(y) != len(msplit.m_indices):
        logger.error(f"m-vector of length {len(y)}, expected {len(msplit.m_indices)}")
        raise DimensionMismatchError(f"m-vector of length {len(y)}, expected {len(msplit.m_indices)}")

    positions = set(msplit.block_positions[i])
    if isinstance(y, np.ndarray):
        result = np.zeros_like(y, dtype=float)
        result[list(positions)] = y[list(positions)]
        return result
    zero = Fraction(0) if _is_exact(y) else 0.0
    return [entry if position in positions else zero for position, entry in enumerate(y)]


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    witness: Tuple[int, ...]
    detail: str

    def to_dict(self) -> Dict:
        return {"kind": self.kind.value, "witness": list(self.witness), "detail": self.detail}


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def of_kind(self, *kinds: ViolationKind) -> List[Violation]:
        return [violation for violation in self.violations if violation.kind in kinds]

    def to_dict(self) -> Dict:
        return {"ok": self.ok, "violations": [violation.to_dict() for violation in self.violations]}


def _split_tensor(spec: LieAlgebraSpec, split: ReductiveSplit) -> List[List[List[Fraction]]]:
    """
    Structure constants conjugated into the split basis, T[p][q] = P^-1 [P_p, P_q]
    :param spec:
    :param split:
    :return:
    """
    if split.basis_change is None:
        return spec.tensor_exact
    inverse = split.inverse()
    columns = [split.column(index) for index in range(spec.dim)]
    tensor = [[[Fraction(0)] * spec.dim for _ in range(spec.dim)] for _ in range(spec.dim)]
    for p, q in combinations(range(spec.dim), 2):
        coords = exact_matvec(inverse, bracket(spec, columns[p], columns[q]))
        tensor[p][q] = coords
        tensor[q][p] = [-coord for coord in coords]
    return tensor


def _format_vector(labels: Sequence[str], coords: Sequence[Fraction]) -> str:
    pieces = [f"{format_rational(coord)}*{label}" for label, coord in zip(labels, coords) if coord != 0]
    return " + ".join(pieces) if pieces else "0"


def validate(spec: LieAlgebraSpec, split: ReductiveSplit, msplit: ModuleSplit) -> ValidationReport:
    """
    List every violated structural invariant with the witnessing basis indices
    :param spec:
    :param split:
    :param msplit:
    :return:
    """
    violations: List[Violation] = []

    # Storage and antisymmetry
    for (a, b), entries in spec.structure.items():
        out_of_range = [index for index in (a, b, *(index for index, _ in entries)) if not 0 <= index < spec.dim]
        if out_of_range:
            violations.append(Violation(ViolationKind.STORAGE, (a, b),
                                        f"indices {out_of_range} outside 0..{spec.dim - 1}"))
        elif a == b:
            violations.append(Violation(ViolationKind.ANTISYMMETRY, (a, b),
                                        f"[{spec.basis_labels[a]},{spec.basis_labels[a]}] stored as nonzero"))
        elif a > b:
            violations.append(Violation(ViolationKind.STORAGE, (a, b), "pairs must be stored with a < b"))
            if (b, a) in spec.structure:
                violations.append(Violation(ViolationKind.ANTISYMMETRY, (b, a),
                                            "both orders of the pair are stored"))

    if any(violation.kind is ViolationKind.STORAGE for violation in violations):
        return ValidationReport(tuple(violations))

    # Jacobi
    labels = spec.basis_labels
    for a, b, c in combinations(range(spec.dim), 3):
        e_a, e_b, e_c = spec.basis_vector(a), spec.basis_vector(b), spec.basis_vector(c)
        cyclic = [x + y + z for x, y, z in zip(bracket(spec, bracket(spec, e_a, e_b), e_c),
                                               bracket(spec, bracket(spec, e_b, e_c), e_a),
                                               bracket(spec, bracket(spec, e_c, e_a), e_b))]
        if any(coord != 0 for coord in cyclic):
            violations.append(Violation(ViolationKind.JACOBI, (a, b, c),
                                        f"cyclic sum over ({labels[a]}, {labels[b]}, {labels[c]}) is "
                                        f"{_format_vector(labels, cyclic)}"))

    # Partition of g into h and m
    combined = list(split.h_indices) + list(split.m_indices)
    if sorted(combined) != list(range(spec.dim)):
        violations.append(Violation(ViolationKind.PARTITION, tuple(sorted(combined)),
                                    f"h and m must cover 0..{spec.dim - 1} exactly once"))
        return ValidationReport(tuple(violations))

    # Basis change
    if split.basis_change is not None:
        if len(split.basis_change) != spec.dim or any(len(row) != spec.dim for row in split.basis_change):
            violations.append(Violation(ViolationKind.BASIS_CHANGE, (),
                                        f"basis change must be {spec.dim}x{spec.dim}"))
            return ValidationReport(tuple(violations))
        try:
            split.inverse()
        except ZeroDenominatorError:
            violations.append(Violation(ViolationKind.BASIS_CHANGE, (), "basis change is singular"))
            return ValidationReport(tuple(violations))

    tensor = _split_tensor(spec, split)

    # Reductivity: [h, h] in h and [h, m] in m
    for h_a in split.h_indices:
        for other in range(spec.dim):
            wrong_part = split.m_indices if other in split.h_indices else split.h_indices
            for index in wrong_part:
                if tensor[h_a][other][index] != 0:
                    violations.append(Violation(ViolationKind.REDUCTIVITY, (h_a, other, index),
                                                f"bracket of split vectors {h_a} and {other} has component "
                                                f"{format_rational(tensor[h_a][other][index])} along {index}"))

    # Module split: partition of m, then [h, m_i] in m_i
    block_union = [index for block in msplit.blocks for index in block]
    if sorted(block_union) != list(split.m_indices) or any(not block for block in msplit.blocks):
        violations.append(Violation(ViolationKind.PARTITION, tuple(sorted(block_union)),
                                    f"blocks must partition m = {list(split.m_indices)} into nonempty groups"))
        return ValidationReport(tuple(violations))

    for h_a in split.h_indices:
        for block in msplit.blocks:
            for member in block:
                for index in split.m_indices:
                    if index in block:
                        continue
                    if tensor[h_a][member][index] != 0:
                        violations.append(Violation(ViolationKind.MODULE_INVARIANCE, (h_a, member, index),
                                                    f"bracket of split vectors {h_a} and {member} leaves its "
                                                    f"block {list(block)} along {index}"))

    return ValidationReport(tuple(violations))


@dataclass(frozen=True)
class SplitFrame:
    """
    Structure constants in split coordinates, sliced into the pieces the solvers contract against.
    mm_m[p][q][k]: m-component k of [m_p, m_q]; hm_m[j][q][k]: m-component k of [h_j, m_q];
    mm_h[p][q][j]: h-component j of [m_p, m_q]; hh_h[i][j][l]: h-component l of [h_i, h_j].
    """
    tensor: List[List[List[Fraction]]]
    mm_m: List[List[List[Fraction]]]
    hm_m: List[List[List[Fraction]]]
    mm_h: List[List[List[Fraction]]]
    hh_h: List[List[List[Fraction]]]
    mm_m_float: np.ndarray
    hm_m_float: np.ndarray
    hh_h_float: np.ndarray


@dataclass(frozen=True)
class HomogeneousSpace:
    """
    Algebra plus its reductive and module splits
    """
    algebra: LieAlgebraSpec
    split: ReductiveSplit
    msplit: ModuleSplit
    maximal_isometry_group: bool = False
    name: str = ""

    @property
    def dim_m(self) -> int:
        return len(self.split.m_indices)

    @property
    def dim_h(self) -> int:
        return len(self.split.h_indices)

    def _label(self, index: int) -> str:
        label = self.algebra.basis_labels[index]
        if self.split.basis_change is None:
            return label
        column = self.split.column(index)
        if all(entry == int(row == index) for row, entry in enumerate(column)):
            return label
        return f"{label}'"

    @property
    def m_labels(self) -> List[str]:
        return [self._label(index) for index in self.split.m_indices]

    @property
    def h_labels(self) -> List[str]:
        return [self._label(index) for index in self.split.h_indices]

    @cached_property
    def frame(self) -> SplitFrame:
        tensor = _split_tensor(self.algebra, self.split)
        h, m = self.split.h_indices, self.split.m_indices
        mm_m = [[[tensor[p][q][k] for k in m] for q in m] for p in m]
        hm_m = [[[tensor[j][q][k] for k in m] for q in m] for j in h]
        mm_h = [[[tensor[p][q][j] for j in h] for q in m] for p in m]
        hh_h = [[[tensor[i][j][l] for l in h] for j in h] for i in h]
        return SplitFrame(tensor=tensor, mm_m=mm_m, hm_m=hm_m, mm_h=mm_h, hh_h=hh_h,
                          mm_m_float=np.array(mm_m, dtype=float).reshape(len(m), len(m), len(m)),
                          hm_m_float=np.array(hm_m, dtype=float).reshape(len(h), len(m), len(m)),
                          hh_h_float=np.array(hh_h, dtype=float).reshape(len(h), len(h), len(h)))

    def validate(self) -> ValidationReport:
        return validate(self.algebra, self.split, self.msplit)

    def with_split(self, split: ReductiveSplit) -> "HomogeneousSpace":
        return replace(self, split=split, msplit=ModuleSplit(self.msplit.blocks, split.m_indices))

    def embed(self, m_vector: Optional[Sequence] = None, h_vector: Optional[Sequence] = None) -> List[Fraction]:
        """
        Split coordinates of m_vector + h_vector
        :param m_vector:
        :param h_vector:
        :return:
        """
        coords = [Fraction(0)] * self.algebra.dim
        for position, index in enumerate(self.split.m_indices):
            if m_vector is not None:
                coords[index] += m_vector[position]
        for position, index in enumerate(self.split.h_indices):
            if h_vector is not None:
                coords[index] += h_vector[position]
        return coords

    def to_original(self, split_coords: Sequence[Fraction]) -> List[Fraction]:
        return exact_matvec(self.split.matrix(), split_coords)

    def to_split(self, original: Sequence[Fraction]) -> List[Fraction]:
        return exact_matvec(self.split.inverse(), original)

    def m_bracket(self, u: Sequence[Fraction], v: Sequence[Fraction]) -> List[Fraction]:
        """
        m-coordinates of [u, v]_m for m-vectors u, v, exact
        :param u:
        :param v:
        :return:
        """
        mm_m = self.frame.mm_m
        result = [Fraction(0)] * self.dim_m
        for p, u_p in enumerate(u):
            if u_p == 0:
                continue
            for q, v_q in enumerate(v):
                if v_q == 0:
                    continue
                for k in range(self.dim_m):
                    result[k] += u_p * v_q * mm_m[p][q][k]
        return result

    def h_action(self, w: Sequence[Fraction], u: Sequence[Fraction]) -> List[Fraction]:
        """
        m-coordinates of [w, u] for an h-vector w and an m-vector u, exact
        :param w:
        :param u:
        :return:
        """
        hm_m = self.frame.hm_m
        result = [Fraction(0)] * self.dim_m
        for j, w_j in enumerate(w):
            if w_j == 0:
                continue
            for q, u_q in enumerate(u):
                if u_q == 0:
                    continue
                for k in range(self.dim_m):
                    result[k] += w_j * u_q * hm_m[j][q][k]
        return result

    def ad_h_matrix(self, w: Sequence[float], part: Part = Part.M) -> np.ndarray:
        """
        Float matrix of ad(w) restricted to m or to h, for w in h-coordinates
        :param w:
        :param part:
        :return:
        """
        w = np.asarray(w, dtype=float)
        if w.shape != (self.dim_h,):
            logger.error(f"h-vector of shape {w.shape}, expected ({self.dim_h},)")
            raise DimensionMismatchError(f"h-vector of shape {w.shape}, expected ({self.dim_h},)")
        if part is Part.M:
            return np.einsum("j,jqk->kq", w, self.frame.hm_m_float)
        return np.einsum("i,ijl->lj", w, self.frame.hh_h_float)


def expm_taylor(matrix: np.ndarray) -> np.ndarray:
    """
    Matrix exponential by scaling and squaring around a truncated Taylor series
    :param matrix:
    :return:
    """
    matrix = np.asarray(matrix, dtype=float)
    size = matrix.shape[0]
    identity = np.eye(size)
    if size == 0:
        return identity

    norm = np.linalg.norm(matrix, 1)
    levels = 0
    if norm > EXPM_NORM_BOUND:
        levels = int(np.ceil(np.log2(norm / EXPM_NORM_BOUND)))
    scaled = matrix / (2.0 ** levels)

    result = identity.copy()
    term = identity.copy()
    for degree in range(1, EXPM_TAYLOR_DEGREE + 1):
        term = term @ scaled / degree
        result = result + term

    for _ in range(levels):
        result = result @ result
    return result


def exp_ad(space: HomogeneousSpace, w: Sequence[float], t: float, part: Part = Part.M) -> np.ndarray:
    """
    exp(t ad(w)) restricted to m or h
    :param space:
    :param w: h-coordinates
    :param t:
    :param part:
    :return:
    """
    return expm_taylor(t * space.ad_h_matrix(w, part))


def shift_split(space: HomogeneousSpace, graph: Sequence[Sequence[Fraction]]) -> ReductiveSplit:
    """
    Split whose m is spanned by e_r + xi(e_r) for a linear graph xi
    :param space:
    :param graph: dim(h) x dim(m) exact matrix, column r is xi(e_r) in h-coordinates
    :return:
    """
    split = space.split
    if len(graph) != space.dim_h or any(len(row) != space.dim_m for row in graph):
        logger.error(f"Linear graph must be a {space.dim_h}x{space.dim_m} matrix")
        raise DimensionMismatchError(f"Linear graph must be a {space.dim_h}x{space.dim_m} matrix")

    shear = [[Fraction(int(i == j)) for j in range(space.algebra.dim)] for i in range(space.algebra.dim)]
    for j, h_index in enumerate(split.h_indices):
        for r, m_index in enumerate(split.m_indices):
            shear[h_index][m_index] = parse_rational(graph[j][r])

    shifted = ReductiveSplit(split.h_indices, split.m_indices, tuple(map(tuple, exact_matmul(split.matrix(), shear))))

    try:
        shifted.inverse()
    except ZeroDenominatorError:
        logger.error("Shifted m is not complementary to h")
        raise DegenerateGraphError("Shifted m is not complementary to h")

    report = validate(space.algebra, shifted, ModuleSplit(space.msplit.blocks, shifted.m_indices))
    failures = report.of_kind(ViolationKind.REDUCTIVITY, ViolationKind.MODULE_INVARIANCE)
    if failures:
        logger.error(f"Shifted split is not reductive, witness {failures[0].witness}: {failures[0].detail}")
        raise NonReductiveSplitError(f"Shifted split is not reductive, witness {failures[0].witness}")

    logger.debug(f"Shifted split columns: {[list(map(format_rational, row)) for row in shifted.basis_change]}")
    return shifted


def central_shift(space: HomogeneousSpace, v: Sequence[Fraction]) -> Optional[Tuple[Fraction, ...]]:
    """
    Find w in h with v - w central in g, i.e. ad(v - w) = 0
    :param space:
    :param v: m-coordinates
    :return: h-coordinates of w, None when no such w exists
    """
    if len(v) != space.dim_m:
        logger.error(f"m-vector of length {len(v)}, expected {space.dim_m}")
        raise DimensionMismatchError(f"m-vector of length {len(v)}, expected {space.dim_m}")

    tensor = space.frame.tensor
    dim = space.algebra.dim
    split_v = space.embed(m_vector=[parse_rational(entry) for entry in v])

    # sum_j w_j [h_j, e_q] = [v, e_q] for every split basis vector e_q
    rows, rhs = [], []
    for q in range(dim):
        for k in range(dim):
            rows.append([tensor[h_index][q][k] for h_index in space.split.h_indices])
            rhs.append(sum((split_v[p] * tensor[p][q][k] for p in range(dim)), Fraction(0)))

    solution = linear_solve_ratfunc(rows, rhs, context=VariableContext(), ncols=space.dim_h)
    if solution.kind is SolutionKind.INCONSISTENT:
        logger.debug(f"No central shift for v = {list(map(format_rational, v))}")
        return None
    return tuple(entry.constant_value() for entry in solution.particular)
