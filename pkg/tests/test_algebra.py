#!/usr/bin/env python3

"""
Brackets, split validation, the adjoint exponential and split shifting
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from geograph.algebra import LieAlgebraSpec, ModuleSplit, ReductiveSplit, block_project, \
    bracket, central_shift, exp_ad, expm_taylor, project, shift_split, validate
from geograph.enums import Part, ViolationKind
from geograph.errors import BlockIndexError, DimensionMismatchError, NonReductiveSplitError

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
vectors = st.lists(rationals, min_size=4, max_size=4)


def test_heisenberg_brackets(heisenberg_algebra):
    e1, e2, e3, d = (heisenberg_algebra.basis_vector(index) for index in range(4))
    assert bracket(heisenberg_algebra, e1, e2) == e3
    assert bracket(heisenberg_algebra, d, e1) == e2
    assert bracket(heisenberg_algebra, d, e2) == [-entry for entry in e1]
    assert bracket(heisenberg_algebra, e3, d) == [0, 0, 0, 0]


@given(vectors, vectors)
@settings(max_examples=50, deadline=None)
def test_bracket_is_antisymmetric(x, y):
    spec = LieAlgebraSpec(4, ("E1", "E2", "E3", "D"), {(0, 1): ((2, "1"),), (0, 3): ((1, "-1"),),
                                                       (1, 3): ((0, "1"),)})
    assert bracket(spec, x, y) == [-entry for entry in bracket(spec, y, x)]


def test_float_bracket_matches_exact(heisenberg_algebra):
    x, y = [Fraction(1, 2), 2, -1, 3], [1, Fraction(-1, 3), 2, Fraction(1, 5)]
    exact = bracket(heisenberg_algebra, x, y)
    approx = bracket(heisenberg_algebra, np.array(x, dtype=float), np.array(y, dtype=float))
    np.testing.assert_allclose(approx, np.array(exact, dtype=float), atol=1e-14)


def test_bracket_dimension_mismatch(heisenberg_algebra):
    with pytest.raises(DimensionMismatchError):
        bracket(heisenberg_algebra, [1, 0, 0], [0, 1, 0, 0])


def test_heisenberg_space_is_valid(heisenberg_space):
    assert heisenberg_space.validate().ok
    assert heisenberg_space.m_labels == ["E1", "E2", "E3"]
    assert heisenberg_space.h_labels == ["D"]


def test_jacobi_violation_is_reported():
    # [E1, E2] = E3, [E1, E3] = E1: the cyclic sum over (E1, E2, E3) is -E3
    spec = LieAlgebraSpec(3, ("E1", "E2", "E3"), {(0, 1): ((2, "1"),), (0, 2): ((0, "1"),)})
    report = validate(spec, ReductiveSplit((), (0, 1, 2)), ModuleSplit(((0, 1, 2),), (0, 1, 2)))
    assert not report.ok
    assert report.of_kind(ViolationKind.JACOBI)[0].witness == (0, 1, 2)


def test_module_invariance_violation_names_witness(heisenberg_algebra):
    structure = dict(heisenberg_algebra.structure)
    structure[(0, 3)] = ((1, Fraction(-1)), (2, Fraction(1)))
    spec = LieAlgebraSpec(4, heisenberg_algebra.basis_labels, structure)
    report = validate(spec, ReductiveSplit((3,), (0, 1, 2)), ModuleSplit(((0, 1), (2,)), (0, 1, 2)))
    violations = report.of_kind(ViolationKind.MODULE_INVARIANCE)
    assert violations
    assert violations[0].witness == (3, 0, 2)


def test_partition_violation(heisenberg_algebra):
    report = validate(heisenberg_algebra, ReductiveSplit((3,), (0, 1)), ModuleSplit(((0, 1),), (0, 1)))
    assert report.of_kind(ViolationKind.PARTITION)


def test_projection_and_blocks(heisenberg_space):
    z = [Fraction(1), Fraction(2), Fraction(3), Fraction(4)]
    assert project(heisenberg_space.split, z, Part.M) == [1, 2, 3, 0]
    assert project(heisenberg_space.split, z, Part.H) == [0, 0, 0, 4]
    assert block_project(heisenberg_space.msplit, [1, 2, 3], 0) == [1, 2, 0]
    with pytest.raises(BlockIndexError):
        block_project(heisenberg_space.msplit, [1, 2, 3], 2)


def test_m_bracket_and_h_action(heisenberg_space):
    assert heisenberg_space.m_bracket([1, 0, 0], [0, 1, 0]) == [0, 0, 1]
    assert heisenberg_space.h_action([1], [1, 0, 0]) == [0, 1, 0]


@pytest.mark.parametrize("t", [-2.0, 0.3, 1.7])
def test_exp_ad_matches_scipy(heisenberg_space, t):
    generator = heisenberg_space.ad_h_matrix([1.0], Part.M)
    np.testing.assert_allclose(exp_ad(heisenberg_space, [1.0], t, Part.M), expm(t * generator), atol=1e-12)


def test_exp_ad_is_rotation(heisenberg_space):
    rotation = exp_ad(heisenberg_space, [1.0], np.pi / 2, Part.M)
    np.testing.assert_allclose(rotation @ np.array([1.0, 0.0, 0.0]), [0.0, 1.0, 0.0], atol=1e-12)


def test_expm_taylor_large_norm():
    rng = np.random.default_rng(3)
    matrix = rng.standard_normal((5, 5)) * 4
    expected = expm(matrix)
    np.testing.assert_allclose(expm_taylor(matrix), expected, rtol=1e-8, atol=1e-10 * np.abs(expected).max())


def test_shift_split_along_heisenberg_graph(heisenberg_space):
    shifted = shift_split(heisenberg_space, [[0, 0, 2]])
    assert shifted.column(2) == [0, 0, 1, 2]
    space = heisenberg_space.with_split(shifted)
    assert space.validate().ok
    assert space.m_labels == ["E1", "E2", "E3'"]


def test_shift_split_rejects_non_invariant_graph(heisenberg_space):
    with pytest.raises(NonReductiveSplitError):
        shift_split(heisenberg_space, [[1, 0, 0]])


def test_central_shift(heisenberg_space):
    shifted = heisenberg_space.with_split(shift_split(heisenberg_space, [[0, 0, 4]]))
    assert central_shift(shifted, [0, 0, Fraction(1, 4)]) == (Fraction(1),)
    assert central_shift(heisenberg_space, [1, 0, 0]) is None
