#!/usr/bin/env python3

"""
Block forms, metric families, norm closed forms and the fundamental tensor
"""

from fractions import Fraction

import numpy as np
import pytest

from geograph.errors import DimensionMismatchError, InvalidMetricError, ZeroVectorError
from geograph.metrics import BlockForm, MetricFamily, MetricParams, OneFormSpec, QPowerNorm, RandersNorm, \
    WeightedSquaresNorm, BC_functions, L_value_and_partials, admissibility_sample, cartan_tensor_fd, eval_metric, \
    form_invariance_violations, fundamental_tensor_fd, gy_pair, oneform_vector_bridge


@pytest.fixture
def qpower(heisenberg_family) -> QPowerNorm:
    return QPowerNorm("3", heisenberg_family, (MetricParams((1, 1)), MetricParams((1, 4))))


def test_block_form_must_be_positive_definite():
    with pytest.raises(InvalidMetricError):
        BlockForm(0, ((1, 2), (2, 1)))
    with pytest.raises(InvalidMetricError):
        BlockForm(0, ((1, 1), (0, 1)))


def test_metric_params_must_be_positive():
    with pytest.raises(InvalidMetricError):
        MetricParams((1, 0))


def test_family_needs_distinct_symbols():
    with pytest.raises(InvalidMetricError):
        MetricFamily.standard(((0,), (1,)), ("c", "c"))


def test_symbol_values_scale_to_the_literal_block(heisenberg_family):
    assert heisenberg_family.symbol_values((Fraction(2), Fraction(8))) == {"c": Fraction(4)}
    assert heisenberg_family.symbol_values((2.0, 8.0)) == pytest.approx({"c": 4.0})


def test_symbol_values_rejects_unmatched_literals():
    family = MetricFamily.standard(((0,), (1,), (2,)), ("1", "c", "2"))
    assert family.symbol_values((Fraction(1), Fraction(3), Fraction(3))) is None
    assert family.symbol_values((Fraction(1), Fraction(3), Fraction(2))) == {"c": Fraction(3)}


def test_eval_metric_exact(heisenberg_family):
    params = MetricParams((1, 4))
    assert eval_metric(heisenberg_family, params, [1, 2, 3], [1, 0, 1]) == 13
    with pytest.raises(DimensionMismatchError):
        eval_metric(heisenberg_family, params, [1, 2], [1, 0])


def test_qpower_closed_form(qpower):
    y = np.array([0.3, -0.4, 0.5])
    f1 = np.sqrt(0.09 + 0.16 + 0.25)
    f2 = np.sqrt(0.09 + 0.16 + 4 * 0.25)
    assert qpower.value(y) == pytest.approx((f1 ** 3 + f2 ** 3) ** (1 / 3), rel=1e-14)


def test_qpower_b_functions_at_the_centre(qpower):
    b, c = BC_functions(qpower, np.array([0.0, 0.0, 1.0]))
    # F_1 = 1, F_2 = 2, phi = 9^(1/3), B_j = F_j / phi for q = 3
    phi = 9 ** (1 / 3)
    np.testing.assert_allclose(b, [1 / phi, 2 / phi], rtol=1e-12)
    assert c[1] / c[0] == pytest.approx(3.0, rel=1e-12)


def test_zero_vector_is_rejected(qpower):
    with pytest.raises(ZeroVectorError):
        qpower.value(np.zeros(3))


def test_exponent_must_be_positive(heisenberg_family):
    with pytest.raises(InvalidMetricError):
        QPowerNorm("0", heisenberg_family, (MetricParams((1, 1)),))


def test_randers_form_must_be_short(heisenberg_family):
    with pytest.raises(InvalidMetricError):
        RandersNorm(heisenberg_family, MetricParams((1, 1)), OneFormSpec((0, 0, 1)))
    RandersNorm(heisenberg_family, MetricParams((1, 4)), OneFormSpec((0, 0, 1)))


@pytest.mark.parametrize("norm_name", ["qpower", "weighted", "randers"])
def test_fundamental_tensor_matches_finite_differences(heisenberg_family, norm_name):
    metrics = (MetricParams((1, 1)), MetricParams((1, 4)))
    norm = {
        "qpower": QPowerNorm("3", heisenberg_family, metrics, (OneFormSpec((0, 0, Fraction(1, 5))),)),
        "weighted": WeightedSquaresNorm(("1", "2"), heisenberg_family, metrics),
        "randers": RandersNorm(heisenberg_family, MetricParams((1, 4)), OneFormSpec((0, 0, Fraction(1, 2)))),
    }[norm_name]
    rng = np.random.default_rng(7)
    for _ in range(20):
        y, v = rng.standard_normal(3), rng.standard_normal(3)
        expected = gy_pair(norm, y, v)
        contracted = y @ fundamental_tensor_fd(norm, y) @ v
        assert contracted == pytest.approx(expected, rel=1e-6, abs=1e-8 * norm.squared(y))


def test_euler_identity_for_partials(qpower):
    # L is homogeneous of degree two in its arguments
    y = np.array([0.2, 0.7, -0.1])
    value, partials = L_value_and_partials(qpower, y)
    assert partials @ qpower.arguments(y) == pytest.approx(2 * value, rel=1e-12)


def test_admissibility_passes_for_q_three(qpower):
    assert admissibility_sample(qpower, 100, 0).ok


def test_admissibility_flags_concave_exponent(heisenberg_family):
    norm = QPowerNorm("1/2", heisenberg_family, (MetricParams((1, 1)), MetricParams((1, 4))))
    report = admissibility_sample(norm, 100, 0)
    assert not report.ok
    assert "hessian_psd" in {violation.condition for violation in report.violations}


def test_without_and_zeroed_forms(qpower, heisenberg_family):
    norm = QPowerNorm("3", heisenberg_family, qpower.metrics, (OneFormSpec((0, 0, Fraction(1, 5))),))
    assert norm.has_forms
    assert not norm.without_forms().has_forms
    zeroed = norm.with_zeroed_forms([0])
    assert zeroed.l == 1 and not zeroed.has_forms


def test_oneform_vector_bridge(heisenberg_family):
    params = MetricParams((1, 4))
    vector = oneform_vector_bridge(heisenberg_family, params, OneFormSpec((0, 0, 1)))
    assert vector == [0, 0, Fraction(1, 4)]
    assert oneform_vector_bridge(heisenberg_family, params, vector).covector == (0, 0, 1)


def test_form_invariance(heisenberg_space):
    assert form_invariance_violations(heisenberg_space, OneFormSpec((0, 0, 1))) == []
    violations = form_invariance_violations(heisenberg_space, OneFormSpec((1, 0, 0)))
    assert violations == [(0, 1, Fraction(-1))]


def test_cartan_tensor_vanishes_for_riemannian(heisenberg_family):
    norm = WeightedSquaresNorm(("1",), heisenberg_family, (MetricParams((1, 3)),))
    rng = np.random.default_rng(3)
    y, u, v, w = (rng.standard_normal(3) for _ in range(4))
    assert abs(cartan_tensor_fd(norm, y, u, v, w)) < 1e-6


def test_cartan_tensor_of_randers(heisenberg_family):
    norm = RandersNorm(heisenberg_family, MetricParams((1, 4)), OneFormSpec((0, 0, Fraction(1, 2))))
    rng = np.random.default_rng(4)
    y, u, v, w = (rng.standard_normal(3) for _ in range(4))
    # degree-zero homogeneity of g_y kills the y direction
    assert abs(cartan_tensor_fd(norm, y, u, v, y)) < 1e-6
    assert cartan_tensor_fd(norm, y, u, v, w) == pytest.approx(cartan_tensor_fd(norm, y, w, v, u), rel=1e-4, abs=1e-7)
