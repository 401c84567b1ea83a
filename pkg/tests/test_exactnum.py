#!/usr/bin/env python3

"""
Exact rationals, polynomials, rational functions and the symbolic linear solver
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from geograph.enums import SolutionKind
from geograph.errors import VariableContextError, ZeroDenominatorError
from geograph.exactnum import MPoly, RatFunc, VariableContext, coordinate_monomials, exact_determinant, \
    exact_inverse, format_rational, leading_minors_positive, linear_solve_ratfunc, parse_rational, poly_arith, \
    ratfunc_arith

CONTEXT = VariableContext(("y1", "y2"), ("c",))

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
monomials = st.tuples(*[st.integers(0, 2)] * 3).filter(lambda exps: sum(exps) <= 4)
polynomials = st.dictionaries(monomials, rationals, max_size=5).map(lambda terms: MPoly(CONTEXT, terms))
assignments = st.fixed_dictionaries({name: rationals for name in CONTEXT.names})


def test_parse_rational_strings():
    assert parse_rational("3/2") == Fraction(3, 2)
    assert parse_rational(" -7 ") == Fraction(-7)
    assert parse_rational(5) == Fraction(5)


@pytest.mark.parametrize("value", [0.5, True, None, "three"])
def test_parse_rational_rejects_inexact_input(value):
    with pytest.raises(ValueError):
        parse_rational(value)


def test_parse_rational_zero_denominator():
    with pytest.raises(ZeroDenominatorError):
        parse_rational("1/0")


@given(rationals)
def test_format_rational_reads_back(value):
    assert parse_rational(format_rational(value)) == value


@given(polynomials, polynomials, polynomials)
@settings(max_examples=50, deadline=None)
def test_polynomial_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert (a - a).is_zero


@given(polynomials, polynomials, assignments)
@settings(max_examples=50, deadline=None)
def test_substitution_is_a_ring_map(a, b, assignment):
    assert (a * b).substitute(assignment) == a.substitute(assignment) * b.substitute(assignment)
    assert (a + b).substitute(assignment) == a.substitute(assignment) + b.substitute(assignment)


@given(polynomials, polynomials)
@settings(max_examples=50, deadline=None)
def test_exact_divide_recovers_factor(a, b):
    if b.is_zero:
        return
    assert (a * b).exact_divide(b) == a


def test_polynomial_rendering_follows_monomial_order():
    context = VariableContext((), ("c1", "c2"))
    c1, c2 = context.variable("c1"), context.variable("c2")
    poly = c1 * c2 - c2 ** 2 * Fraction(1, 2) + 3
    assert str(poly) == "c1*c2 - 1/2*c2^2 + 3"


def test_coeff_extract_leaves_parameter_polynomial():
    y1, y2, c = CONTEXT.variable("y1"), CONTEXT.variable("y2"), CONTEXT.variable("c")
    poly = c * y1 * y2 + 2 * y1 * y2 + y1 ** 2
    coefficient = poly.coeff_extract({"y1": 1, "y2": 1})
    assert coefficient.context == CONTEXT.parameter_context()
    assert str(coefficient) == "c + 2"
    assert coefficient == CONTEXT.parameter_context().variable("c") + 2


def test_mixing_contexts_raises():
    other = VariableContext(("y1",), ())
    with pytest.raises(VariableContextError):
        CONTEXT.variable("y1") + other.variable("y1")


def test_coordinate_monomials_of_degree_two():
    assert len(coordinate_monomials(3, 2)) == 6
    assert all(sum(exps) == 2 for exps in coordinate_monomials(3, 2))


def test_ratfunc_normal_form_and_rendering():
    context = VariableContext((), ("c1", "c2"))
    c1, c2 = context.variable("c1"), context.variable("c2")
    ratio = RatFunc(c2 * c1, c1 * c1)
    assert ratio == RatFunc(c2, c1)
    assert str(ratio) == "c2/c1"
    assert str(RatFunc(c1 + 4 * c2, c1 + c2)) == "(c1 + 4*c2)/(c1 + c2)"
    assert RatFunc(c1 * c1 - c2 * c2, c1 - c2) == RatFunc(c1 + c2)


def test_ratfunc_substitute_zero_denominator():
    context = VariableContext((), ("c",))
    c = context.variable("c")
    with pytest.raises(ZeroDenominatorError):
        RatFunc(context.one(), c - 1).substitute({"c": Fraction(1)})


def test_ratfunc_zero_denominator_on_construction():
    with pytest.raises(ZeroDenominatorError):
        RatFunc(CONTEXT.one(), CONTEXT.zero())


def test_linear_solve_unique_over_parameters():
    context = VariableContext((), ("c",))
    c = context.variable("c")
    # c x0 = c^2, x0 + x1 = 1
    solution = linear_solve_ratfunc([[c, 0], [1, 1]], [c * c, 1], context=context)
    assert solution.kind is SolutionKind.UNIQUE
    assert solution.particular[0] == RatFunc(c)
    assert solution.particular[1] == RatFunc(1 - c)


def test_linear_solve_parametrized():
    solution = linear_solve_ratfunc([[1, 1, 0]], [2])
    assert solution.kind is SolutionKind.PARAMETRIZED
    assert len(solution.nullspace) == 2


def test_linear_solve_reports_inconsistent_rows():
    solution = linear_solve_ratfunc([[1, 0], [0, 0], [2, 0]], [1, 0, 3])
    assert solution.kind is SolutionKind.INCONSISTENT
    assert not solution.is_consistent
    assert solution.inconsistent_rows == (2,)


def test_linear_solve_without_rows():
    solution = linear_solve_ratfunc([], [], context=VariableContext(), ncols=2)
    assert solution.kind is SolutionKind.PARAMETRIZED
    assert all(entry.is_zero for entry in solution.particular)


def test_exact_matrix_helpers():
    matrix = [[2, 1], [1, 1]]
    assert exact_determinant(matrix) == 1
    assert exact_inverse(matrix) == [[1, -1], [-1, 2]]
    assert leading_minors_positive(matrix)
    assert not leading_minors_positive([[1, 2], [2, 1]])
    with pytest.raises(ZeroDenominatorError):
        exact_inverse([[1, 2], [2, 4]])


def test_named_operations():
    y1, c = CONTEXT.variable("y1"), CONTEXT.variable("c")
    assert poly_arith(y1, c, "mul") == y1 * c
    assert poly_arith(y1, c, "sub") == y1 - c
    quotient = ratfunc_arith(RatFunc(y1), RatFunc(c), "div")
    assert ratfunc_arith(quotient, RatFunc(c), "mul") == RatFunc(y1)
    with pytest.raises(ValueError):
        poly_arith(y1, c, "div")
    with pytest.raises(ZeroDenominatorError):
        ratfunc_arith(RatFunc(y1), RatFunc(CONTEXT.zero()), "div")


def test_ratfunc_cancels_common_polynomial_factor():
    context = VariableContext((), ("c1", "c2"))
    c1, c2 = context.variable("c1"), context.variable("c2")
    ratio = RatFunc((c1 + c2) * (c1 + 1), (c1 + c2) * (2 * c2 + 2))
    assert ratio == RatFunc(c1 + 1, 2 * c2 + 2)
    assert str(ratio.den) == "c2 + 1"
    assert str(ratio) == "(1/2*c1 + 1/2)/(c2 + 1)"


def test_linear_solve_inconsistent_for_generic_parameter():
    context = VariableContext((), ("c",))
    c = context.variable("c")
    solution = linear_solve_ratfunc([[1], [1]], [1, c], context=context)
    assert solution.kind is SolutionKind.INCONSISTENT
    assert solution.inconsistent_rows == (1,)


def test_linear_solve_rational_constants():
    solution = linear_solve_ratfunc([[2, 0], [0, 3]], [1, Fraction(1, 2)])
    assert solution.kind is SolutionKind.UNIQUE
    assert [entry.constant_value() for entry in solution.particular] == [Fraction(1, 2), Fraction(1, 6)]
