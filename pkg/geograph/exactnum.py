#!/usr/bin/env python3

"""
Exact arithmetic substrate:
  * rationals (fractions.Fraction at the interface, sympy QQ inside),
  * multivariate polynomials over a fixed variable context (coordinates y_1..y_n then parameters c^1..c^s),
    on sympy.polys.rings over QQ in grlex order,
  * rational functions in those variables, on sympy.polys.fields,
  * linear solving over the rational function field with sympy DomainMatrix.

Floats never enter this module except at the evaluation boundary (substitute).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.fields import FracElement, FracField, field
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError
from sympy.polys.orderings import grlex
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing

from geograph.enums import SolutionKind
from geograph.errors import DimensionMismatchError, SolverSelfCheckError, VariableContextError, \
    ZeroDenominatorError
from geograph.logging import get_logger

logger = get_logger()

Rat = Fraction

Monomial = Tuple[int, ...]

Scalar = Union[int, Fraction]


def parse_rational(value: Union[int, str, Fraction]) -> Rat:
    """
    Read an exact rational from an int, a Fraction or a string such as "3/2", "-1", "0.25"
    :param value:
    :return:
    """
    if isinstance(value, bool):
        logger.error(f"Booleans are not rationals, got {value}")
        raise ValueError(f"Booleans are not rationals, got {value}")

    if isinstance(value, float):
        logger.error(f"Refusing float {value}, rationals must be given exactly, e.g. \"3/2\"")
        raise ValueError(f"Refusing float {value}, rationals must be given exactly")

    if isinstance(value, (int, Fraction)):
        return Fraction(value)

    if not isinstance(value, str):
        logger.error(f"Cannot read a rational from {value!r}")
        raise ValueError(f"Cannot read a rational from {value!r}")

    text = value.strip()
    try:
        return Fraction(text)
    except ZeroDivisionError:
        logger.error(f"Rational '{text}' has a zero denominator")
        raise ZeroDenominatorError(f"Rational '{text}' has a zero denominator")
    except ValueError:
        logger.error(f"'{text}' is not a rational number")
        raise


def format_rational(value: Rat) -> str:
    """
    String form that parse_rational reads back to the same value
    :param value:
    :return:
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_qq(value: Scalar):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value) -> Fraction:
    return Fraction(int(QQ.numer(value)), int(QQ.denom(value)))


@lru_cache(maxsize=None)
def _fraction_field(names: Tuple[str, ...]) -> FracField:
    # No names gives the field without generators, i.e. QQ itself
    symbols = tuple(Symbol(name) for name in names) or ""
    fraction_field, *_ = field(symbols, QQ, grlex)
    return fraction_field


@dataclass(frozen=True)
class VariableContext:
    """
    Ordered variable list shared by all polynomials that are combined with each other.
    Coordinates come first so they dominate the monomial order.
    """
    y_names: Tuple[str, ...] = ()
    c_names: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "y_names", tuple(self.y_names))
        object.__setattr__(self, "c_names", tuple(self.c_names))
        if len(set(self.names)) != len(self.names):
            logger.error(f"Duplicate variable names in context {self.names}")
            raise VariableContextError(f"Duplicate variable names in context {self.names}")

    @property
    def names(self) -> Tuple[str, ...]:
        return self.y_names + self.c_names

    @property
    def nvars(self) -> int:
        return len(self.y_names) + len(self.c_names)

    @property
    def fraction_field(self) -> FracField:
        return _fraction_field(self.names)

    @property
    def poly_ring(self) -> PolyRing:
        return self.fraction_field.ring

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            logger.error(f"Variable '{name}' is not part of context {self.names}")
            raise VariableContextError(f"Variable '{name}' is not part of context {self.names}")

    def parameter_context(self) -> "VariableContext":
        return VariableContext((), self.c_names)

    def y_monomial(self, monomial: Union[Mapping[str, int], Sequence[int]]) -> Monomial:
        """
        Exponent tuple over the coordinate variables, from a name->power mapping or a tuple
        :param monomial:
        :return:
        """
        if isinstance(monomial, Mapping):
            exps = [0] * len(self.y_names)
            for name, power in monomial.items():
                if name not in self.y_names:
                    logger.error(f"'{name}' is not a coordinate variable of {self.y_names}")
                    raise VariableContextError(f"'{name}' is not a coordinate variable of {self.y_names}")
                exps[self.y_names.index(name)] = int(power)
            return tuple(exps)

        exps = tuple(int(power) for power in monomial)
        if len(exps) != len(self.y_names):
            logger.error(f"Monomial {exps} does not match coordinates {self.y_names}")
            raise DimensionMismatchError(f"Monomial {exps} does not match coordinates {self.y_names}")
        return exps

    def zero(self) -> "MPoly":
        return MPoly(self)

    def one(self) -> "MPoly":
        return MPoly.constant(self, 1)

    def constant(self, value: Scalar) -> "MPoly":
        return MPoly.constant(self, value)

    def variable(self, name: str) -> "MPoly":
        return MPoly.variable(self, name)


def coordinate_monomials(nvars: int, degree: int) -> List[Monomial]:
    """
    All exponent tuples of the given total degree, in decreasing monomial order
    :param nvars:
    :param degree:
    :return:
    """
    monomials = []
    for combo in combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for index in combo:
            exps[index] += 1
        monomials.append(tuple(exps))
    return sorted(set(monomials), key=lambda exps: (sum(exps), exps), reverse=True)


class MPoly:
    """
    Multivariate polynomial with rational coefficients over a VariableContext.
    Immutable wrapper of a sympy PolyElement in the context's grlex ring.
    """
    __slots__ = ("_context", "_element")

    def __init__(self, context: VariableContext, terms: Optional[Mapping[Sequence[int], Scalar]] = None):
        collected: Dict[Monomial, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(exp) for exp in exps)
            if len(exps) != context.nvars:
                logger.error(f"Monomial {exps} has the wrong length for context {context.names}")
                raise DimensionMismatchError(f"Monomial {exps} has the wrong length for context {context.names}")
            if any(exp < 0 for exp in exps):
                logger.error(f"Negative exponent in {exps}")
                raise ValueError(f"Negative exponent in {exps}")
            collected[exps] = collected.get(exps, Fraction(0)) + parse_rational(coeff)
        self._context = context
        self._element = context.poly_ring.from_dict({exps: to_qq(coeff) for exps, coeff in collected.items()})

    @classmethod
    def wrap(cls, context: VariableContext, element: PolyElement) -> "MPoly":
        poly = cls.__new__(cls)
        poly._context = context
        poly._element = element
        return poly

    @classmethod
    def constant(cls, context: VariableContext, value: Scalar) -> "MPoly":
        return cls.wrap(context, context.poly_ring.ground_new(to_qq(parse_rational(value))))

    @classmethod
    def variable(cls, context: VariableContext, name: str) -> "MPoly":
        return cls.wrap(context, context.poly_ring.gens[context.index(name)])

    # Accessors

    @property
    def context(self) -> VariableContext:
        return self._context

    @property
    def element(self) -> PolyElement:
        return self._element

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType({exps: from_qq(coeff) for exps, coeff in self._element.items()})

    @property
    def is_zero(self) -> bool:
        return not self._element

    @property
    def is_constant(self) -> bool:
        return self._element.is_ground

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            logger.error(f"Polynomial {self} is not constant")
            raise ValueError(f"Polynomial {self} is not constant")
        return from_qq(self._element.coeff(1))

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        if self.is_zero:
            return []
        return [(exps, from_qq(coeff)) for exps, coeff in self._element.terms()]

    # Arithmetic

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other._context != self._context:
                logger.error(f"Cannot combine polynomials over {self._context.names} and {other._context.names}")
                raise VariableContextError(f"Cannot combine polynomials over "
                                           f"{self._context.names} and {other._context.names}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return MPoly.constant(self._context, other)
        return NotImplemented

    def __add__(self, other) -> "MPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MPoly.wrap(self._context, self._element + other._element)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly.wrap(self._context, -self._element)

    def __sub__(self, other) -> "MPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MPoly.wrap(self._context, self._element - other._element)

    def __rsub__(self, other) -> "MPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other) -> "MPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MPoly.wrap(self._context, self._element * other._element)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "MPoly":
        if not isinstance(power, int) or power < 0:
            logger.error(f"Polynomials only take non-negative integer powers, got {power}")
            raise ValueError(f"Polynomials only take non-negative integer powers, got {power}")
        return MPoly.wrap(self._context, self._element ** power)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = MPoly.constant(self._context, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self._context == other._context and self._element == other._element

    def __hash__(self):
        return hash((self._context, self._element))

    def scale(self, factor: Scalar) -> "MPoly":
        return MPoly.wrap(self._context, self._element.mul_ground(to_qq(factor)))

    def exact_divide(self, divisor: "MPoly") -> Optional["MPoly"]:
        """
        Quotient when divisor divides self exactly, None otherwise
        :param divisor:
        :return:
        """
        divisor = self._coerce(divisor)
        if divisor.is_zero:
            logger.error("Division of a polynomial by zero")
            raise ZeroDenominatorError("Division of a polynomial by zero")
        try:
            return MPoly.wrap(self._context, self._element.exquo(divisor._element))
        except ExactQuotientFailed:
            return None

    # Coefficients and evaluation

    def coeff_extract(self, monomial: Union[Mapping[str, int], Sequence[int]]) -> "MPoly":
        """
        Coefficient of a coordinate monomial, as a polynomial in the parameter variables only
        :param monomial: name->power mapping or exponent tuple over the coordinate variables
        :return:
        """
        ny = len(self._context.y_names)
        target = self._context.y_monomial(monomial)
        parameters = self._context.parameter_context()
        terms = {exps[ny:]: coeff for exps, coeff in self._element.items() if exps[:ny] == target}
        return MPoly.wrap(parameters, parameters.poly_ring.from_dict(terms))

    def substitute(self, assignment: Mapping[str, Union[Scalar, float]]) -> Union[Fraction, float]:
        """
        Evaluate at an assignment of every variable that occurs.
        Exact when every assigned value is rational.
        :param assignment:
        :return:
        """
        names = self._context.names
        total: Union[Fraction, float] = Fraction(0)
        for exps, coeff in self._element.items():
            term: Union[Fraction, float] = from_qq(coeff)
            for name, exp in zip(names, exps):
                if exp == 0:
                    continue
                if name not in assignment:
                    logger.error(f"No value given for variable '{name}'")
                    raise VariableContextError(f"No value given for variable '{name}'")
                value = assignment[name]
                if isinstance(value, (str, bool)):
                    logger.error(f"Value {value!r} for '{name}' is not a number")
                    raise ValueError(f"Value {value!r} for '{name}' is not a number")
                term = term * value ** exp
            total = total + term
        return total

    def compose(self, mapping: Mapping[str, Union["RatFunc", "MPoly", Scalar]],
                target: VariableContext) -> "RatFunc":
        """
        Substitute variables by rational functions over another context.
        Variables missing from the mapping must exist, under the same name, in the target context.
        :param mapping:
        :param target:
        :return:
        """
        target_field = target.fraction_field
        images = [as_ratfunc(mapping[name], target).element if name in mapping
                  else target_field.gens[target.index(name)]
                  for name in self._context.names]

        result = target_field.zero
        for exps, coeff in self._element.items():
            term = target_field.ground_new(coeff)
            for image, exp in zip(images, exps):
                if exp:
                    term = term * image ** exp
            result = result + term
        return RatFunc.wrap(target, result)

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"MPoly({self})"


def _format_monomial(names: Sequence[str], exps: Monomial) -> str:
    factors = []
    for name, exp in zip(names, exps):
        if exp == 1:
            factors.append(name)
        elif exp > 1:
            factors.append(f"{name}^{exp}")
    return "*".join(factors)


def format_polynomial(poly: MPoly) -> str:
    """
    Render with monomials sorted under the fixed monomial order, e.g. "c1*c2 - 1/2*c2^2 + 3"
    :param poly:
    :return:
    """
    if poly.is_zero:
        return "0"

    pieces = []
    for index, (exps, coeff) in enumerate(poly.sorted_terms()):
        monomial = _format_monomial(poly.context.names, exps)
        magnitude = abs(coeff)
        if not monomial:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{format_rational(magnitude)}*{monomial}"

        if index == 0:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(pieces)


class RatFunc:
    """
    Quotient of two polynomials over the same context. The sympy field element is fully cancelled;
    num and den are presented with a monic denominator.
    """
    __slots__ = ("_context", "_element")

    def __init__(self, num: MPoly, den: Optional[MPoly] = None):
        if den is None:
            den = num.context.one()
        if num.context != den.context:
            logger.error(f"Numerator and denominator live in different contexts")
            raise VariableContextError("Numerator and denominator live in different contexts")
        if den.is_zero:
            logger.error(f"Rational function {num} / 0 has a zero denominator")
            raise ZeroDenominatorError(f"Rational function {num} / 0 has a zero denominator")
        self._context = num.context
        self._element = num.context.fraction_field.new(num.element, den.element)

    @classmethod
    def wrap(cls, context: VariableContext, element: FracElement) -> "RatFunc":
        ratio = cls.__new__(cls)
        ratio._context = context
        ratio._element = element
        return ratio

    def _monic(self) -> Tuple[PolyElement, PolyElement]:
        lead = self._element.denom.LC
        if lead == QQ.one:
            return self._element.numer, self._element.denom
        inverse = QQ.one / lead
        return self._element.numer.mul_ground(inverse), self._element.denom.mul_ground(inverse)

    @property
    def num(self) -> MPoly:
        return MPoly.wrap(self._context, self._monic()[0])

    @property
    def den(self) -> MPoly:
        return MPoly.wrap(self._context, self._monic()[1])

    @property
    def context(self) -> VariableContext:
        return self._context

    @property
    def element(self) -> FracElement:
        return self._element

    @property
    def is_zero(self) -> bool:
        return not self._element

    @property
    def is_polynomial(self) -> bool:
        return self._element.denom.is_ground

    def constant_value(self) -> Fraction:
        if not (self.is_polynomial and self._element.numer.is_ground):
            logger.error(f"Rational function {self} is not constant")
            raise ValueError(f"Rational function {self} is not constant")
        return self.num.constant_value()

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.context != self.context:
                logger.error(f"Cannot combine rational functions over {self.context.names} "
                             f"and {other.context.names}")
                raise VariableContextError("Cannot combine rational functions over different contexts")
            return other
        if isinstance(other, MPoly):
            if other.context != self.context:
                logger.error("Cannot combine a rational function and a polynomial over different contexts")
                raise VariableContextError("Cannot combine a rational function and a polynomial "
                                           "over different contexts")
            return RatFunc(other)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return RatFunc.wrap(self._context, self._context.fraction_field.ground_new(to_qq(other)))
        return NotImplemented

    def __add__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RatFunc.wrap(self._context, self._element + other._element)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc.wrap(self._context, -self._element)

    def __sub__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RatFunc.wrap(self._context, self._element - other._element)

    def __rsub__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RatFunc.wrap(self._context, self._element * other._element)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            logger.error(f"Division of {self} by zero")
            raise ZeroDenominatorError(f"Division of {self} by zero")
        return RatFunc.wrap(self._context, self._element / other._element)

    def __rtruediv__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, MPoly)) and not isinstance(other, bool):
            other = self._coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if other.context != self.context:
            return False
        return self._element == other._element

    def __hash__(self):
        return hash((self._context, self._element))

    def substitute(self, assignment: Mapping[str, Union[Scalar, float]]) -> Union[Fraction, float]:
        """
        Evaluate; raises ZeroDenominatorError when the denominator vanishes at the assignment
        :param assignment:
        :return:
        """
        num, den = self.num, self.den
        den_value = den.substitute(assignment)
        if den_value == 0:
            logger.error(f"Denominator {den} vanishes at {dict(assignment)}")
            raise ZeroDenominatorError(f"Denominator {den} vanishes at {dict(assignment)}")
        return num.substitute(assignment) / den_value

    def compose(self, mapping: Mapping[str, Union["RatFunc", MPoly, Scalar]], target: VariableContext) -> "RatFunc":
        num, den = self.num, self.den
        return num.compose(mapping, target) / den.compose(mapping, target)

    def __str__(self) -> str:
        num, den = self.num, self.den
        if den.is_constant:
            return str(num)
        num_text, den_text = str(num), str(den)
        if len(num.terms) > 1:
            num_text = f"({num_text})"
        if len(den.terms) > 1:
            den_text = f"({den_text})"
        return f"{num_text}/{den_text}"

    def __repr__(self) -> str:
        return f"RatFunc({self})"


def as_ratfunc(value: Union[RatFunc, MPoly, Scalar], context: VariableContext) -> RatFunc:
    """
    Lift a scalar or polynomial into a rational function over the context
    :param value:
    :param context:
    :return:
    """
    if isinstance(value, RatFunc):
        if value.context != context:
            logger.error(f"Rational function over {value.context.names} used in context {context.names}")
            raise VariableContextError("Rational function used in a foreign context")
        return value
    if isinstance(value, MPoly):
        if value.context != context:
            logger.error(f"Polynomial over {value.context.names} used in context {context.names}")
            raise VariableContextError("Polynomial used in a foreign context")
        return RatFunc(value)
    return RatFunc(MPoly.constant(context, parse_rational(value)))


def poly_arith(a: MPoly, b: MPoly, op: str) -> MPoly:
    """
    Ring operation by name
    :param a:
    :param b:
    :param op: one of add, sub, mul
    :return:
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    logger.error(f"Unknown polynomial operation '{op}'")
    raise ValueError(f"Unknown polynomial operation '{op}'")


def ratfunc_arith(a: RatFunc, b: RatFunc, op: str) -> RatFunc:
    """
    Field operation by name
    :param a:
    :param b:
    :param op: one of add, sub, mul, div
    :return:
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    logger.error(f"Unknown rational function operation '{op}'")
    raise ValueError(f"Unknown rational function operation '{op}'")


def substitute(expr: Union[MPoly, RatFunc], assignment: Mapping[str, Union[Scalar, float]]) -> Union[Fraction, float]:
    return expr.substitute(assignment)


@dataclass(frozen=True)
class LinearSolution:
    """
    Classified solution of A x = b over a rational function field.
    For parametrized systems the general solution is particular + span(nullspace).
    An inconsistent system names the first equation at which it stops being solvable.
    """
    kind: SolutionKind
    particular: Optional[Tuple[RatFunc, ...]]
    nullspace: Tuple[Tuple[RatFunc, ...], ...] = ()
    inconsistent_rows: Tuple[int, ...] = ()
    pivot_columns: Tuple[int, ...] = ()

    @property
    def is_consistent(self) -> bool:
        return self.kind is not SolutionKind.INCONSISTENT


def _first_inconsistent_row(augmented: DomainMatrix, nrows: int, ncols: int) -> int:
    """
    Smallest r such that equations 0..r have no common solution
    """
    for row in range(nrows):
        rows = list(range(row + 1))
        if augmented.extract(rows, list(range(ncols + 1))).rank() > augmented.extract(rows, list(range(ncols))).rank():
            return row
    logger.error("Augmented rank exceeds coefficient rank but no prefix of the equations is inconsistent")
    raise SolverSelfCheckError("Augmented rank exceeds coefficient rank but no prefix of the equations is "
                               "inconsistent")


def linear_solve_ratfunc(a: Sequence[Sequence[Union[RatFunc, MPoly, Scalar]]],
                         b: Sequence[Union[RatFunc, MPoly, Scalar]],
                         context: Optional[VariableContext] = None,
                         ncols: Optional[int] = None) -> LinearSolution:
    """
    Solve A x = b over the field of rational functions of the context variables.
    The augmented matrix is cleared of denominators row by row and brought to reduced row echelon form by
    fraction-free Gauss-Jordan elimination in the polynomial ring (DomainMatrix.rref, method CD). The result
    is checked by exact back substitution.
    :param a: m x n matrix
    :param b: length-m right hand side
    :param context: needed when no entry carries one (all scalars)
    :param ncols: needed when a has no rows
    :return:
    """
    nrows = len(a)
    if len(b) != nrows:
        logger.error(f"Matrix has {nrows} rows but right hand side has {len(b)} entries")
        raise DimensionMismatchError(f"Matrix has {nrows} rows but right hand side has {len(b)} entries")

    if ncols is None:
        if nrows == 0:
            logger.error("Column count is required for a system without rows")
            raise DimensionMismatchError("Column count is required for a system without rows")
        ncols = len(a[0])

    if context is None:
        for entry in [item for row in a for item in row] + list(b):
            if isinstance(entry, (RatFunc, MPoly)):
                context = entry.context
                break
        else:
            context = VariableContext()

    for row in a:
        if len(row) != ncols:
            logger.error(f"Ragged matrix row of length {len(row)}, expected {ncols}")
            raise DimensionMismatchError(f"Ragged matrix row of length {len(row)}, expected {ncols}")

    domain = context.fraction_field.to_domain()
    zero, one = domain.zero, domain.one

    def wrap(element) -> RatFunc:
        return RatFunc.wrap(context, element)

    if nrows == 0:
        nullspace = tuple(tuple(wrap(one if column == free else zero) for column in range(ncols))
                          for free in range(ncols))
        kind = SolutionKind.PARAMETRIZED if ncols else SolutionKind.UNIQUE
        return LinearSolution(kind=kind, particular=tuple(wrap(zero) for _ in range(ncols)), nullspace=nullspace)

    augmented = DomainMatrix([[as_ratfunc(entry, context).element for entry in row] +
                              [as_ratfunc(b[index], context).element]
                              for index, row in enumerate(a)], (nrows, ncols + 1), domain)
    reduced, pivots = augmented.rref(method="CD")
    pivot_columns = tuple(column for column in pivots if column < ncols)

    if ncols in pivots:
        witness = _first_inconsistent_row(augmented, nrows, ncols)
        logger.debug(f"Inconsistent system, witnessed by equation {witness}")
        return LinearSolution(kind=SolutionKind.INCONSISTENT, particular=None, inconsistent_rows=(witness,),
                              pivot_columns=pivot_columns)

    entries = reduced.to_list()
    free_columns = [column for column in range(ncols) if column not in pivot_columns]

    particular = [zero] * ncols
    for r, column in enumerate(pivot_columns):
        particular[column] = entries[r][ncols]

    nullspace = []
    for free in free_columns:
        vector = [zero] * ncols
        vector[free] = one
        for r, column in enumerate(pivot_columns):
            vector[column] = -entries[r][free]
        nullspace.append(vector)

    # Self check, identically in the parameters
    coefficients = augmented.extract(list(range(nrows)), list(range(ncols)))
    rhs = augmented.extract(list(range(nrows)), [ncols])
    if coefficients.matmul(DomainMatrix([[entry] for entry in particular], (ncols, 1), domain)) != rhs:
        logger.error("Back substitution of the particular solution failed")
        raise SolverSelfCheckError("Back substitution of the particular solution failed")
    if nullspace:
        directions = DomainMatrix([[vector[column] for vector in nullspace] for column in range(ncols)],
                                  (ncols, len(nullspace)), domain)
        if not coefficients.matmul(directions).is_zero_matrix:
            logger.error("A nullspace vector fails the homogeneous system")
            raise SolverSelfCheckError("A nullspace vector fails the homogeneous system")

    kind = SolutionKind.UNIQUE if not free_columns else SolutionKind.PARAMETRIZED
    return LinearSolution(kind=kind, particular=tuple(map(wrap, particular)),
                          nullspace=tuple(tuple(map(wrap, vector)) for vector in nullspace),
                          pivot_columns=pivot_columns)


def _qq_matrix(matrix: Sequence[Sequence[Scalar]]) -> DomainMatrix:
    size = len(matrix)
    rows = [[to_qq(entry) for entry in row] for row in matrix]
    if any(len(row) != size for row in rows):
        logger.error("Only square matrices are supported here")
        raise DimensionMismatchError("Only square matrices are supported here")
    return DomainMatrix(rows, (size, size), QQ)


def exact_determinant(matrix: Sequence[Sequence[Scalar]]) -> Fraction:
    """
    Determinant over the rationals
    :param matrix:
    :return:
    """
    if not matrix:
        return Fraction(1)
    return from_qq(_qq_matrix(matrix).det())


def exact_inverse(matrix: Sequence[Sequence[Scalar]]) -> List[List[Fraction]]:
    """
    Inverse over the rationals
    :param matrix:
    :return:
    """
    if not matrix:
        return []
    try:
        inverse = _qq_matrix(matrix).inv()
    except (DMNonInvertibleMatrixError, ZeroDivisionError):
        logger.error("Matrix is singular")
        raise ZeroDenominatorError("Matrix is singular")
    return [[from_qq(entry) for entry in row] for row in inverse.to_list()]


def exact_matmul(left: Sequence[Sequence[Scalar]], right: Sequence[Sequence[Scalar]]) -> List[List[Fraction]]:
    inner = len(right)
    return [[sum((Fraction(left[i][k]) * right[k][j] for k in range(inner)), Fraction(0))
             for j in range(len(right[0]))]
            for i in range(len(left))]


def exact_matvec(matrix: Sequence[Sequence[Scalar]], vector: Sequence[Scalar]) -> List[Fraction]:
    return [sum((Fraction(entry) * component for entry, component in zip(row, vector)), Fraction(0))
            for row in matrix]


def leading_minors_positive(matrix: Sequence[Sequence[Scalar]]) -> bool:
    """
    Sylvester's criterion, exactly
    :param matrix:
    :return:
    """
    size = len(matrix)
    return all(exact_determinant([row[:k] for row in matrix[:k]]) > 0 for k in range(1, size + 1))
