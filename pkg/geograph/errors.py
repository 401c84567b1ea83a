#!/usr/bin/env python3

"""
List of rogue errors
"""


class GeographError(Exception):
    """
    Base of every error raised by geograph
    """
    pass


class ArgumentError(GeographError):
    """
    Incorrect Argument
    """
    pass


class DimensionMismatchError(GeographError):
    """
    Vector or matrix does not have the dimension of its space
    """
    pass


class VariableContextError(GeographError):
    """
    Polynomials from different variable contexts were combined
    """
    pass


class ZeroDenominatorError(GeographError):
    """
    A denominator is, or evaluates to, zero
    """
    pass


class BlockIndexError(GeographError):
    """
    Module block index out of range
    """
    pass


class ZeroVectorError(GeographError):
    """
    A norm quantity was requested at the zero vector
    """
    pass


class InvalidMetricError(GeographError):
    """
    Scalar product, parameters or norm violate their invariants
    """
    pass


class NonReductiveSplitError(GeographError):
    """
    A split of the Lie algebra is not reductive or not Ad(H)-invariant
    """
    pass


class DegenerateGraphError(GeographError):
    """
    Shifting a split along a linear graph did not give a complement of h
    """
    pass


class SolverSelfCheckError(GeographError):
    """
    Back substitution of a symbolic solution did not reproduce the system
    """
    pass


class Theorem1HypothesisError(GeographError):
    """
    Composed Finsler graph cannot be built from the symbolic linear graph
    """
    pass


class Prop13HypothesisError(GeographError):
    """
    One-form graph needs a naturally reductive split and central shifts that do not exist
    """
    pass


class RankDeficientSampleError(GeographError):
    """
    Sample set does not determine a linear fit
    """
    pass


class UnknownSpaceError(GeographError):
    """
    No catalog entry with this name
    """
    pass


class SpaceSpecError(GeographError):
    """
    Space file could not be turned into valid objects
    """
    pass


class SpaceSpecSyntaxError(SpaceSpecError):
    """
    Space file is not well formed
    """
    pass


class SpaceSpecSemanticError(SpaceSpecError):
    """
    Space file violates a structural invariant
    """
    pass
