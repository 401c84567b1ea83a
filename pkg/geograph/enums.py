#!/usr/bin/env python3

"""
Enumerate globals
"""
from enum import Enum


class Part(Enum):
    H = "h"
    M = "m"


class NormFamily(Enum):
    QPOWER = "qpower"
    WEIGHTED_SQUARES = "weighted_squares"
    RANDERS_LIKE = "randers_like"


class SolutionKind(Enum):
    UNIQUE = "unique"
    PARAMETRIZED = "parametrized"
    INCONSISTENT = "inconsistent"


class Provenance(Enum):
    LINEAR_FIXED = "linear_fixed"
    THEOREM1 = "theorem1"
    PROP13 = "prop13"
    POINTWISE = "pointwise"
    # Hand-made graphs used by the verification battery
    CUSTOM = "custom"


class Verdict(Enum):
    NATURALLY_REDUCTIVE = "naturally_reductive"
    GO_NOT_NATURALLY_REDUCTIVE = "go_not_naturally_reductive"
    NOT_GO_DETECTED = "not_go_detected"
    INCONCLUSIVE = "inconclusive"


class ViolationKind(Enum):
    STORAGE = "storage"
    ANTISYMMETRY = "antisymmetry"
    JACOBI = "jacobi"
    PARTITION = "partition"
    BASIS_CHANGE = "basis_change"
    REDUCTIVITY = "reductivity"
    MODULE_INVARIANCE = "module_invariance"


class Command(Enum):
    SOLVE = "solve"
    VERDICT = "verdict"
    VERIFY = "verify"
    CATALOG = "catalog"
    DESCRIBE = "describe"
