#!/usr/bin/env python

"""
Globals
"""
from pathlib import Path

#######################
# SCHEMA GLOBALS
#######################

SCHEMA_VERSION = 1

CATALOG_DIR = Path(__file__).parent.parent.absolute() / Path("references")

CATALOG_DIR_ENV_VAR = "GEOGRAPH_CATALOG_DIR"

WORKERS_ENV_VAR = "GEOGRAPH_WORKERS"

DEFAULT_WORKERS = 1

#######################
# SAMPLING GLOBALS
#######################

DEFAULT_SEED = 0

DEFAULT_SAMPLES = 200

FUNDAMENTAL_TENSOR_SAMPLES = 100

# Each Latifi sample costs three finite-difference tensors
LATIFI_SAMPLES = 50

DENOMINATOR_SAMPLES = 1000

# Rejection sampling on a cube of rationals with this denominator
SAMPLE_CUBE_DENOMINATOR = 2 ** 20

HOMOGENEITY_FACTORS = (0.5, 2.0, 10.0)

EQUIVARIANCE_TIME_RANGE = (-2.0, 2.0)

#########################
# TOLERANCE GLOBALS
#########################

GEODESIC_RESIDUAL_TOL = 1e-9

POINTWISE_RESIDUAL_TOL = 1e-9

LINEARITY_TOL = 1e-8

EQUIVARIANCE_TOL = 1e-8

HOMOGENEITY_TOL = 1e-10

COMPARE_GRAPHS_TOL = 1e-12

# Companion graphs solved pointwise agree less tightly
POINTWISE_COMPARE_TOL = 1e-10

FUNDAMENTAL_TENSOR_TOL = 1e-5

LATIFI_TOL = 1e-4

PSD_EIGENVALUE_FLOOR = -1e-8

# Relative size under which a sampled denominator counts as vanishing
DENOMINATOR_FLOOR = 1e-12

# Pivot threshold handed to the least squares rank decision
LSTSQ_RCOND = 1e-12

# Rationalising a numeric linear fit
FIT_MAX_DENOMINATOR = 10 ** 6

#########################
# FINITE DIFFERENCE GLOBALS
#########################

# Relative to |y|
FD_HESSIAN_STEP = 1e-5

FD_CARTAN_STEP = 3.16e-3

COMPLEX_STEP = 1e-30

#########################
# MATRIX EXPONENTIAL GLOBALS
#########################

EXPM_TAYLOR_DEGREE = 13

EXPM_NORM_BOUND = 0.5
