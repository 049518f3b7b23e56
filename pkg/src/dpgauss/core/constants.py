"""
Shared constants for the estimation pipelines.
Centralized algorithm constants, numeric tolerances and approximate-DP defaults.
"""

import os

# === App Info ===
APP_NAME = "dpgauss"
REPORT_SCHEMA = "dpgauss.report/1"

# === Numeric Tolerances ===
PSD_TOL = 1e-9  # relative to trace/d
EIGEN_FLOOR = 1e-100
THRESHOLD_TOL = 1e-9

# === Weak Preconditioning ===
WEAK_ALPHA = 0.01
WEAK_ALPHA_ROBUST = 0.0099
WEAK_SHRINK = 0.9
WEAK_RESCALE = 1.09
WEAK_MIN_KAPPA = 20.0

# === Recursive Preconditioning ===
RECURSION_TARGET_KAPPA = 20.0
RECURSION_DECAY = 0.99
ROUND_FAILURE_SCALE = 1000  # beta = 1 / (1000 L)

# === Pure-DP Estimation ===
COVARIANCE_ERROR_DIVISOR = 20.0
MEAN_SCALE = 20.0  # oracle runs on A X / sqrt(20)
CLIP_MARGIN = 10.0  # clip radius R + 10 sqrt(d)
ROBUST_SQRT_ETA_FACTOR = 5.0
GAUSSIAN_FAILURE_PROBABILITY = 0.2
TRIM_FRACTION = 0.05

# === Approximate-DP Defaults ===
C_L = float(os.getenv("DPGAUSS_C_L", "4"))
C_DELTA = float(os.getenv("DPGAUSS_C_DELTA", "1"))
C_MU = float(os.getenv("DPGAUSS_C_MU", "1"))
C_SIGMA = float(os.getenv("DPGAUSS_C_SIGMA", "1"))
SCORE_CAP_FACTOR = 20
SCORE_SENSITIVITY = 6.0
SELECTION_L1_FACTOR = 120
SUBGAUSSIAN_ORDER = 2
SOLVER_ITERATION_FACTOR = 500
SOLVER_TOL = float(os.getenv("DPGAUSS_SOLVER_TOL", "1e-6"))
SOLVER_SLACK = 0.5
EIGEN_CAP = int(os.getenv("DPGAUSS_EIGEN_CAP", "40"))
DEFAULT_MEAN_C = 10.0
DEFAULT_COV_C = 20.0
DEFAULT_BETA = 0.1

# === Audit ===
AUDIT_CONFIDENCE = 0.99
AUDIT_MIN_TRIALS = 1000
AUDIT_MIN_PAIRS = 10
