"""Core layer - numeric foundations, domain models, configuration and errors"""

from .linalg import mahalanobis, perturb_at_distance, random_psd, rel_frobenius
from .metrics import parameter_errors, tv_bounds
from .models import (REJECT, Adversary, CorruptionSpec, Dataset,
                     EstimationReport, GaussianParams, PsdMatrix, Rejected)
from .sampling import (corrupt, empirical_covariance, make_rng,
                       moment_matched_sample, pair_difference, sample_gaussian,
                       split_rng)

__all__ = [
    "PsdMatrix",
    "Dataset",
    "GaussianParams",
    "CorruptionSpec",
    "Adversary",
    "EstimationReport",
    "Rejected",
    "REJECT",
    "make_rng",
    "split_rng",
    "sample_gaussian",
    "empirical_covariance",
    "corrupt",
    "pair_difference",
    "moment_matched_sample",
    "rel_frobenius",
    "mahalanobis",
    "random_psd",
    "perturb_at_distance",
    "tv_bounds",
    "parameter_errors",
]
