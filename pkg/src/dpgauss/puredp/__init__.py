"""Pure-DP package - preconditioned covariance, mean and Gaussian estimation"""

from .estimators import estimate_covariance, estimate_gaussian, estimate_mean
from .matrix_mean import matrix_mean, outer_product_samples
from .oracles import (ClipLaplaceMean, InjectedErrorOracle,
                      NonPrivateTrimmedMean, available_oracles, make_oracle)
from .preconditioning import (PreconditionerChain, recursive_precondition,
                              round_count, weak_precondition)

__all__ = [
    "NonPrivateTrimmedMean",
    "ClipLaplaceMean",
    "InjectedErrorOracle",
    "make_oracle",
    "available_oracles",
    "matrix_mean",
    "outer_product_samples",
    "PreconditionerChain",
    "weak_precondition",
    "recursive_precondition",
    "round_count",
    "estimate_covariance",
    "estimate_mean",
    "estimate_gaussian",
]
