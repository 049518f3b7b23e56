"""
dpgauss - Differentially private, outlier-robust Gaussian estimation
Pure-DP preconditioned estimators, approximate-DP witness pipelines and
empirical privacy audits.
"""

__version__ = "1.0.0"
__app_name__ = "dpgauss"
__author__ = "dpgauss contributors"
