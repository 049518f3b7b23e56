"""
Core interfaces for pluggable estimation components.
Defines abstract base classes the pipelines depend on.
"""

from abc import ABC, abstractmethod

import numpy as np

from .models import Dataset


class PureMeanOracle(ABC):
    """
    Interface for ε-DP mean estimation of bounded-covariance data.

    Contract: for distributions with ‖E X‖₂ ≤ R and Cov ⪯ I, the output is
    within α of the mean with probability ≥ 1 − β given enough samples;
    under η-corruption the error degrades to α + O(√η). Each call is ε-DP
    in its own right (implementations that are not private say so through
    `is_private`).
    """

    name: str = "oracle"
    is_private: bool = True

    @abstractmethod
    def estimate(
        self,
        data: Dataset,
        radius: float,
        alpha: float,
        beta: float,
        epsilon: float,
        rng: np.random.Generator,
    ) -> np.ndarray:
        """Estimate the mean of data"""
        pass
