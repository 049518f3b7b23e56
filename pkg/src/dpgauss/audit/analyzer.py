"""
Base auditor class for empirical privacy checks.
"""

from abc import ABC, abstractmethod

import numpy as np

from .reporters import AuditReport


class PrivacyAuditor(ABC):
    """Base class for auditors that test a mechanism against its (ε, δ) claim."""

    mechanism: str = "mechanism"

    @abstractmethod
    def run(self, rng: np.random.Generator) -> AuditReport:
        """
        Perform the audit.

        Args:
            rng: Random stream for all trials

        Returns:
            AuditReport with observed statistics and a verdict
        """
        pass
