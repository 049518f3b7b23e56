"""Centralized error handling with logging and exit-code mapping"""

import logging

from ..core.exceptions import AppException, ConfigurationError, ValidationError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VALIDATION = 2
EXIT_HALTED = 3
EXIT_AUDIT_VIOLATED = 4


class ErrorHandler:
    """Centralized error handling for the command-line front end"""

    def __init__(self, logger: logging.Logger):
        self.logger = logger

    def handle(self, error: Exception) -> int:
        """
        Log an error and translate it into a process exit code

        Args:
            error: The exception to handle

        Returns:
            Exit code for the process
        """

        if isinstance(error, AppException):
            self.logger.error(
                f"{error.code}: {error.message}", extra={"details": error.details}
            )
            for problem in error.details.get("errors", []):
                self.logger.error(f"  - {problem}")
            if isinstance(error, (ValidationError, ConfigurationError)):
                return EXIT_VALIDATION
            return EXIT_ERROR

        self.logger.exception("Unexpected error occurred")
        return EXIT_ERROR
