"""Custom exception hierarchy for estimation and privacy errors"""


class AppException(Exception):
    """Base exception for library errors"""

    def __init__(self, message: str, code: str = None, details: dict = None):
        super().__init__(message)
        self.message = message
        self.code = code or "UNKNOWN_ERROR"
        self.details = details or {}


class ValidationError(AppException):
    """Raised when a parameter or precondition check fails"""

    def __init__(self, message: str, field: str = None, errors: list[str] = None):
        details = {"field": field}
        if errors:
            details["errors"] = list(errors)
        super().__init__(message, "VALIDATION_ERROR", details)
        self.field = field
        self.errors = list(errors or [])


class ConfigurationError(AppException):
    """Raised when configuration is invalid"""

    def __init__(self, message: str, config_key: str = None):
        super().__init__(message, "CONFIG_ERROR", {"config_key": config_key})


class NumericalError(AppException):
    """Raised when a matrix is singular or a factorization fails"""

    def __init__(self, message: str, eigenvalue: float = None):
        super().__init__(message, "NUMERICAL_ERROR", {"eigenvalue": eigenvalue})
        self.eigenvalue = eigenvalue


class InfeasibleProgramError(AppException):
    """Raised when a stability query hits an infeasible witness program"""

    def __init__(self, message: str, endpoint: str = None):
        super().__init__(message, "INFEASIBLE_PROGRAM", {"endpoint": endpoint})
        self.endpoint = endpoint


class NonConvergenceError(AppException):
    """Raised when the witness solver exhausts its iteration budget"""

    def __init__(self, message: str, iterations: int = None):
        super().__init__(message, "NON_CONVERGENCE", {"iterations": iterations})
        self.iterations = iterations


class CapacityError(AppException):
    """Raised when an eigenproblem exceeds the configured size cap"""

    def __init__(self, message: str, limit: int = None):
        super().__init__(message, "CAPACITY_ERROR", {"limit": limit})
        self.limit = limit


class UnsupportedOrderError(AppException):
    """Raised when a certificate order other than the implemented one is requested"""

    def __init__(self, message: str, order: int = None):
        super().__init__(message, "UNSUPPORTED_ORDER", {"order": order})
        self.order = order


class DataFormatError(ValidationError):
    """Raised when a dataset file is malformed"""

    def __init__(self, message: str, line: int = None):
        AppException.__init__(self, message, "DATA_FORMAT_ERROR", {"line": line})
        self.field = "data"
        self.errors = []
        self.line = line
