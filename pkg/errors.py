"""
Exception types shared by all packages
"""


class NonFiniteInputError(ValueError):
    """Raised when a vector or scalar argument contains NaN or infinity"""


class UnsupportedProblemError(ValueError):
    """Raised when an operation is not defined for the problem's loss kind"""


class ProxConvergenceError(RuntimeError):
    """Raised when a scalar prox root-find exhausts its iteration budget"""


class ReferenceSolverError(RuntimeError):
    """Raised when the full-batch reference solver does not reach its tolerance"""


class ConfigurationError(ValueError):
    """Raised for invalid experiment configuration (exit code 2)"""
