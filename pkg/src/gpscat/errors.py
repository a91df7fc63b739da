"""Exception types raised across the package."""


class GPSError(Exception):
    """Base class for all package errors."""


class NoSolution(GPSError, ValueError):
    """No beam-splitter reflectance satisfies the requested sigma_11."""


class ConditionViolated(GPSError, ValueError):
    """A closed form was called away from sigma_11 = 1."""


class DomainError(GPSError, ValueError):
    pass


class NonConverged(GPSError, ArithmeticError):
    """Quadrature self-check failed: doubling the node count moved the result."""


class ZeroProbability(GPSError, ArithmeticError):
    pass


class TruncationError(GPSError, ArithmeticError):
    """Fock-space truncation discarded more probability mass than allowed."""


class DegenerateState(GPSError, ValueError):
    pass


class NearConditionWarning(UserWarning):
    """sigma_11 is within 1e-6 of one but outside the closed-form tolerance."""
