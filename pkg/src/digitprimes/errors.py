"""Exception types raised across the package."""


class DigitPrimesError(Exception):
    """Base class for all package errors."""


class ResourceError(DigitPrimesError):
    """A requested size exceeds a supported computational bound."""


class ConstraintViolation(DigitPrimesError, ValueError):
    """A digit constraint is invalid for the base / length it is used with."""


class HypothesisError(DigitPrimesError, ValueError):
    """Inputs violate the hypothesis of the inequality being checked."""


class ComputationError(DigitPrimesError, ArithmeticError):
    """An internal numerical fault (NaN/inf where a finite value is required)."""


class UnsupportedEstimatorError(DigitPrimesError):
    """No asymptotic estimator is available for the requested constraint."""
