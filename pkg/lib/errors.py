"""
Exception hierarchy with CLI exit codes
"""
from typing import Dict, Any, Optional


class QdivError(Exception):
    """Base class for every error raised by the toolkit"""
    exit_code = 1

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form written to stderr by the CLI"""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": {k: v for k, v in self.details.items() if v is not None},
        }


class ValidationError(QdivError):
    """Bad input: malformed matrices, violated preconditions, bad arguments"""
    exit_code = 2


class NumericalError(QdivError):
    """The numerics failed on valid input"""
    exit_code = 3


class PropertySuiteFailure(QdivError):
    exit_code = 4


# Validation errors

class ConfigError(ValidationError):
    pass


class BadArgument(ValidationError):
    pass


class NonSquare(ValidationError):
    pass


class NotHermitian(ValidationError):
    def __init__(self, message: str, row: Optional[int] = None,
                 col: Optional[int] = None, deviation: Optional[float] = None):
        super().__init__(message, row=row, col=col, deviation=deviation)


class NotPSD(ValidationError):
    def __init__(self, message: str, min_eig: Optional[float] = None):
        super().__init__(message, min_eig=min_eig)


class TraceMismatch(ValidationError):
    def __init__(self, message: str, trace: Optional[float] = None):
        super().__init__(message, trace=trace)


class NotPositiveDefinite(ValidationError):
    pass


class SupportViolation(ValidationError):
    """rho is not supported inside sigma where the formula requires it"""
    pass


class MissingSecondDerivative(ValidationError):
    pass


class BadThreshold(ValidationError):
    pass


class NonPositiveDenominator(ValidationError):
    pass


class BadDimensions(ValidationError):
    pass


class DimensionCapExceeded(ValidationError):
    pass


class DomainViolation(ValidationError):
    """A dual witness left the effective domain of the convex conjugate"""

    def __init__(self, message: str, gamma: Optional[float] = None,
                 value: Optional[float] = None):
        super().__init__(message, gamma=gamma, value=value)
        self.gamma = gamma
        self.value = value


class ParseError(ValidationError):
    def __init__(self, message: str, path: Optional[str] = None,
                 locus: Optional[str] = None):
        super().__init__(message, path=path, locus=locus)


# Numerical errors

class EigSolverFailure(NumericalError):
    pass


class QuadratureFailure(NumericalError):
    pass


class NonFiniteIntegrand(NumericalError):
    def __init__(self, message: str, at: Optional[float] = None):
        super().__init__(message, at=at)


class NonPositiveQ(NumericalError):
    pass


class NotMonotone(NumericalError):
    pass


# Non-fatal numerical conditions, emitted through warnings.warn

class ToleranceNotMet(NumericalError, RuntimeWarning):
    """Adaptive refinement stopped above the requested tolerance"""


class SlowDecayWarning(NumericalError, RuntimeWarning):
    """Tail of a semi-infinite integral decays too slowly to converge"""
