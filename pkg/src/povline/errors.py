"""Exception hierarchy.

Validation and domain problems subclass ``ValueError``; numerical
degeneracies (empty poor set, non-positive variance, singular covariance,
quadrature failure) subclass ``ArithmeticError`` so the CLI can map them
to distinct exit codes.
"""


class PovlineError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(PovlineError, ValueError):
    """Bad input data (non-finite, non-positive or missing incomes)."""


class DomainError(PovlineError, ValueError):
    """Argument outside the domain of a weighting/deprivation function."""


class DegenerateError(PovlineError, ArithmeticError):
    """A statistic cannot be formed (zero spread, zero variance, q = 0)."""


class SingularCovarianceError(DegenerateError):
    """Pooled covariance matrix is not numerically positive definite."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class QuadratureError(DegenerateError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval
