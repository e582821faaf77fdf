"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`ParoscError`; the CLI maps the three families below onto exit codes.
"""


class ParoscError(Exception):
    """Base class for all package errors."""


class ValidationError(ParoscError, ValueError):
    """Invalid user input: scenario fields, parameters, constraints."""


class NumericalError(ParoscError, ArithmeticError):
    """A numerical procedure could not reach its accuracy target."""


class DomainError(NumericalError):
    """Input outside the domain where a routine is defined or trusted."""


class AccuracyError(NumericalError):
    """Convergence or drift check failed.

    ``estimate`` carries the achieved error measure when one is available.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ConstraintError(ValidationError):
    """Ermakov constraint ``ac >= w**2 / W0**2`` violated."""


class UnsupportedProfileError(ValidationError):
    """No closed form exists for the requested frequency profile."""


class DegeneratePairError(ValidationError):
    """Classical pair with vanishing Wronskian."""


class GridMismatchError(ValidationError):
    """States sampled on different grids were combined."""


class NormalizationError(ValidationError):
    """Coefficients or states that must be normalized are not."""


class ResolutionError(DomainError):
    """Grid too small or too coarse for the sampled state."""


class TruncationError(NumericalError):
    """Series truncated before its tail dropped below tolerance."""


class OverflowGuardError(DomainError):
    """Raw Hermite evaluation requested beyond the overflow guard."""
