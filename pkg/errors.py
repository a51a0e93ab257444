"""Exception and warning types raised by the kernel toolkit."""


class ToaError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(ToaError, ValueError):
    """Invalid configuration, potential file or command-line input."""


class NumericalError(ToaError):
    """Base class for numerical failures (CLI exit code 3)."""


class NonConvergence(NumericalError):
    """A series did not meet its stopping rule within the term cap."""


class DomainError(NumericalError, ValueError):
    """Arguments outside the region where a formula is implemented."""


class QuadratureFailure(NumericalError):
    """Adaptive quadrature hit its refinement cap."""


class MissingDependency(NumericalError):
    """A lower-order kernel grid needed by a recurrence is unavailable."""


class NonRealResult(NumericalError):
    """Imaginary units failed to cancel in a phase-space transform."""


class NonRealExpectation(NumericalError):
    """An expectation value of the time operator came out complex."""


class ClassicallyForbidden(NumericalError):
    """The classical path from q to the arrival point crosses V >= H."""


class DegenerateSignal(NumericalError):
    """A quantity used in a ratio test vanishes."""


class TruncationWarning(UserWarning):
    """Truncated series whose boundary terms are not negligible."""
