"""
Exception types raised by the simulation library.

The CLI maps each family to an exit code (see cli.py).
"""


class QExcitonError(Exception):
    """Base class for all library errors."""


class DomainError(QExcitonError, ValueError):
    """Argument outside the domain of a function (q <= 0, g >= omega_ex, ...)."""


class ConfigError(QExcitonError, ValueError):
    """Malformed or incomplete scenario configuration."""


class ZeroLinewidthError(QExcitonError, ValueError):
    """A branch has zero width; the spectrum would be a delta comb."""

    def __init__(self, branch: int):
        super().__init__(f"zero linewidth on branch {branch}; spectrum is a delta pair")
        self.branch = branch


class DegeneracyError(QExcitonError):
    """Coefficients are undefined at an exceptional or degenerate point."""


class NumericalError(QExcitonError):
    """A numerical routine failed its residual check."""


class TruncationError(NumericalError):
    """A truncated series did not reach the requested tolerance."""
