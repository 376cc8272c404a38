"""Exception hierarchy.

Each category carries the process exit code the command line front end uses
when it escapes a run.
"""


class WgqedError(Exception):
    exit_code = 1


class DomainError(WgqedError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""

    exit_code = 2


class ConfigurationError(WgqedError, ValueError):
    """Inconsistent or incomplete physical / numerical configuration."""

    exit_code = 2


class InvariantError(WgqedError, RuntimeError):
    """A computed result violates a physical invariant (e.g. norm)."""

    exit_code = 3


class NumericalError(WgqedError, ArithmeticError):
    exit_code = 4


class QuadratureError(NumericalError):
    """Quadrature refinement hit its limit without meeting the tolerance."""

    def __init__(self, message, *, estimate=None, error=None, panels=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
        self.panels = panels


class SingularSystemError(NumericalError):
    """Linear system for the qubit amplitudes is (numerically) singular."""
