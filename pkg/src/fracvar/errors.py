"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class FracVarError(Exception):
    """Base class for every error raised by :mod:`fracvar`."""


class PoleError(FracVarError, ValueError):
    """Argument sits on a pole of Γ or ψ (a non-positive integer)."""


class DomainError(FracVarError, ValueError):
    """Argument outside the domain of a formula."""


class GridTooCoarse(FracVarError, ValueError):
    pass


class SingularEndpointError(FracVarError, ValueError):
    """A flagged non-finite endpoint cannot be handled by the requested rule."""


class OrderOutOfRange(FracVarError, ValueError):
    pass


class NotRepresentable(FracVarError, ValueError):
    """The result of an exact power-law operation is not a pure power."""


class BoundaryViolation(FracVarError, ValueError):
    pass


class NonIntegrableError(FracVarError, ArithmeticError):
    """An endpoint singularity is too strong to be integrated."""


class StationarityViolation(FracVarError, ArithmeticError):
    pass


class NoConvergence(FracVarError, ArithmeticError):
    pass


class NoBracket(FracVarError, ArithmeticError):
    """No sign change of a scalar condition could be located."""


class IterationLimit(FracVarError, RuntimeWarning):
    """Used as a warning category when a minimizer stops on its sweep cap."""


class ValidityRegionError(FracVarError, ValueError):
    pass


class UsageError(FracVarError, ValueError):
    """Invalid command-line usage (exit code 2)."""
