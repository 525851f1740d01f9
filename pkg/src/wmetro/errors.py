"""Exception hierarchy.

Input problems derive from :class:`ValueError`; numerical breakdowns derive
from :class:`NumericalError`. The CLI maps the first group to exit status 2
and the second to exit status 1.
"""


class WMetroError(Exception):
    """Base class for all toolkit errors."""


class ConfigurationError(WMetroError, ValueError):
    """Invalid parameters for a model or run."""


class DimensionMismatch(WMetroError, ValueError):
    pass


class NotAState(WMetroError, ValueError):
    """Matrix fails the trace, Hermiticity or positivity checks."""


class NumericalError(WMetroError, ArithmeticError):
    """A computation cannot produce a trustworthy number."""


class TruncationInsufficient(NumericalError):
    """Fock cutoff too small: the coherent-state tail mass exceeds tolerance."""


class DegenerateProjection(NumericalError):
    """Post-selection probability below the floor; conditional state undefined."""


class StepTooLarge(NumericalError):
    """Finite-difference estimates at step h and h/2 disagree."""


class DeterministicOutcome(NumericalError):
    """Binary outcome with probability 0 or 1 carries no Fisher information."""


class SensitivityVanishing(NumericalError):
    """Linearized error propagation breaks down (dp/dg is too small)."""
