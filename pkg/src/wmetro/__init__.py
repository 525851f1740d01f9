"""Weak-measurement Heisenberg-scaling metrology: states, closed forms, Fisher information and Monte Carlo estimation."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    ConfigurationError,
    DegenerateProjection,
    DeterministicOutcome,
    DimensionMismatch,
    NotAState,
    NumericalError,
    SensitivityVanishing,
    StepTooLarge,
    TruncationInsufficient,
    WMetroError,
)
