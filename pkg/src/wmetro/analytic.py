"""Closed-form overlaps and post-selection probabilities.

All functions assume the parallel case: pre- and post-selected qubit states
both equal ``(|-> + |+>)/sqrt(2)``. For other Bloch angles use the Fock-basis
routines in :mod:`wmetro.states`; no closed form is offered for them.

Functions are written with numpy ufuncs, so ``N`` and ``g`` may be arrays.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class Regime(str, enum.Enum):
    EXACT = "exact"
    LEADING_ORDER = "leading_order"


@dataclass(frozen=True)
class OverlapResult:
    value: complex | float
    regime: Regime


def coherent_self_overlap(N, g):
    """``<alpha|alpha e^{ig}> = exp(N (e^{ig} - 1))`` with ``N = |alpha|^2``."""
    return np.exp(N * (np.exp(1j * np.asarray(g, dtype=float)) - 1.0))


def overlap_exact(N, g):
    """Overlap of the initial product state with the cat state.

    ``Re exp(N(e^{ig} - 1)) = e^{N(cos g - 1)} cos(N sin g)``.
    """
    g = np.asarray(g, dtype=float)
    return np.exp(N * (np.cos(g) - 1.0)) * np.cos(N * np.sin(g))


def overlap_leading(N, g):
    """Small-``g`` expansion ``e^{-N g^2 / 2} cos(g N)``."""
    g = np.asarray(g, dtype=float)
    return np.exp(-N * g**2 / 2.0) * np.cos(g * N)


def overlap(N, g, regime: Regime | str = Regime.EXACT) -> OverlapResult:
    regime = Regime(regime)
    fn = overlap_exact if regime is Regime.EXACT else overlap_leading
    return OverlapResult(fn(N, g), regime)


def postselect_contrast(N, g):
    """``e^{N(cos 2g - 1)} cos(N sin 2g)``, so that ``p_+- = (1 +- contrast)/2``."""
    g = np.asarray(g, dtype=float)
    return np.exp(N * (np.cos(2 * g) - 1.0)) * np.cos(N * np.sin(2 * g))


def postselect_contrast_dg(N, g):
    """Analytic derivative of :func:`postselect_contrast` with respect to ``g``."""
    g = np.asarray(g, dtype=float)
    s2, c2 = np.sin(2 * g), np.cos(2 * g)
    env = np.exp(N * (c2 - 1.0))
    return -2.0 * N * env * (s2 * np.cos(N * s2) + c2 * np.sin(N * s2))


def postselect_probs(N, g):
    """Probabilities ``(p_+, p_-)`` of finding the qubit back in / orthogonal to its initial state."""
    c = postselect_contrast(N, g)
    p_minus = 0.5 - 0.5 * c
    return 1.0 - p_minus, p_minus


def postselect_prob_smallg(N, g):
    """``cos^2(g N)``."""
    return np.cos(np.asarray(g, dtype=float) * N) ** 2


def first_overlap_zero(N: float) -> float:
    """First positive root of :func:`overlap_exact`, ``arcsin(pi / 2N)`` for ``N >= pi/2``."""
    if N < np.pi / 2:
        raise ValueError("overlap has no zero for N < pi/2")
    return float(np.arcsin(np.pi / (2 * N)))
