"""Quantum and classical Fisher information, with Cramér–Rao bounds.

Pure-state QFI is computed from a central-difference derivative of the state
vector, mixed-state QFI from the spectral form of the symmetric logarithmic
derivative. Both run at step ``h`` and ``h/2`` and refuse to answer if the two
disagree by more than 1%.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from . import analytic
from .errors import DeterministicOutcome, NotAState, NumericalError, StepTooLarge
from .states import EQUATOR, TruncatedFockVector, cat_state, default_dim, make_coherent, project_qubit

LAMBDA_FLOOR = 1e-12
RICHARDSON_RTOL = 0.01
NORM_TOL = 1e-10

StateFamily = Callable[[float], Any]


class Method(str, enum.Enum):
    PURE_FD = "pure_fd"
    SLD = "sld"
    CLASSICAL_BINARY = "classical_binary"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class FisherReport:
    fisher: float
    crb: float
    method: Method

    @classmethod
    def from_fisher(cls, fisher: float, method: Method) -> "FisherReport":
        fisher = float(fisher)
        if fisher < 0:
            raise ValueError("Fisher information must be non-negative")
        crb = 1.0 / math.sqrt(fisher) if fisher > 0 else math.inf
        return cls(fisher, crb, Method(method))


def default_step(N: float) -> float:
    """``1e-3 / max(1, N)``: phase gradients grow with ``N``, so the step shrinks."""
    return 1e-3 / max(1.0, N)


def _vector(state) -> np.ndarray:
    amps = getattr(state, "amps", state)
    return np.asarray(amps, dtype=complex).ravel()


def _richardson(estimate: Callable[[float], float], step: float) -> float:
    coarse = estimate(step)
    fine = estimate(step / 2)
    if abs(coarse - fine) > RICHARDSON_RTOL * abs(fine) + 1e-10:
        raise StepTooLarge(f"estimates at h={step:g} ({coarse:.6g}) and h/2 ({fine:.6g}) disagree")
    # central differences err at O(h^2)
    return (4.0 * fine - coarse) / 3.0


def _clamp(F: float, scale: float) -> float:
    if F < 0:
        if F < -1e-8 * max(1.0, scale):
            raise NumericalError(f"negative Fisher information {F:.3g}")
        return 0.0
    return F


def qfi_pure(family: StateFamily, g: float, step: float) -> FisherReport:
    """Pure-state QFI ``4<dPsi|dPsi> - 4|<dPsi|Psi>|^2`` at ``g``.

    ``family(g)`` must return a normalized state: a
    :class:`~wmetro.states.JointPureState`, a
    :class:`~wmetro.states.TruncatedFockVector`, or a bare amplitude array.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    psi = _vector(family(g))
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"family returned a state of norm {norm!r}")

    def estimate(h):
        dpsi = (_vector(family(g + h)) - _vector(family(g - h))) / (2 * h)
        return 4.0 * (np.vdot(dpsi, dpsi).real - abs(np.vdot(dpsi, psi)) ** 2)

    F = _richardson(estimate, step)
    return FisherReport.from_fisher(_clamp(F, abs(F)), Method.PURE_FD)


def check_density_matrix(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(getattr(rho, "matrix", rho), dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise NotAState(f"density matrix must be square, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=tol, rtol=0):
        raise NotAState("matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise NotAState(f"trace is {np.trace(rho).real!r}")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise NotAState("matrix has a negative eigenvalue")
    return rho


def sld_fisher(rho: np.ndarray, drho: np.ndarray, floor: float = LAMBDA_FLOOR) -> float:
    """``sum_{jk} 2 |<j|drho|k>|^2 / (l_j + l_k)`` over pairs with ``l_j + l_k > floor``."""
    lam, vecs = np.linalg.eigh(rho)
    d = vecs.conj().T @ drho @ vecs
    denom = lam[:, None] + lam[None, :]
    keep = denom > floor
    return float(np.sum(2.0 * np.abs(d[keep]) ** 2 / denom[keep]))


def qfi_mixed_sld(family: Callable[[float], Any], g: float, step: float) -> FisherReport:
    """Mixed-state QFI ``Tr(rho L^2)`` of a density-matrix family at ``g``."""
    if step <= 0:
        raise ValueError("step must be positive")
    rho = check_density_matrix(family(g))

    def estimate(h):
        drho = (check_density_matrix(family(g + h)) - check_density_matrix(family(g - h))) / (2 * h)
        return sld_fisher(rho, drho)

    F = _richardson(estimate, step)
    return FisherReport.from_fisher(_clamp(F, abs(F)), Method.SLD)


def qfi_gaussian_meter(N: float, sigma: float) -> FisherReport:
    """``N / (4 sigma^2)`` for ``N`` independent photons with Gaussian width ``sigma``."""
    if N < 1 or sigma <= 0:
        raise ValueError("need N >= 1 and sigma > 0")
    return FisherReport.from_fisher(N / (4.0 * sigma**2), Method.CLOSED_FORM)


def cfi_postselection(N: float, g: float, model: str = "exact") -> FisherReport:
    """Classical Fisher information of the binary post-selection outcome.

    ``(dp_+/dg)^2 / (p_+ p_-)``. ``model="exact"`` uses the full post-selection
    probability with its analytic derivative; ``model="smallg"`` uses
    ``p_+ = cos^2(gN)``.
    """
    if model == "exact":
        c = float(analytic.postselect_contrast(N, g))
        dp = 0.5 * float(analytic.postselect_contrast_dg(N, g))
        p_plus, p_minus = 0.5 + 0.5 * c, 0.5 - 0.5 * c
    elif model == "smallg":
        p_plus = float(analytic.postselect_prob_smallg(N, g))
        p_minus = math.sin(g * N) ** 2
        dp = -N * math.sin(2 * g * N)
    else:
        raise ValueError(f"unknown model {model!r}")
    if min(p_plus, p_minus) < 1e-12:
        raise DeterministicOutcome(f"p_+ = {p_plus:.3g} at N={N:g}, g={g:g}")
    return FisherReport.from_fisher(dp**2 / (p_plus * p_minus), Method.CLASSICAL_BINARY)


def coherent_family(N: float, dim: int | None = None) -> StateFamily:
    """``g -> |alpha e^{ig}>`` with ``alpha = sqrt(N)``."""
    dim = default_dim(N) if dim is None else dim
    base = make_coherent(math.sqrt(N), dim).amps
    n = np.arange(dim)
    return lambda g: TruncatedFockVector(base * np.exp(1j * g * n))


def cat_family(N: float, qubit=EQUATOR, dim: int | None = None) -> StateFamily:
    dim = default_dim(N) if dim is None else dim
    return lambda g: cat_state(qubit, math.sqrt(N), g, dim)


def meter_family(N: float, outcome: int = +1, dim: int | None = None) -> StateFamily:
    """Renormalized meter state left after post-selecting on the initial qubit (``+1``) or its complement (``-1``)."""
    dim = default_dim(N) if dim is None else dim
    target = EQUATOR if outcome > 0 else EQUATOR.orthogonal()
    return lambda g: project_qubit(cat_state(EQUATOR, math.sqrt(N), g, dim), target)[1]


def meter_state_qfi(N: float, g: float, outcome: int = +1, step: float | None = None) -> FisherReport:
    """QFI carried by the conditional meter state; grows only linearly with ``N``."""
    step = default_step(N) if step is None else step
    return qfi_pure(meter_family(N, outcome), g, step)
