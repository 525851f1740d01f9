"""Gaussian phase noise on the rotated qubit.

Only the 2x2 qubit sector is modeled. In the Heisenberg regime the coherent
state is left effectively unentangled, so it is dropped, and the components
orthogonal to the initial meter state are neglected as well. Matrices use the
basis order ``(|+>, |->)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import NotAState
from .fisher import default_step, qfi_mixed_sld

PSI_I = np.array([1.0, 1.0]) / math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class QubitDensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise NotAState(f"expected a 2x2 matrix, got {m.shape}")
        if not np.allclose(m, m.conj().T, atol=1e-12, rtol=0):
            raise NotAState("matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > 1e-12:
            raise NotAState(f"trace is {np.trace(m).real!r}")
        if abs(m[0, 1]) > math.sqrt(max(m[0, 0].real * m[1, 1].real, 0.0)) + 1e-10:
            raise NotAState("coherence exceeds the positivity bound")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def expectation(self, ket: np.ndarray) -> float:
        """``<ket|rho|ket>``."""
        ket = np.asarray(ket, dtype=complex)
        return float(np.vdot(ket, self.matrix @ ket).real)

    def eigvals(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def coherence_damping(N: float, phi2: float) -> float:
    """``e^{-2 N^2 <phi^2>}``, the factor multiplying the qubit coherence."""
    return math.exp(-2.0 * N**2 * phi2)


def _qubit(coherence: complex) -> QubitDensityMatrix:
    return QubitDensityMatrix(np.array([[0.5, coherence], [np.conj(coherence), 0.5]]))


def kicked_qubit(N: float, g: float, phi: float = 0.0) -> QubitDensityMatrix:
    """Pure qubit state before averaging, for one realization ``phi`` of the phase noise."""
    return _qubit(0.5 * np.exp(2j * N * (g + phi)))


def dephased_qubit(N: float, g: float, phi2: float) -> QubitDensityMatrix:
    """Qubit state averaged over Gaussian phase noise of variance ``phi2``."""
    if phi2 < 0:
        raise ValueError("phi2 must be >= 0")
    return _qubit(0.5 * np.exp(2j * g * N) * coherence_damping(N, phi2))


def sampled_coherence(N: float, g: float, phi2: float, samples: int = 1_000_000, seed: int = 20240521) -> complex:
    """Monte Carlo estimate of the averaged ``+-`` coherence, for checking :func:`dephased_qubit`."""
    rng = np.random.default_rng(seed)
    phi = rng.normal(0.0, math.sqrt(phi2), samples)
    return complex(0.5 * np.mean(np.exp(2j * N * (g + phi))))


def dephased_overlap_sq(N: float, g: float, phi2: float) -> float:
    """Square overlap ``(1 + cos(2gN) e^{-2N^2 phi2}) / 2`` of the dephased qubit with its initial state."""
    if phi2 < 0:
        raise ValueError("phi2 must be >= 0")
    return 0.5 * (1.0 + math.cos(2.0 * g * N) * coherence_damping(N, phi2))


def dephased_qfi(N: float, phi2: float) -> float:
    """Closed-form QFI ``4 N^2 e^{-4 N^2 phi2}`` of the dephased qubit."""
    return 4.0 * N**2 * math.exp(-4.0 * N**2 * phi2)


def dephased_qfi_sld(N: float, g: float, phi2: float, step: float | None = None) -> float:
    step = default_step(N) if step is None else step
    return qfi_mixed_sld(lambda x: dephased_qubit(N, x, phi2), g, step).fisher


def dephasing_sweep(N: float, g: float, phi2_grid, workers: int = 1) -> dict[str, np.ndarray]:
    """Closed-form overlap and QFI over a noise grid, with SLD values alongside.

    Returns columns ``phi2``, ``overlap_sq``, ``qfi`` and ``qfi_sld``, in grid
    order regardless of ``workers``.
    """
    grid = np.asarray(phi2_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("phi2_grid must be a non-empty 1-d sequence")
    if np.any(grid < 0) or np.any(np.diff(grid) < 0):
        raise ValueError("phi2_grid must be sorted and non-negative")

    def row(phi2):
        return dephased_overlap_sq(N, g, phi2), dephased_qfi(N, phi2), dephased_qfi_sld(N, g, phi2)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rows = list(pool.map(row, grid))
    overlap_sq, qfi, qfi_sld = (np.array(c) for c in zip(*rows))
    return {"phi2": grid, "overlap_sq": overlap_sq, "qfi": qfi, "qfi_sld": qfi_sld}
