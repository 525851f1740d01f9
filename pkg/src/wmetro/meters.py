"""Von Neumann meters: a Gaussian wavepacket (SQL) and a plane wave (Heisenberg).

The plane wave is never represented as a vector. Its only effect is the
qubit phase ``d p0`` per photon, and every result is computed from that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GRID_POINTS = 2**12
GRID_HALF_WIDTH = 10.0  # in units of sigma


@dataclass(frozen=True)
class GaussianMeter:
    sigma: float
    d: float = 0.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")


@dataclass(frozen=True)
class PlaneWaveMeter:
    wavelength: float

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ValueError("wavelength must be positive")

    @property
    def p0(self) -> float:
        return 2.0 * math.pi / self.wavelength


def gaussian_overlap(meter: GaussianMeter, photons: float = 1) -> float:
    """``exp(-N d^2 / (32 sigma^2))``; the single-photon overlap raised to the ``N``-th power."""
    return math.exp(-photons * meter.d**2 / (32.0 * meter.sigma**2))


def gaussian_dmin(sigma: float, N: float, criterion: str = "crb") -> float:
    """Smallest resolvable shift: ``4 sigma/sqrt(N)`` (overlap) or ``2 sigma/sqrt(N)`` (Cramér–Rao)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if criterion == "overlap":
        return 4.0 * sigma / math.sqrt(N)
    if criterion == "crb":
        return 2.0 * sigma / math.sqrt(N)
    raise ValueError(f"unknown criterion {criterion!r}")


def position_grid(sigma: float, points: int = GRID_POINTS, half_width: float = GRID_HALF_WIDTH) -> np.ndarray:
    return np.linspace(-half_width * sigma, half_width * sigma, points)


def gaussian_wavefunction(x: np.ndarray, sigma: float, shift: float) -> np.ndarray:
    """``(2 pi sigma^2)^{-1/4} exp(-(x + shift)^2 / 4 sigma^2)``."""
    return (2 * math.pi * sigma**2) ** -0.25 * np.exp(-((x + shift) ** 2) / (4 * sigma**2))


def gaussian_joint_state(sigma: float, d: float, x: np.ndarray) -> np.ndarray:
    """Discretized ``(psi_+(x)|+> + psi_-(x)|->)/sqrt(2)``, rows ``(|->, |+>)``.

    Amplitudes carry a ``sqrt(dx)`` factor so the plain vector norm is the
    L2 norm.
    """
    w = math.sqrt(x[1] - x[0])
    plus = gaussian_wavefunction(x, sigma, d / 2)
    minus = gaussian_wavefunction(x, sigma, -d / 2)
    return w * np.stack([minus, plus]) / math.sqrt(2.0)


def gaussian_overlap_grid(meter: GaussianMeter, photons: float = 1, points: int = GRID_POINTS) -> float:
    """Quadrature evaluation of the overlap, for checking :func:`gaussian_overlap`."""
    x = position_grid(meter.sigma, points)
    psi0 = gaussian_joint_state(meter.sigma, 0.0, x)
    psi = gaussian_joint_state(meter.sigma, meter.d, x)
    return float(np.vdot(psi0, psi).real) ** photons


def planewave_phase(meter: PlaneWaveMeter, d: float) -> float:
    """Qubit phase ``d p0`` imparted by one photon."""
    return d * meter.p0


def planewave_postselect(meter: PlaneWaveMeter, d, photons: float = 1):
    """``cos^2(2 pi d N / lambda)``: probability of finding the qubit back in its initial state."""
    return np.cos(np.asarray(d, dtype=float) * meter.p0 * photons) ** 2


def planewave_first_zero(meter: PlaneWaveMeter, photons: float) -> float:
    """Smallest ``d > 0`` with vanishing return probability, ``lambda / (4 N)``."""
    return meter.wavelength / (4.0 * photons)


def planewave_qubit_simulation(meter: PlaneWaveMeter, d: float, photons: int) -> float:
    """Apply the per-photon phases one photon at a time and project back."""
    qubit = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)  # (|+>, |->)
    kick = np.exp(1j * planewave_phase(meter, d) * np.array([1.0, -1.0]))
    for _ in range(int(photons)):
        qubit = kick * qubit
    return float(abs(np.vdot([1.0, 1.0], qubit)) ** 2 / 2.0)
