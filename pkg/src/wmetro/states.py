"""Exact qubit and truncated-Fock state algebra.

Everything here is brute force: states are explicit amplitude arrays and the
interaction is applied number state by number state. The closed forms in
:mod:`wmetro.analytic` are checked against these routines.

Conventions
-----------
* Joint amplitudes have shape ``(2, dim)``; row 0 is the qubit state ``|->``
  and row 1 is ``|+>``.
* A qubit state with Bloch angles ``(theta, phi)`` is
  ``cos(theta/2)|-> + sin(theta/2) e^{i phi}|+>``.
* The interaction ``exp(i g sigma_z n)`` is taken with ``sigma_z|+-> = -+|+->``
  so that ``|->|alpha>`` goes to ``|->|alpha e^{ig}>`` and ``|+>|alpha>`` goes
  to ``|+>|alpha e^{-ig}>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc

from .errors import DegenerateProjection, DimensionMismatch, TruncationInsufficient

TAIL_TOL = 1e-12
P_FLOOR = 1e-12

MINUS, PLUS = 0, 1


def default_dim(N: float) -> int:
    """Fock cutoff ``ceil(N + 12 sqrt(N) + 20)`` for mean photon number ``N``."""
    return int(math.ceil(N + 12.0 * math.sqrt(N) + 20.0))


def poisson_tail(N: float, dim: int) -> float:
    """Probability that a Poisson(N) variable is ``>= dim``."""
    if N == 0:
        return 0.0
    return float(gammainc(dim, N))


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class QubitState:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        object.__setattr__(self, "phi", self.phi % (2 * math.pi))

    @property
    def amps(self) -> np.ndarray:
        """Amplitudes in the ``(|->, |+>)`` basis."""
        return np.array(
            [math.cos(self.theta / 2), math.sin(self.theta / 2) * np.exp(1j * self.phi)]
        )

    def orthogonal(self) -> "QubitState":
        return QubitState(math.pi - self.theta, self.phi + math.pi)


#: ``(|-> + |+>)/sqrt(2)``, the parallel pre- and post-selected state.
EQUATOR = QubitState(math.pi / 2, 0.0)


@dataclass(frozen=True)
class CoherentLabel:
    alpha: complex

    @property
    def N(self) -> float:
        return abs(self.alpha) ** 2


@dataclass(frozen=True, eq=False)
class TruncatedFockVector:
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps)
        if amps.ndim != 1 or amps.size < 1:
            raise ValueError("Fock amplitudes must be a non-empty 1-d array")
        object.__setattr__(self, "amps", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def mean_photon_number(self) -> float:
        w = np.abs(self.amps) ** 2
        return float(np.dot(np.arange(self.dim), w) / w.sum())


@dataclass(frozen=True, eq=False)
class JointPureState:
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps)
        if amps.ndim != 2 or amps.shape[0] != 2:
            raise ValueError(f"joint amplitudes must have shape (2, dim), got {amps.shape}")
        object.__setattr__(self, "amps", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amps.shape[1]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


def make_coherent(alpha: complex, dim: int | None = None) -> TruncatedFockVector:
    """Coherent state ``|alpha>`` on number states ``0..dim-1``.

    Amplitudes ``e^{-|alpha|^2/2} alpha^n / sqrt(n!)`` are built in log space
    (cumulative sum of ``log|alpha| - log(n)/2``) so no factorial is formed.

    Raises
    ------
    TruncationInsufficient
        If the Poisson mass beyond the cutoff is ``>= TAIL_TOL``.
    """
    alpha = complex(alpha)
    N = abs(alpha) ** 2
    if dim is None:
        dim = default_dim(N)
    if dim < 1:
        raise ValueError("dim must be >= 1")
    tail = poisson_tail(N, dim)
    if tail >= TAIL_TOL:
        raise TruncationInsufficient(
            f"dim={dim} leaves Poisson tail mass {tail:.3g} for N={N:g}; "
            f"need dim >= {default_dim(N)} or so"
        )
    amps = np.zeros(dim, dtype=complex)
    if N == 0:
        amps[0] = 1.0
        return TruncatedFockVector(amps)
    n = np.arange(dim)
    steps = np.empty(dim)
    steps[0] = -N / 2
    steps[1:] = math.log(abs(alpha)) - 0.5 * np.log(n[1:])
    log_mag = np.cumsum(steps)
    amps = np.exp(log_mag + 1j * math.atan2(alpha.imag, alpha.real) * n)
    return TruncatedFockVector(amps)


def make_initial_joint(qubit: QubitState, alpha: complex, dim: int | None = None) -> JointPureState:
    """Separable product ``qubit (x) |alpha>``."""
    field = make_coherent(alpha, dim)
    return JointPureState(np.outer(qubit.amps, field.amps))


def interaction_phases(g: float, dim: int) -> np.ndarray:
    """Diagonal of the interaction unitary, shape ``(2, dim)``."""
    n = np.arange(dim)
    return np.stack([np.exp(1j * g * n), np.exp(-1j * g * n)])


def apply_interaction(state: JointPureState, g: float) -> JointPureState:
    if not math.isfinite(g):
        raise ValueError("g must be finite")
    return JointPureState(state.amps * interaction_phases(g, state.dim))


def cat_state(qubit: QubitState, alpha: complex, g: float, dim: int | None = None) -> JointPureState:
    """The entangled state obtained by interacting ``qubit (x) |alpha>`` for strength ``g``."""
    return apply_interaction(make_initial_joint(qubit, alpha, dim), g)


def inner(a: JointPureState | TruncatedFockVector, b: JointPureState | TruncatedFockVector) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    if a.amps.shape != b.amps.shape:
        raise DimensionMismatch(f"cannot contract shapes {a.amps.shape} and {b.amps.shape}")
    return complex(np.vdot(a.amps, b.amps))


def conditional_meter(state: JointPureState, target: QubitState) -> np.ndarray:
    """Unnormalized meter amplitudes ``(<target| (x) 1)|state>``."""
    return target.amps.conj() @ state.amps


def qubit_probability(state: JointPureState, target: QubitState) -> float:
    """Probability of finding the qubit in ``target``. Never raises."""
    return float(np.linalg.norm(conditional_meter(state, target)) ** 2)


def project_qubit(state: JointPureState, target: QubitState) -> tuple[float, TruncatedFockVector]:
    """Post-select the qubit on ``target``.

    Returns the success probability and the renormalized meter state.
    Raises :class:`DegenerateProjection` when the probability is below
    ``P_FLOOR``, since the conditional state would be noise.
    """
    meter = conditional_meter(state, target)
    p = float(np.linalg.norm(meter) ** 2)
    if p < P_FLOOR:
        raise DegenerateProjection(f"post-selection probability {p:.3g} is below {P_FLOOR:g}")
    return p, TruncatedFockVector(meter / math.sqrt(p))


def overlap_oracle(N: float, g: float, qubit: QubitState = EQUATOR, dim: int | None = None) -> complex:
    """``<Psi_0|Psi(g)>`` evaluated in the Fock basis, for any pre-selected qubit."""
    psi0 = make_initial_joint(qubit, math.sqrt(N), dim)
    return inner(psi0, apply_interaction(psi0, g))


def postselect_oracle(
    N: float,
    g: float,
    pre: QubitState = EQUATOR,
    post: QubitState | None = None,
    dim: int | None = None,
) -> tuple[float, float]:
    """``(p_parallel, p_perpendicular)`` for post-selection on ``post`` and its complement."""
    post = pre if post is None else post
    psi = cat_state(pre, math.sqrt(N), g, dim)
    return qubit_probability(psi, post), qubit_probability(psi, post.orthogonal())
