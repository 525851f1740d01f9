"""Monte Carlo of the frequency estimator for ``g``.

Each repetition performs ``trials`` binary post-selections, estimates ``p_+``
as the success fraction and inverts ``p_+ = cos^2(gN)`` on the principal branch.

Random streams
--------------
Repetition ``i`` of a run draws from
``PCG64(SeedSequence(seed, spawn_key=stream + (i,)))``. ``SeedSequence``
hashes the key into an independent state, so a repetition's numbers depend
only on ``(seed, stream, i)`` and never on scheduling or worker count.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .errors import ConfigurationError, SensitivityVanishing

A_FLOOR = 1e-3


class Model(str, enum.Enum):
    EXACT_EQ5 = "exact_eq5"
    SMALLG_COS2 = "smallg_cos2"


@dataclass(frozen=True)
class EstimationRun:
    N: float
    g_true: float
    trials: int
    repetitions: int
    seed: int
    model: Model = Model.SMALLG_COS2
    stream: tuple[int, ...] = field(default=(), repr=False)

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        if not self.N > 0:
            raise ConfigurationError(f"N must be positive, got {self.N}")
        if not 0 < self.g_true < math.pi / (2 * self.N):
            raise ConfigurationError(
                f"g_true={self.g_true} is outside the principal branch (0, pi/(2N)) = (0, {math.pi / (2 * self.N):.6g})"
            )
        if self.trials < 1 or self.repetitions < 1:
            raise ConfigurationError("trials and repetitions must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError("seed must be a 64-bit unsigned integer")

    @property
    def p_plus(self) -> float:
        if self.model is Model.EXACT_EQ5:
            return float(analytic.postselect_probs(self.N, self.g_true)[0])
        return float(analytic.postselect_prob_smallg(self.N, self.g_true))


@dataclass(frozen=True)
class EstimationReport:
    p_plus: float
    p_hat_mean: float
    p_hat_std: float
    g_hat_mean: float
    g_hat_std: float
    sigma_g_predicted: float
    sigma_g_binomial: float
    edge_count: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def repetition_rng(seed: int, stream: tuple[int, ...], index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=tuple(stream) + (index,))
    return np.random.Generator(np.random.PCG64(ss))


def _one_repetition(p: float, trials: int, rng: np.random.Generator) -> float:
    return np.count_nonzero(rng.random(trials) < p) / trials


def simulate_trials(run: EstimationRun, workers: int = 1) -> np.ndarray:
    """Success fraction ``p_hat`` for every repetition, in repetition order."""
    p = run.p_plus

    def rep(i):
        return _one_repetition(p, run.trials, repetition_rng(run.seed, run.stream, i))

    if workers <= 1:
        return np.array([rep(i) for i in range(run.repetitions)])
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return np.array(list(pool.map(rep, range(run.repetitions))))


def invert_estimator(p_hat, N: float):
    """``arccos(sqrt(p_hat)) / N``, mapping ``[0, 1]`` onto ``[pi/(2N), 0]``."""
    if not N > 0:
        raise ConfigurationError("N must be positive")
    return np.arccos(np.sqrt(np.clip(p_hat, 0.0, 1.0))) / N


def sensitivity(p_plus: float) -> float:
    """``a = sin(2 arccos sqrt(p_+))``."""
    return math.sin(2.0 * math.acos(math.sqrt(p_plus)))


def _checked_sensitivity(p_plus: float) -> float:
    if not 0 < p_plus < 1:
        raise SensitivityVanishing(f"p_+ = {p_plus} must lie strictly inside (0, 1)")
    a = sensitivity(p_plus)
    if a <= A_FLOOR:
        raise SensitivityVanishing(f"a = {a:.3g} <= {A_FLOOR:g} at p_+ = {p_plus}")
    return a


def predicted_sigma_g(p_plus: float, N: float, trials: int) -> float:
    """``1 / (a N sqrt(nu))``, i.e. error propagation with ``sigma_p = 1/sqrt(nu)``."""
    a = _checked_sensitivity(p_plus)
    return 1.0 / (a * N * math.sqrt(trials))


def binomial_sigma_g(p_plus: float, N: float, trials: int) -> float:
    """Error propagation with the exact binomial spread ``sqrt(p(1-p)/nu)``."""
    a = _checked_sensitivity(p_plus)
    return math.sqrt(p_plus * (1 - p_plus) / trials) / (a * N)


def estimate(run: EstimationRun, workers: int = 1) -> EstimationReport:
    """Simulate ``run`` and summarize the estimator.

    Repetitions with ``p_hat`` in ``{0, 1}`` are counted in ``edge_count`` and
    left out of the ``g_hat`` statistics.
    """
    p_hat = simulate_trials(run, workers)
    edge = (p_hat == 0.0) | (p_hat == 1.0)
    g_hat = invert_estimator(p_hat[~edge], run.N)
    p = run.p_plus
    return EstimationReport(
        p_plus=p,
        p_hat_mean=float(p_hat.mean()),
        p_hat_std=float(p_hat.std(ddof=1)) if p_hat.size > 1 else 0.0,
        g_hat_mean=float(g_hat.mean()) if g_hat.size else math.nan,
        g_hat_std=float(g_hat.std(ddof=1)) if g_hat.size > 1 else 0.0,
        sigma_g_predicted=predicted_sigma_g(p, run.N, run.trials),
        sigma_g_binomial=binomial_sigma_g(p, run.N, run.trials),
        edge_count=int(edge.sum()),
    )


def loglog_slope(x, y) -> float:
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def scaling_sweep(
    N_grid,
    gN_fixed: float,
    trials: int,
    repetitions: int,
    seed: int,
    model: Model | str = Model.SMALLG_COS2,
    workers: int = 1,
) -> dict:
    """Monte Carlo ``g_hat_std`` against ``N`` at fixed ``gN``.

    Grid point ``k`` uses stream ``(k,)``, so the points are statistically
    independent. Returns columns ``N``, ``g_hat_std``, ``sigma_g_binomial``,
    ``sigma_g_predicted``, ``edge_count`` and the fitted log-log ``slope``.
    """
    N_grid = np.asarray(N_grid, dtype=float)
    if not 0 < gN_fixed < math.pi / 2:
        raise ConfigurationError("gN_fixed must lie in (0, pi/2)")
    p = float(analytic.postselect_prob_smallg(1.0, gN_fixed))
    _checked_sensitivity(p)
    reports = [
        estimate(EstimationRun(N, gN_fixed / N, trials, repetitions, seed, model, stream=(k,)), workers)
        for k, N in enumerate(N_grid)
    ]
    out = {
        "N": N_grid,
        "g_hat_std": np.array([r.g_hat_std for r in reports]),
        "sigma_g_binomial": np.array([r.sigma_g_binomial for r in reports]),
        "sigma_g_predicted": np.array([r.sigma_g_predicted for r in reports]),
        "edge_count": np.array([r.edge_count for r in reports], dtype=float),
    }
    out["slope"] = loglog_slope(N_grid, out["g_hat_std"]) if len(N_grid) > 1 else math.nan
    return out
