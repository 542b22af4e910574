"""
Monte Carlo estimators on the switched system: Lyapunov exponents, expected
propagator norms and the monotone-norm check for normal Hurwitz families.
"""

import logging
import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from switchstab.exceptions import HypothesisViolated
from switchstab.linear_algebra import HurwitzVerdict, is_hurwitz, is_normal
from switchstab.logger import log_run_state
from switchstab.markov_chain import JumpPath, StreamPurpose, replica_stream, sample_path_from
from switchstab.switched_simulator.propagation import (
    check_dense_bound,
    default_direction,
    log_radius_at,
    propagate_polar,
    propagator,
)
from switchstab.switched_simulator.replicas import run_replicas
from switchstab.switched_simulator.system import SwitchedSystem

logger = logging.getLogger(__name__)

MONOTONE_SLACK = 1e-9


@dataclass(frozen=True)
class LyapunovEstimate:
    """
    Replica mean of ``(log R_{burn_in + T} - log R_{burn_in}) / T``.

    Attributes
    ----------
    mean : float
    stderr : float
        Sample standard deviation over replicas divided by ``sqrt(replicas)``.
    replicas : int
    horizon : float
        Averaging horizon ``T`` (after burn-in).
    burn_in : float
    """

    mean: float
    stderr: float
    replicas: int
    horizon: float
    burn_in: float

    def __post_init__(self):
        if self.stderr < 0:
            raise ValueError(f'stderr must be nonnegative, got {self.stderr}')
        if self.replicas < 2:
            raise ValueError(f'an estimate needs at least 2 replicas, got {self.replicas}')

    def verdict(self, k: float = 3.0) -> str:
        """``Unstable`` if ``mean - k stderr > 0``, ``Stable`` if ``mean + k stderr < 0``, else ``Inconclusive``."""
        if self.mean - k * self.stderr > 0:
            return 'Unstable'
        if self.mean + k * self.stderr < 0:
            return 'Stable'
        return 'Inconclusive'


@dataclass(frozen=True)
class NormEstimate:
    """Replica mean and standard error of the spectral norm of the path propagator ``S_T``."""

    mean: float
    stderr: float
    replicas: int
    horizon: float


def _mean_stderr(values: np.ndarray) -> tuple[float, float]:
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.shape[0]))


def _initial_state(rng: np.random.Generator, pi: np.ndarray) -> int:
    """Draw the starting state from ``pi`` by inversion."""
    u = rng.random()
    return int(min(np.searchsorted(np.cumsum(pi), u, side='right'), pi.shape[0] - 1))


def _check_reps(n_reps: int) -> None:
    if n_reps < 2:
        raise ValueError(f'n_reps must be at least 2, got {n_reps}')


def replica_path(system: SwitchedSystem, horizon: float, seed: int = 0, replica: int = 0) -> JumpPath:
    """
    The jump path that replica ``replica`` of :func:`lyapunov_mc` samples with
    master ``seed``, for ``horizon = burn_in + T``.
    """
    rng = replica_stream(seed, replica, StreamPurpose.LYAPUNOV)
    i0 = _initial_state(rng, system.stationary)
    return sample_path_from(rng, system.generator, system.rate, i0, horizon)


def lyapunov_mc(
    system: SwitchedSystem,
    T: float,
    burn_in: Optional[float] = None,
    n_reps: int = 32,
    seed: int = 0,
    u0: Optional[ArrayLike] = None,
    workers: int | None = 1,
    progress: bool = False,
) -> LyapunovEstimate:
    """
    Monte Carlo estimate of the top Lyapunov exponent.

    Each replica draws its initial state from the stationary distribution,
    samples a path on ``[0, burn_in + T]`` from its own stream and records
    ``(log R_{burn_in + T} - log R_{burn_in}) / T``.

    Parameters
    ----------
    system : SwitchedSystem
    T : float
        Averaging horizon.
    burn_in : float, optional
        Discarded initial time, ``T / 10`` by default.
    n_reps : int
        Number of replicas (at least 2).
    seed : int
        Master seed; the estimate is a deterministic function of it.
    u0 : array_like, optional
        Starting direction, ``(1, 0, ..., 0)`` by default.
    workers : int, optional
        Thread count; the result does not depend on it.
    progress : bool
        Show a progress bar.
    """
    if burn_in is None:
        burn_in = T / 10.0
    if not (T > burn_in >= 0) or not math.isfinite(T):
        raise ValueError(f'need T > burn_in >= 0, got T={T}, burn_in={burn_in}')
    _check_reps(n_reps)
    direction = default_direction(system.dim) if u0 is None else np.asarray(u0, dtype=np.float64)

    log_run_state(
        logger,
        {'status': 'replicas_started', 'replicas': n_reps, 'workers': workers, 'horizon': T, 'burn_in': burn_in,
         'seed': seed},
        level=logging.DEBUG,
    )
    start = time.perf_counter()

    def replica(k: int) -> float:
        path = replica_path(system, burn_in + T, seed, k)
        if burn_in > 0:
            warm, measured = path.split(burn_in)
            warm_state = propagate_polar(system, warm, direction)
            start_direction = warm_state.direction
        else:
            measured, start_direction = path, direction
        return propagate_polar(system, measured, start_direction).log_radius / T

    values = np.array(run_replicas(replica, n_reps, workers, progress, desc='Lyapunov'))
    mean, stderr = _mean_stderr(values)

    log_run_state(
        logger,
        {'status': 'replicas_complete', 'mean': mean, 'stderr': stderr,
         'time_sec': round(time.perf_counter() - start, 3)},
    )
    return LyapunovEstimate(mean=mean, stderr=stderr, replicas=n_reps, horizon=float(T), burn_in=float(burn_in))


def propagator_norm_mc(
    system: SwitchedSystem,
    T: float,
    n_reps: int = 32,
    seed: int = 0,
    workers: int | None = 1,
    progress: bool = False,
) -> NormEstimate:
    """
    Monte Carlo mean of ``||S_T||`` with the initial state drawn from the
    stationary distribution.

    Raises
    ------
    OverflowRiskError
        If ``Lambda T`` exceeds the dense bound.
    """
    if T < 0 or not math.isfinite(T):
        raise ValueError(f'horizon must be finite and nonnegative, got {T}')
    _check_reps(n_reps)
    check_dense_bound(system, T)
    pi = system.stationary

    def replica(k: int) -> float:
        rng = replica_stream(seed, k, StreamPurpose.PROPAGATOR_NORM)
        i0 = _initial_state(rng, pi)
        path = sample_path_from(rng, system.generator, system.rate, i0, T)
        return float(np.linalg.norm(propagator(system, path), 2))

    values = np.array(run_replicas(replica, n_reps, workers, progress, desc='Propagator norm'))
    mean, stderr = _mean_stderr(values)
    logger.info(f'E||S_T|| at r={system.rate:g}, T={T:g}: {mean:.6g} +/- {stderr:.2g}')
    return NormEstimate(mean=mean, stderr=stderr, replicas=n_reps, horizon=float(T))


def monotone_norm_check(
    system: SwitchedSystem,
    n_paths: int,
    T: float,
    samples_per_path: int,
    seed: int = 0,
    workers: int | None = 1,
) -> bool:
    """
    Check that ``||X_t||`` is nonincreasing along sampled paths.

    Each path is evaluated at ``samples_per_path`` uniform times in ``[0, T]``;
    consecutive values may grow by at most a relative ``1e-9``.

    Raises
    ------
    HypothesisViolated
        If some ``A_i`` is not normal and Hurwitz.
    """
    for i, A in enumerate(system.matrices):
        if not is_normal(A):
            raise HypothesisViolated(f'A[{i}] is not normal')
        if is_hurwitz(A) is not HurwitzVerdict.HURWITZ:
            raise HypothesisViolated(f'A[{i}] is not Hurwitz')
    if n_paths < 1 or samples_per_path < 2:
        raise ValueError('need at least one path and two samples per path')

    times = np.linspace(0.0, T, samples_per_path)
    pi = system.stationary
    slack = math.log1p(MONOTONE_SLACK)

    def replica(k: int) -> bool:
        rng = replica_stream(seed, k, StreamPurpose.MONOTONE_NORM)
        i0 = _initial_state(rng, pi)
        path = sample_path_from(rng, system.generator, system.rate, i0, T)
        # Random direction per path
        u0 = rng.standard_normal(system.dim)
        u0 /= np.linalg.norm(u0)
        log_norms = log_radius_at(system, path, times, u0)
        return bool(np.all(np.diff(log_norms) <= slack))

    results = run_replicas(replica, n_paths, workers, desc='Monotone norm')
    failures = results.count(False)
    if failures:
        logger.info(f'{failures} of {n_paths} paths had a growing norm')
    return failures == 0
