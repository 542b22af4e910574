"""
Realizations of the switching signal.

A :class:`JumpPath` on ``[0, T]`` stores the visited states
``xi_1, ..., xi_{N+1}`` (``xi_1`` is the initial state), the completed holding
times ``tau_1, ..., tau_N`` and the residual ``a_T`` spent in the final state,
so that ``sum(tau) + a_T = T``.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from numba import njit
from numpy.typing import ArrayLike

from switchstab.exceptions import EmptyHorizonError, GeneratorError
from switchstab.markov_chain.generator import Generator, as_generator
from switchstab.markov_chain.random_streams import StreamPurpose, replica_stream

logger = logging.getLogger(__name__)


def _horizon_tol(T: float) -> float:
    return 1e-9 * (1.0 + T)


@dataclass(frozen=True, eq=False)
class JumpPath:
    """
    A sampled path of the switching chain.

    Attributes
    ----------
    states : np.ndarray
        ``N + 1`` visited states, ``states[0]`` being the initial state.
    holding_times : np.ndarray
        ``N`` completed holding times.
    horizon : float
        Time horizon ``T``.
    residual : float
        Time ``a_T`` spent in ``states[-1]`` before ``T``.
    """

    states: np.ndarray = field(repr=False)
    holding_times: np.ndarray = field(repr=False)
    horizon: float
    residual: float

    def __post_init__(self):
        states = np.array(self.states, dtype=np.int64)
        holds = np.array(self.holding_times, dtype=np.float64)
        if states.ndim != 1 or holds.ndim != 1 or states.shape[0] != holds.shape[0] + 1:
            raise ValueError(
                f'a path needs one more state than holding times, got {states.shape} and {holds.shape}'
            )
        if self.horizon < 0 or self.residual < 0:
            raise ValueError('horizon and residual must be nonnegative')
        if np.any(holds < 0) or not np.all(np.isfinite(holds)):
            raise ValueError('holding times must be finite and nonnegative')
        if np.any(states[1:] == states[:-1]):
            raise ValueError('consecutive states of a jump path must differ')
        total = math.fsum(holds) + self.residual
        if abs(total - self.horizon) > _horizon_tol(self.horizon):
            raise ValueError(f'holding times and residual sum to {total!r}, expected horizon {self.horizon!r}')
        states.setflags(write=False)
        holds.setflags(write=False)
        object.__setattr__(self, 'states', states)
        object.__setattr__(self, 'holding_times', holds)
        object.__setattr__(self, 'horizon', float(self.horizon))
        object.__setattr__(self, 'residual', float(self.residual))

    def __repr__(self) -> str:
        return (
            f'JumpPath(initial_state={self.initial_state}, jump_count={self.jump_count}, '
            f'horizon={self.horizon}, residual={self.residual})'
        )

    @property
    def initial_state(self) -> int:
        return int(self.states[0])

    @property
    def final_state(self) -> int:
        return int(self.states[-1])

    @property
    def jump_count(self) -> int:
        """``N(T)``."""
        return int(self.holding_times.shape[0])

    def jump_times(self) -> np.ndarray:
        """Times ``s_k = tau_1 + ... + tau_k`` of the ``N`` jumps."""
        return np.cumsum(self.holding_times)

    def segments(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        States and durations of the ``N + 1`` constant pieces, the last one
        being the residual.
        """
        return self.states, np.append(self.holding_times, self.residual)

    def iter_segments(self) -> Iterator[Tuple[int, float]]:
        states, durations = self.segments()
        for state, duration in zip(states, durations):
            yield int(state), float(duration)

    def state_at(self, t: float) -> int:
        """State occupied at time ``t`` (right-continuous)."""
        if t < 0 or t > self.horizon + _horizon_tol(self.horizon):
            raise ValueError(f'time {t} outside [0, {self.horizon}]')
        return int(self.states[np.searchsorted(self.jump_times(), t, side='right')])

    def validate(self, generator: Union[Generator, ArrayLike]) -> None:
        """
        Check that every transition has a positive rate under ``generator``.

        Raises
        ------
        GeneratorError
            If a transition is impossible or a state is out of range.
        """
        gen = as_generator(generator)
        if np.any(self.states < 0) or np.any(self.states >= gen.n_states):
            raise GeneratorError(f'path visits states outside 0..{gen.n_states - 1}')
        for k in range(self.jump_count):
            i, j = int(self.states[k]), int(self.states[k + 1])
            if gen.rates[i, j] <= 0:
                raise GeneratorError(f'transition {i} -> {j} at jump {k + 1} has rate {gen.rates[i, j]!r}')

    def split(self, t: float) -> Tuple['JumpPath', 'JumpPath']:
        """
        Cut the path at time ``t`` into a path on ``[0, t]`` and a path on
        ``[t, T]`` (shifted to start at 0). The segment straddling ``t`` is
        shared between the residual of the first and the first holding time of
        the second.
        """
        T = self.horizon
        if t < 0 or t > T:
            raise ValueError(f'split time {t} outside [0, {T}]')
        jumps = self.jump_times()
        m = int(np.searchsorted(jumps, t, side='right'))
        last_jump = float(jumps[m - 1]) if m > 0 else 0.0

        left = JumpPath(
            states=self.states[: m + 1],
            holding_times=self.holding_times[:m],
            horizon=t,
            residual=max(0.0, t - last_jump),
        )
        if m < self.jump_count:
            first = float(jumps[m]) - t
            right_holds = np.concatenate(([first], self.holding_times[m + 1 :]))
            right_residual = self.residual
        else:
            right_holds = np.empty(0)
            right_residual = max(0.0, T - t)
        right = JumpPath(
            states=self.states[m:],
            holding_times=right_holds,
            horizon=T - t,
            residual=right_residual,
        )
        return left, right

    def refine(self, times: Sequence[float]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Subdivide the segments at the given sorted ``times`` in ``[0, T]``.

        Returns
        -------
        states, durations, marks : np.ndarray
            Piecewise-constant states and durations of the refined partition,
            and for each requested time the index of the refined segment ending
            there (``-1`` for a time equal to 0).
        """
        times = np.asarray(times, dtype=np.float64)
        if times.ndim != 1:
            raise ValueError('times must be one-dimensional')
        if times.size and (np.any(np.diff(times) < 0) or times[0] < 0 or times[-1] > self.horizon):
            raise ValueError(f'times must be sorted within [0, {self.horizon}]')
        return _refine_segments(self.states, np.append(self.holding_times, self.residual), times)

    def to_frame(self) -> pd.DataFrame:
        """
        Table with columns ``k, state, holding_time``; the last row (``k = N + 1``)
        carries the residual ``a_T``.
        """
        states, durations = self.segments()
        return pd.DataFrame(
            {
                'k': np.arange(1, states.shape[0] + 1),
                'state': states,
                'holding_time': durations,
            }
        )


@njit(cache=True, nogil=True)
def _refine_segments(states, durations, times):
    n_seg = states.shape[0]
    n_times = times.shape[0]
    out_states = np.empty(n_seg + n_times, dtype=np.int64)
    out_durations = np.empty(n_seg + n_times)
    marks = np.full(n_times, -1, dtype=np.int64)

    k = 0
    t = 0.0
    j = 0
    while j < n_times and times[j] <= 0.0:
        j += 1
    for s in range(n_seg):
        start = t
        end = t + durations[s]
        cursor = start
        while j < n_times and times[j] <= end:
            piece = times[j] - cursor
            if piece > 0.0:
                out_states[k] = states[s]
                out_durations[k] = piece
                k += 1
            marks[j] = k - 1
            cursor = times[j]
            j += 1
        if end - cursor > 0.0:
            out_states[k] = states[s]
            out_durations[k] = end - cursor
            k += 1
        t = end
    # Times beyond the accumulated horizon due to rounding close the last segment.
    while j < n_times:
        marks[j] = k - 1
        j += 1
    return out_states[:k], out_durations[:k], marks


@njit(cache=True, nogil=True)
def _assemble_path(state, t, T, r, exit_rates, cumulative, u_hold, u_jump, states_out, holds_out, n_out):
    """
    Consume pre-drawn uniforms until the horizon is reached or they run out.

    Returns the new ``(state, t, n_out, done)``; ``done`` is True once the
    holding time of ``state`` passes ``T`` (then ``t`` is the last jump time).
    """
    n_states = exit_rates.shape[0]
    for m in range(u_hold.shape[0]):
        rate = r * exit_rates[state]
        if rate <= 0.0:
            return state, t, n_out, True
        # u in (0, 1] keeps the logarithm finite
        tau = -math.log(1.0 - u_hold[m]) / rate
        if t + tau >= T:
            return state, t, n_out, True
        t += tau
        holds_out[n_out] = tau
        u = u_jump[m]
        nxt = -1
        last_positive = -1
        for j in range(n_states):
            if j == state:
                continue
            if j == 0:
                below = 0.0
            else:
                below = cumulative[state, j - 1]
            if cumulative[state, j] > below:
                last_positive = j
                if nxt < 0 and u < cumulative[state, j]:
                    nxt = j
        if nxt < 0:
            nxt = last_positive
        state = nxt
        states_out[n_out + 1] = state
        n_out += 1
    return state, t, n_out, False


def sample_path(
    Q: Union[Generator, ArrayLike],
    r: float,
    i0: int,
    T: float,
    seed: int = 0,
    replica: int = 0,
) -> JumpPath:
    """
    Sample the chain with generator ``r Q`` on ``[0, T]`` starting from ``i0``.

    Holding times are exponential with rate ``r q_i`` drawn by inversion and
    the next state is chosen by cumulative-sum inversion in ascending order.
    The result is a deterministic function of all arguments.
    """
    rng = replica_stream(seed, replica, StreamPurpose.PATH)
    return sample_path_from(rng, as_generator(Q), r, i0, T)


def sample_path_from(rng: np.random.Generator, generator: Generator, r: float, i0: int, T: float) -> JumpPath:
    """Sample a path drawing from an existing stream; see :func:`sample_path`."""
    if r <= 0 or not math.isfinite(r):
        raise ValueError(f'switching rate must be positive and finite, got {r}')
    if T < 0 or not math.isfinite(T):
        raise ValueError(f'horizon must be finite and nonnegative, got {T}')
    if not 0 <= i0 < generator.n_states:
        raise ValueError(f'initial state {i0} outside 0..{generator.n_states - 1}')

    exit_rates = np.ascontiguousarray(generator.exit_rates)
    cumulative = np.ascontiguousarray(generator.jump_cumulative)

    mean_rate = r * float(exit_rates.max())
    capacity = int(1.2 * mean_rate * T) + 64
    states = np.empty(capacity + 1, dtype=np.int64)
    holds = np.empty(capacity)
    states[0] = i0

    state, t, n_out, done = int(i0), 0.0, 0, T == 0.0
    while not done:
        chunk = max(64, int(0.25 * mean_rate * max(T - t, 0.0)) + 64)
        if n_out + chunk > capacity:
            capacity = 2 * (n_out + chunk)
            states = np.resize(states, capacity + 1)
            holds = np.resize(holds, capacity)
        u_hold = rng.random(chunk)
        u_jump = rng.random(chunk)
        state, t, n_out, done = _assemble_path(
            state, t, T, r, exit_rates, cumulative, u_hold, u_jump, states, holds, n_out
        )

    return JumpPath(
        states=states[: n_out + 1],
        holding_times=holds[:n_out],
        horizon=T,
        residual=max(0.0, T - math.fsum(holds[:n_out])),
    )


def occupation_fractions(path: JumpPath, n_states: int | None = None) -> np.ndarray:
    """
    Fraction of ``[0, T]`` spent in each state.

    Raises
    ------
    EmptyHorizonError
        If the path has ``T = 0``.
    """
    if path.horizon <= 0:
        raise EmptyHorizonError('occupation fractions need a positive horizon')
    states, durations = path.segments()
    n = n_states if n_states is not None else int(states.max()) + 1
    return np.bincount(states, weights=durations, minlength=n) / math.fsum(durations)


def visit_fractions(path: JumpPath, n_states: int | None = None) -> np.ndarray:
    """Fraction of completed visits ``xi_1, ..., xi_N`` made to each state."""
    if path.jump_count == 0:
        raise EmptyHorizonError('visit fractions need at least one completed holding time')
    visited = path.states[:-1]
    n = n_states if n_states is not None else int(path.states.max()) + 1
    return np.bincount(visited, minlength=n) / path.jump_count


def mean_holding_times(path: JumpPath, n_states: int | None = None) -> np.ndarray:
    """Average completed holding time per state (NaN for unvisited states)."""
    visited = path.states[:-1]
    n = n_states if n_states is not None else int(path.states.max()) + 1
    counts = np.bincount(visited, minlength=n)
    totals = np.bincount(visited, weights=path.holding_times, minlength=n)
    with np.errstate(invalid='ignore', divide='ignore'):
        return np.where(counts > 0, totals / np.maximum(counts, 1), np.nan)
