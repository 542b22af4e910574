"""
Generators of continuous-time Markov chains on a finite state space.

A generator ``Q`` has nonnegative off-diagonal rates and zero row sums. The
exit rate of state ``i`` is ``q_i = -Q[i][i]`` so that the mean holding time
under the scaled generator ``r Q`` is ``1/(r q_i)``.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Union

import numpy as np
from numpy.typing import ArrayLike
from scipy.sparse.csgraph import connected_components

from switchstab.exceptions import (
    DimensionMismatchError,
    GeneratorError,
    NegativeRate,
    NonFiniteMatrixError,
    NotIrreducible,
    RowSumViolation,
    SpecValidationError,
)

logger = logging.getLogger(__name__)

ROW_SUM_TOL = 1e-12


def validate_generator(Q: ArrayLike) -> None:
    """
    Check the generator invariants.

    Rows must sum to zero within ``1e-12`` (relative to the largest rate in the
    row when that exceeds one), off-diagonal entries must be nonnegative and the
    graph of positive rates must be strongly connected. A 1x1 zero matrix is
    accepted as the generator of a chain that never jumps.

    Raises
    ------
    RowSumViolation, NegativeRate, NotIrreducible
        Naming the offending row, entry or communicating class.
    """
    Q = _as_rate_matrix(Q)
    n = Q.shape[0]

    for i in range(n):
        for j in range(n):
            if i != j and Q[i, j] < 0:
                raise NegativeRate(i, j, float(Q[i, j]))

    for i in range(n):
        row_sum = float(Q[i].sum())
        scale = max(1.0, float(np.abs(Q[i]).max()))
        if abs(row_sum) > ROW_SUM_TOL * scale:
            raise RowSumViolation(i, row_sum)

    if n > 1:
        adjacency = (Q > 0).astype(np.int8)
        np.fill_diagonal(adjacency, 0)
        n_components, labels = connected_components(adjacency, directed=True, connection='strong')
        if n_components > 1:
            # Report the class of state 0; a closed class elsewhere is equally fatal.
            component = [int(k) for k in np.flatnonzero(labels == labels[0])]
            raise NotIrreducible(component)


def _as_rate_matrix(Q: ArrayLike) -> np.ndarray:
    try:
        arr = np.array(Q, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise DimensionMismatchError(f'generator is not a rectangular array of real numbers: {e}') from e
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatchError(f'generator must be a non-empty square matrix, got shape {arr.shape}')
    if not np.all(np.isfinite(arr)):
        raise NonFiniteMatrixError('generator contains NaN or infinite entries')
    return arr


@dataclass(frozen=True, eq=False)
class Generator:
    """
    A validated generator matrix.

    Attributes
    ----------
    rates : np.ndarray
        Read-only ``(n, n)`` rate matrix ``Q``.
    """

    rates: np.ndarray = field(repr=False)

    def __post_init__(self):
        Q = _as_rate_matrix(self.rates)
        validate_generator(Q)
        Q.setflags(write=False)
        object.__setattr__(self, 'rates', Q)

    def __repr__(self) -> str:
        return f'Generator(n_states={self.n_states}, rates={self.rates.tolist()})'

    @classmethod
    def from_literal(cls, literal: Dict[str, Any]) -> 'Generator':
        """
        Build a generator from its JSON literal ``{"states": n, "Q": [[...], ...]}``.

        Raises
        ------
        SpecValidationError
            If ``states`` does not match the size of ``Q``.
        """
        gen = cls(literal['Q'])
        states = literal.get('states')
        if states is not None and states != gen.n_states:
            raise SpecValidationError(f'generator declares {states} states but Q is {gen.n_states}x{gen.n_states}')
        return gen

    def to_literal(self) -> Dict[str, Any]:
        """JSON literal form of the generator."""
        return {'states': self.n_states, 'Q': [[float(x) for x in row] for row in self.rates]}

    @property
    def n_states(self) -> int:
        return int(self.rates.shape[0])

    @cached_property
    def exit_rates(self) -> np.ndarray:
        """``q_i = -Q[i][i]`` for every state."""
        q = -np.diag(self.rates).copy()
        q.setflags(write=False)
        return q

    @cached_property
    def jump_cumulative(self) -> np.ndarray:
        """
        Row-wise cumulative distribution of the embedded jump chain, in
        ascending state order. Rows of absorbing states are all zero.
        """
        n = self.n_states
        cum = np.zeros((n, n))
        for i in range(n):
            qi = self.exit_rates[i]
            if qi <= 0:
                continue
            probs = np.where(np.arange(n) == i, 0.0, self.rates[i] / qi)
            cum[i] = np.cumsum(probs)
        cum.setflags(write=False)
        return cum

    @cached_property
    def stationary(self) -> np.ndarray:
        """Stationary distribution, see :func:`stationary`."""
        return stationary(self)


def as_generator(Q: Union[Generator, ArrayLike]) -> Generator:
    """Return ``Q`` unchanged if it is a :class:`Generator`, else validate and wrap it."""
    if isinstance(Q, Generator):
        return Q
    return Generator(Q)


def stationary(Q: Union[Generator, ArrayLike]) -> np.ndarray:
    """
    Solve ``pi Q = 0`` with ``sum(pi) = 1``.

    The last equation of the redundant system ``Q^T pi = 0`` is replaced by the
    normalization row.

    Raises
    ------
    GeneratorError
        If the linear system is singular (not reachable for a valid generator).
    """
    gen = as_generator(Q)
    n = gen.n_states
    if n == 1:
        pi = np.ones(1)
    else:
        system = gen.rates.T.copy()
        system[-1, :] = 1.0
        rhs = np.zeros(n)
        rhs[-1] = 1.0
        try:
            pi = np.linalg.solve(system, rhs)
        except np.linalg.LinAlgError as e:
            raise GeneratorError(f'stationary distribution system is singular: {e}') from e
        pi = np.clip(pi, 0.0, None)
        pi /= pi.sum()

    logger.debug(f'stationary distribution {pi.tolist()}')
    pi.setflags(write=False)
    return pi


def expected_jump_rate(Q: Union[Generator, ArrayLike], r: float) -> float:
    """Long-run number of jumps per unit time, ``r * sum_i pi_i q_i``."""
    if r <= 0:
        raise ValueError(f'switching rate must be positive, got {r}')
    gen = as_generator(Q)
    return float(r * np.dot(gen.stationary, gen.exit_rates))


def embedded_visit_distribution(Q: Union[Generator, ArrayLike]) -> np.ndarray:
    """
    Long-run fraction of visits (not time) spent in each state:
    ``q_i pi_i / sum_k q_k pi_k``.
    """
    gen = as_generator(Q)
    weights = gen.exit_rates * gen.stationary
    total = weights.sum()
    if total <= 0:
        return np.ones(gen.n_states) / gen.n_states
    return weights / total
