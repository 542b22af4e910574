"""
The switched linear system ``dX/dt = A_{I_t} X`` driven by a chain with generator ``r Q``.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Any, Dict, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike

from switchstab.exceptions import DimensionMismatchError, GeneratorError, InvalidSystemError, NonFiniteMatrixError
from switchstab.linear_algebra import (
    HurwitzVerdict,
    as_square_matrix,
    average_matrix,
    commute,
    is_hurwitz,
    is_normal,
    operator_norm,
)
from switchstab.markov_chain import Generator, as_generator

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SwitchedSystem:
    """
    Matrices ``A_0, ..., A_{n-1}``, one per chain state, with a generator and a switching rate.

    Attributes
    ----------
    matrices : tuple of np.ndarray
        Read-only ``d x d`` matrices.
    generator : Generator
        Validated generator ``Q`` with ``n`` states.
    rate : float
        Switching rate ``r > 0``.
    """

    matrices: Tuple[np.ndarray, ...] = field(repr=False)
    generator: Generator = field(repr=False)
    rate: float = 1.0

    def __post_init__(self):
        try:
            mats = tuple(as_square_matrix(m, name=f'A[{i}]') for i, m in enumerate(self.matrices))
            gen = as_generator(self.generator)
        except (DimensionMismatchError, NonFiniteMatrixError, GeneratorError) as e:
            raise InvalidSystemError(f'invalid switched system: {e}') from e

        if len(mats) != gen.n_states:
            raise InvalidSystemError(f'{len(mats)} matrices given for a generator with {gen.n_states} states')
        dims = {m.shape[0] for m in mats}
        if len(dims) != 1:
            raise InvalidSystemError(f'matrices have different dimensions: {sorted(dims)}')
        rate = float(self.rate)
        if not np.isfinite(rate) or rate <= 0:
            raise InvalidSystemError(f'switching rate must be positive and finite, got {self.rate!r}')

        object.__setattr__(self, 'matrices', mats)
        object.__setattr__(self, 'generator', gen)
        object.__setattr__(self, 'rate', rate)

    def __repr__(self) -> str:
        return f'SwitchedSystem(n_states={self.n_states}, dim={self.dim}, rate={self.rate})'

    @property
    def dim(self) -> int:
        return int(self.matrices[0].shape[0])

    @property
    def n_states(self) -> int:
        return len(self.matrices)

    @cached_property
    def bound(self) -> float:
        """``Lambda = max_i ||A_i||`` in the spectral norm."""
        return max(operator_norm(m) for m in self.matrices)

    @cached_property
    def norms(self) -> np.ndarray:
        """Spectral norm of every matrix."""
        return np.array([operator_norm(m) for m in self.matrices])

    @cached_property
    def stationary(self) -> np.ndarray:
        return self.generator.stationary

    @cached_property
    def average(self) -> np.ndarray:
        """``A_bar = sum_i pi_i A_i``."""
        return average_matrix(self.matrices, self.stationary)

    @cached_property
    def stacked(self) -> np.ndarray:
        """Contiguous ``(n, d, d)`` array of the matrices for compiled kernels."""
        return np.ascontiguousarray(np.stack(self.matrices))

    def with_rate(self, rate: float) -> 'SwitchedSystem':
        """The same matrices and generator at another switching rate."""
        return SwitchedSystem(self.matrices, self.generator, rate)

    @classmethod
    def single(cls, A: ArrayLike, rate: float = 1.0) -> 'SwitchedSystem':
        """A system that never switches: one matrix with the 1x1 zero generator."""
        return cls((A,), Generator([[0.0]]), rate)


def make_system(
    matrices: Sequence[ArrayLike], Q: Union[Generator, ArrayLike], rate: float = 1.0
) -> SwitchedSystem:
    """Build a :class:`SwitchedSystem`, raising ``InvalidSystemError`` on any violated invariant."""
    return SwitchedSystem(tuple(matrices), Q, rate)


def stability_hypotheses(system: SwitchedSystem, tol: float = 1e-10) -> Dict[str, Any]:
    """
    Report which sufficient stability conditions the system satisfies.

    Returns
    -------
    dict
        Per-matrix verdicts plus the flags

        - ``normal_hurwitz``: every ``A_i`` normal and Hurwitz, so ``||X_t||``
          decreases monotonically to 0 for every rate
        - ``commuting``: the matrices commute pairwise
        - ``commuting_stable``: commuting with Hurwitz average, stable for every rate
        - ``all_hurwitz``: every ``A_i`` Hurwitz, stable for slow switching
        - ``average_hurwitz``: ``A_bar`` Hurwitz, stable for fast switching
    """
    verdicts = [is_hurwitz(m, tol) for m in system.matrices]
    normal = [is_normal(m, tol) for m in system.matrices]
    pairs = {
        f'{i},{j}': commute(system.matrices[i], system.matrices[j], tol)
        for i, j in combinations(range(system.n_states), 2)
    }
    commuting = all(pairs.values())
    average_verdict = is_hurwitz(system.average, tol)
    all_hurwitz = all(v is HurwitzVerdict.HURWITZ for v in verdicts)
    average_hurwitz = average_verdict is HurwitzVerdict.HURWITZ

    report = {
        'hurwitz': [v.value for v in verdicts],
        'normal': normal,
        'commute': pairs,
        'stationary': system.stationary.tolist(),
        'average': system.average.tolist(),
        'average_verdict': average_verdict.value,
        'normal_hurwitz': all_hurwitz and all(normal),
        'commuting': commuting,
        'commuting_stable': commuting and average_hurwitz,
        'all_hurwitz': all_hurwitz,
        'average_hurwitz': average_hurwitz,
    }
    if commuting and all_hurwitz and not average_hurwitz:
        # Commuting Hurwitz matrices always have a Hurwitz average.
        logger.warning('commuting Hurwitz family with non-Hurwitz average; check tolerances')
    return report
