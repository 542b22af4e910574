"""Named example systems."""

import math
from typing import Tuple

import numpy as np

from switchstab.exceptions import DomainError
from switchstab.markov_chain import Generator
from switchstab.switched_simulator import SwitchedSystem

TWO_STATE_Q = ((-1.0, 1.0), (1.0, -1.0))


def _frozen(A) -> np.ndarray:
    A = np.array(A, dtype=np.float64)
    A.setflags(write=False)
    return A


def two_state_generator() -> Generator:
    """Symmetric two-state generator ``[[-1, 1], [1, -1]]``."""
    return Generator(np.array(TWO_STATE_Q))


def example_fast_only() -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Two matrices with a positive eigenvalue each whose average is Hurwitz.

    Fast switching stabilizes it through the averaged matrix. Under slow
    switching the exponent also tends to -1/2, from above.
    """
    A0 = _frozen([[1.0, 4.0], [0.0, -2.0]])
    A1 = _frozen([[-2.0, 0.0], [0.0, 1.0]])
    return A0, A1, _frozen(TWO_STATE_Q)


def planar_pair_relaxed(alpha: float, c: float) -> Tuple[np.ndarray, np.ndarray]:
    """:func:`planar_pair` allowing ``c = 0``, where both matrices equal ``-alpha I``."""
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError(f'alpha must be positive and finite, got {alpha}')
    if not (c >= 0 and math.isfinite(c)):
        raise DomainError(f'c must be nonnegative and finite, got {c}')
    A0 = _frozen([[-alpha, c], [0.0, -alpha]])
    A1 = _frozen([[-alpha, 0.0], [-c, -alpha]])
    return A0, A1


def planar_pair(alpha: float, c: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    ``A_0 = [[-alpha, c], [0, -alpha]]`` and ``A_1 = [[-alpha, 0], [-c, -alpha]]``.

    Both are Hurwitz with the double eigenvalue ``-alpha``; their average has
    eigenvalues ``-alpha +/- i c/2``.

    Raises
    ------
    DomainError
        If ``alpha`` or ``c`` is not positive.
    """
    if not (c > 0):
        raise DomainError(f'c must be positive, got {c}; use planar_pair_relaxed for c = 0')
    return planar_pair_relaxed(alpha, c)


def fast_only_system(rate: float = 1.0) -> SwitchedSystem:
    A0, A1, Q = example_fast_only()
    return SwitchedSystem((A0, A1), Generator(Q), rate)


def planar_system(alpha: float, c: float, rate: float = 1.0) -> SwitchedSystem:
    """Planar pair switched by the symmetric two-state chain at ``rate``."""
    return SwitchedSystem(planar_pair(alpha, c), two_state_generator(), rate)
