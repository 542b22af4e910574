"""
Block-diagonal systems with ``k`` prescribed instability windows.

Block ``i`` (counting from 0) is the planar pair with rates
``(alpha_1, c_1) / N^i``, so its window is the first window divided by
``N^i``. Choosing ``N > b_1/a_1`` keeps consecutive windows disjoint.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import block_diag

from switchstab.exceptions import DomainError, NoWindow, ScaleTooSmall, ScaleUnderflow
from switchstab.planar_analysis import DEFAULT_TOL, PlanarParams, find_window, lyapunov_analytic
from switchstab.switched_simulator import SwitchedSystem
from switchstab.constructions.examples import planar_pair, two_state_generator

logger = logging.getLogger(__name__)

MIN_COUPLING = 1e-6


@dataclass(frozen=True)
class MultiSystemSpec:
    """
    Base block parameters and scale factor of a multi-window system.

    Attributes
    ----------
    k : int
        Number of blocks.
    alpha1, c1 : float
        Rates of the first (fastest) block.
    r1, a1, b1 : float
        Peak rate and window edges of the first block, ``a1 < r1 < b1``.
    N : float
        Scale factor between consecutive blocks, ``N > b1/a1``.
    """

    k: int
    alpha1: float
    c1: float
    r1: float
    a1: float
    b1: float
    N: float

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise DomainError(f'k must be a positive integer, got {self.k!r}')
        for name in ('alpha1', 'c1', 'r1', 'a1', 'b1'):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f'{name} must be positive and finite, got {value}')
        if not self.a1 < self.r1 < self.b1:
            raise DomainError(f'need a1 < r1 < b1, got ({self.a1}, {self.r1}, {self.b1})')
        if not self.N > self.b1 / self.a1:
            raise ScaleTooSmall(f'N must exceed b1/a1 = {self.b1 / self.a1:g} for disjoint windows, got {self.N}')
        smallest = self.c1 / self.N ** (self.k - 1)
        if smallest < MIN_COUPLING:
            raise ScaleUnderflow(f'coupling of block {self.k} is {smallest:g} < {MIN_COUPLING:g}; reduce k or N')

    def scale(self, i: int) -> float:
        """``N^i`` for block ``i`` (0-based)."""
        if not 0 <= i < self.k:
            raise IndexError(f'block {i} out of range for k={self.k}')
        return float(self.N) ** i

    def block_params(self, i: int) -> PlanarParams:
        return PlanarParams(self.alpha1, self.c1).scaled(self.scale(i))

    @property
    def windows(self) -> List[Tuple[float, float, float]]:
        """``(a_i, b_i, r_i)`` per block, moving left with the block index."""
        return [(self.a1 / self.scale(i), self.b1 / self.scale(i), self.r1 / self.scale(i)) for i in range(self.k)]

    def windows_report(self) -> dict:
        return {
            'windows': [{'a': a, 'b': b, 'r_star': r} for a, b, r in self.windows],
            'N': float(self.N),
        }


def multi_transition(
    k: int,
    alpha1: float,
    c1: float,
    N: Optional[float] = None,
    tol: float = DEFAULT_TOL,
    r1: Optional[float] = None,
    a1: Optional[float] = None,
    b1: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray, MultiSystemSpec]:
    """
    Assemble the ``2k x 2k`` block-diagonal pair.

    When ``r1, a1, b1`` are omitted the first window is located with
    :func:`~switchstab.planar_analysis.find_window`. ``N`` defaults to
    ``2 b1/a1``.

    Raises
    ------
    NoWindow
        If the first block has no instability window.
    ScaleTooSmall
        If ``N <= b1/a1``.
    ScaleUnderflow
        If the smallest coupling drops below ``1e-6``.
    """
    given = [value is not None for value in (r1, a1, b1)]
    if any(given) and not all(given):
        raise DomainError('r1, a1 and b1 must be given together or not at all')
    if not all(given):
        window = find_window(PlanarParams(alpha1, c1), tol)
        if window is None:
            raise NoWindow(f'alpha1={alpha1:g} exceeds c1 * sup G for c1={c1:g}; the planar pair has no window')
        r1, a1, b1 = window.r_star, window.a, window.b
    if N is None:
        N = 2.0 * b1 / a1

    spec = MultiSystemSpec(k=int(k), alpha1=float(alpha1), c1=float(c1), r1=r1, a1=a1, b1=b1, N=float(N))
    pairs = [planar_pair(p.alpha, p.c) for p in (spec.block_params(i) for i in range(spec.k))]
    A0 = block_diag(*(pair[0] for pair in pairs))
    A1 = block_diag(*(pair[1] for pair in pairs))
    A0.setflags(write=False)
    A1.setflags(write=False)
    logger.info(f'built {2 * spec.k}x{2 * spec.k} system with N={spec.N:g}')
    return A0, A1, spec


def multi_system(spec: MultiSystemSpec, rate: float = 1.0) -> SwitchedSystem:
    """The block system of ``spec`` switched by the symmetric two-state chain."""
    A0, A1, _ = multi_transition(
        spec.k, spec.alpha1, spec.c1, spec.N, r1=spec.r1, a1=spec.a1, b1=spec.b1
    )
    return SwitchedSystem((A0, A1), two_state_generator(), rate)


def block_lyapunov(spec: MultiSystemSpec, r: float, tol: float = DEFAULT_TOL) -> float:
    """Top exponent of the block system: the largest block exponent at rate ``r``."""
    return max(lyapunov_analytic(spec.block_params(i), r, tol) for i in range(spec.k))
