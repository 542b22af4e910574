"""
Spectral predicates for small dense matrices: eigenvalues, Hurwitz
classification, normality, commutation, operator norm and averaging.

Every function takes matrices in any array-like form and validates them with
:func:`switchstab.linear_algebra.square_matrix.as_square_matrix`.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from switchstab.exceptions import DimensionMismatchError, EigenSolverError, InvalidWeightsError
from switchstab.linear_algebra.square_matrix import as_square_matrix, require_same_dim

logger = logging.getLogger(__name__)

HURWITZ_TOL = 1e-10
WEIGHT_TOL = 1e-12


class HurwitzVerdict(str, Enum):
    """Outcome of :func:`is_hurwitz`."""

    HURWITZ = 'Hurwitz'
    MARGINAL = 'Marginal'
    UNSTABLE = 'Unstable'


@dataclass(frozen=True)
class Spectrum:
    """
    Eigenvalues of a real square matrix, with multiplicity.

    Attributes
    ----------
    eigenvalues : tuple of complex
        Sorted by decreasing real part, then decreasing imaginary part.
    """

    eigenvalues: Tuple[complex, ...]

    def __post_init__(self):
        if len(self.eigenvalues) == 0:
            raise ValueError('a spectrum needs at least one eigenvalue')

    @property
    def spectral_abscissa(self) -> float:
        """Largest real part of the eigenvalues."""
        return max(ev.real for ev in self.eigenvalues)

    def __len__(self) -> int:
        return len(self.eigenvalues)


def _eigenvalues_2x2(a: float, b: float, c: float, d: float) -> Tuple[complex, complex]:
    # Half-trace and the discriminant of the shifted matrix avoid tr^2 - 4 det.
    half_trace = 0.5 * (a + d)
    half_gap = 0.5 * (a - d)
    disc = half_gap * half_gap + b * c
    if disc >= 0.0:
        root = math.sqrt(disc)
        big = half_trace + math.copysign(root, half_trace)
        det = a * d - b * c
        small = det / big if big != 0.0 else half_trace - math.copysign(root, half_trace)
        return complex(big), complex(small)
    root = math.sqrt(-disc)
    return complex(half_trace, root), complex(half_trace, -root)


def eigenvalues(A: ArrayLike) -> Spectrum:
    """
    Compute all eigenvalues of ``A``.

    2x2 matrices use the closed-form quadratic; larger ones the LAPACK
    Hessenberg-QR solver behind :func:`numpy.linalg.eigvals`.

    Raises
    ------
    EigenSolverError
        If the iterative solver does not converge.
    """
    A = as_square_matrix(A)
    d = A.shape[0]
    if d == 1:
        values = [complex(A[0, 0])]
    elif d == 2:
        values = list(_eigenvalues_2x2(A[0, 0], A[0, 1], A[1, 0], A[1, 1]))
    else:
        try:
            values = [complex(v) for v in np.linalg.eigvals(A)]
        except np.linalg.LinAlgError as e:
            raise EigenSolverError(f'eigenvalue iteration did not converge for a {d}x{d} matrix: {e}') from e
        # LAPACK returns exact conjugate pairs; snap tiny imaginary parts of real eigenvalues.
        values = [complex(v.real, 0.0) if abs(v.imag) <= 1e-14 * max(1.0, abs(v)) else v for v in values]

    values.sort(key=lambda z: (-z.real, -z.imag))
    return Spectrum(tuple(values))


def spectral_abscissa(A: ArrayLike) -> float:
    """Largest real part of the eigenvalues of ``A``."""
    return eigenvalues(A).spectral_abscissa


def is_hurwitz(A: ArrayLike, tol: float = HURWITZ_TOL) -> HurwitzVerdict:
    """
    Classify ``A`` by the sign of its spectral abscissa.

    Returns ``HURWITZ`` if the abscissa is below ``-tol``, ``UNSTABLE`` if it is
    above ``+tol`` and ``MARGINAL`` otherwise.
    """
    if tol < 0:
        raise ValueError(f'tol must be nonnegative, got {tol}')
    abscissa = spectral_abscissa(A)
    if abscissa < -tol:
        return HurwitzVerdict.HURWITZ
    if abscissa > tol:
        return HurwitzVerdict.UNSTABLE
    return HurwitzVerdict.MARGINAL


def is_normal(A: ArrayLike, tol: float = HURWITZ_TOL) -> bool:
    """True iff ``||A A^T - A^T A||_F <= tol (1 + ||A||_F^2)``."""
    if tol < 0:
        raise ValueError(f'tol must be nonnegative, got {tol}')
    A = as_square_matrix(A)
    commutator = A @ A.T - A.T @ A
    scale = 1.0 + np.linalg.norm(A, 'fro') ** 2
    return bool(np.linalg.norm(commutator, 'fro') <= tol * scale)


def commute(A: ArrayLike, B: ArrayLike, tol: float = HURWITZ_TOL) -> bool:
    """
    True iff ``||AB - BA||_F <= tol (1 + ||A||_F ||B||_F)``.

    Raises
    ------
    DimensionMismatchError
        If ``A`` and ``B`` have different dimensions.
    """
    if tol < 0:
        raise ValueError(f'tol must be nonnegative, got {tol}')
    A = as_square_matrix(A, name='A')
    B = as_square_matrix(B, name='B')
    if A.shape != B.shape:
        raise DimensionMismatchError(f'cannot commute a {A.shape} matrix with a {B.shape} matrix')
    scale = 1.0 + np.linalg.norm(A, 'fro') * np.linalg.norm(B, 'fro')
    return bool(np.linalg.norm(A @ B - B @ A, 'fro') <= tol * scale)


def operator_norm(A: ArrayLike) -> float:
    """Spectral norm (largest singular value) of ``A``."""
    A = as_square_matrix(A)
    return float(np.linalg.norm(A, 2))


def average_matrix(matrices: Sequence[ArrayLike], weights: ArrayLike) -> np.ndarray:
    """
    Weighted average ``sum_i w_i A_i``.

    Raises
    ------
    InvalidWeightsError
        If ``weights`` is not a probability vector of matching length.
    DimensionMismatchError
        If the matrices do not share a dimension.
    """
    mats = [as_square_matrix(m, name=f'A[{i}]') for i, m in enumerate(matrices)]
    if not mats:
        raise DimensionMismatchError('average_matrix needs at least one matrix')
    require_same_dim(mats)

    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.shape[0] != len(mats):
        raise InvalidWeightsError(f'expected {len(mats)} weights, got shape {w.shape}')
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise InvalidWeightsError(f'weights must be finite and nonnegative, got {w.tolist()}')
    if abs(w.sum() - 1.0) > WEIGHT_TOL:
        raise InvalidWeightsError(f'weights must sum to 1, got {w.sum()!r}')

    avg = np.zeros_like(mats[0])
    for wi, m in zip(w, mats):
        avg += wi * m
    avg.setflags(write=False)
    return avg


def convex_combination_scan(A0: ArrayLike, A1: ArrayLike, points: int = 101) -> dict:
    """
    Spectral abscissa of ``s A0 + (1 - s) A1`` on a uniform grid ``s`` in [0, 1].

    Returns
    -------
    dict
        ``weights`` and ``abscissae`` lists plus ``all_hurwitz`` and the
        worst (largest) abscissa with its weight.
    """
    if points < 2:
        raise ValueError(f'points must be at least 2, got {points}')
    A0 = as_square_matrix(A0, name='A0')
    A1 = as_square_matrix(A1, name='A1')
    require_same_dim([A0, A1])

    weights = np.linspace(0.0, 1.0, points)
    abscissae = [spectral_abscissa(s * A0 + (1.0 - s) * A1) for s in weights]
    worst = int(np.argmax(abscissae))
    return {
        'weights': weights.tolist(),
        'abscissae': abscissae,
        'all_hurwitz': bool(max(abscissae) < -HURWITZ_TOL),
        'worst_weight': float(weights[worst]),
        'worst_abscissa': float(abscissae[worst]),
    }


def conjugate_closed(spectrum: Spectrum, tol: float = 1e-8) -> bool:
    """True iff every eigenvalue has its conjugate in ``spectrum`` within ``tol``."""
    values = list(spectrum.eigenvalues)
    for z in values:
        if not any(cmath.isclose(z.conjugate(), w, abs_tol=tol) for w in values):
            return False
    return True
