"""Dense small-matrix linear algebra."""

from .square_matrix import as_square_matrix, matrix_from_literal, matrix_to_literal
from .spectral import (
    HurwitzVerdict,
    Spectrum,
    average_matrix,
    commute,
    convex_combination_scan,
    eigenvalues,
    is_hurwitz,
    is_normal,
    operator_norm,
    spectral_abscissa,
)
from .matrix_exponential import mat_exp

__all__ = [
    'as_square_matrix',
    'matrix_from_literal',
    'matrix_to_literal',
    'HurwitzVerdict',
    'Spectrum',
    'average_matrix',
    'commute',
    'convex_combination_scan',
    'eigenvalues',
    'is_hurwitz',
    'is_normal',
    'operator_norm',
    'spectral_abscissa',
    'mat_exp',
]
