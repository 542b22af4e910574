"""
Validation and (de)serialization of dense square matrices.

Matrices are plain read-only ``numpy.ndarray`` objects of dtype float64. The
JSON literal form is ``{"dim": d, "rows": [[...], ...]}``.
"""

from typing import Any, Dict, Sequence

import numpy as np
from numpy.typing import ArrayLike

from switchstab.exceptions import DimensionMismatchError, NonFiniteMatrixError, SpecValidationError


def as_square_matrix(A: ArrayLike, name: str = 'matrix') -> np.ndarray:
    """
    Convert ``A`` into a validated, read-only float64 square matrix.

    Parameters
    ----------
    A : array_like
        Nested sequence or array of shape (d, d), d >= 1.
    name : str
        Label used in error messages.

    Returns
    -------
    np.ndarray
        A read-only copy of ``A``.

    Raises
    ------
    DimensionMismatchError
        If ``A`` is not a non-empty two-dimensional square array.
    NonFiniteMatrixError
        If ``A`` contains NaN or infinite entries.
    """
    try:
        arr = np.array(A, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise DimensionMismatchError(f'{name} is not a rectangular array of real numbers: {e}') from e

    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatchError(f'{name} must be a non-empty square matrix, got shape {arr.shape}')
    if not np.all(np.isfinite(arr)):
        raise NonFiniteMatrixError(f'{name} contains NaN or infinite entries')

    arr.setflags(write=False)
    return arr


def require_same_dim(matrices: Sequence[np.ndarray]) -> int:
    """Return the common dimension of ``matrices`` or raise ``DimensionMismatchError``."""
    dims = {m.shape[0] for m in matrices}
    if len(dims) != 1:
        raise DimensionMismatchError(f'matrices have different dimensions: {sorted(dims)}')
    return dims.pop()


def matrix_from_literal(literal: Dict[str, Any], name: str = 'matrix') -> np.ndarray:
    """
    Build a matrix from its JSON literal ``{"dim": d, "rows": [...]}``.

    Raises
    ------
    SpecValidationError
        If ``dim`` does not match the shape of ``rows``.
    """
    rows = literal.get('rows')
    dim = literal.get('dim')
    A = as_square_matrix(rows, name=name)
    if dim is not None and A.shape[0] != dim:
        raise SpecValidationError(f'{name}: declared dim {dim} but rows describe a {A.shape[0]}x{A.shape[1]} matrix')
    return A


def matrix_to_literal(A: np.ndarray) -> Dict[str, Any]:
    """Serialize a matrix to its JSON literal form."""
    A = np.asarray(A, dtype=np.float64)
    return {'dim': int(A.shape[0]), 'rows': [[float(x) for x in row] for row in A]}
