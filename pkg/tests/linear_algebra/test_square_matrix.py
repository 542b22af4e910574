"""
Unit tests for switchstab.linear_algebra.square_matrix.
"""

import numpy as np
import pytest

from switchstab.exceptions import DimensionMismatchError, NonFiniteMatrixError, SpecValidationError
from switchstab.linear_algebra import as_square_matrix, matrix_from_literal, matrix_to_literal


class TestSquareMatrix:
    def test_as_square_matrix_copies_and_freezes(self):
        source = [[1, 2], [3, 4]]
        A = as_square_matrix(source)
        assert A.dtype == np.float64
        assert not A.flags.writeable

    @pytest.mark.parametrize('bad', [[], [[1.0, 2.0]], [[[1.0]]], [[1.0, 2.0], [3.0]]])
    def test_rejects_non_square(self, bad):
        with pytest.raises(DimensionMismatchError):
            as_square_matrix(bad)

    def test_rejects_infinite(self):
        with pytest.raises(NonFiniteMatrixError):
            as_square_matrix([[np.inf]])

    def test_literal(self):
        A = matrix_from_literal({'dim': 2, 'rows': [[-1.0, 4.0], [0.0, -1.0]]})
        assert matrix_to_literal(A) == {'dim': 2, 'rows': [[-1.0, 4.0], [0.0, -1.0]]}

    def test_literal_dim_mismatch(self):
        with pytest.raises(SpecValidationError, match='declared dim 3'):
            matrix_from_literal({'dim': 3, 'rows': [[1.0, 0.0], [0.0, 1.0]]})
