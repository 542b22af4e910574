"""
Unit tests for the named example systems.
"""

import numpy as np
import pytest

from switchstab.constructions import (
    example_fast_only,
    fast_only_system,
    planar_pair,
    planar_pair_relaxed,
    planar_system,
    two_state_generator,
)
from switchstab.exceptions import DomainError
from switchstab.linear_algebra import HurwitzVerdict, eigenvalues, is_hurwitz


class TestExamples:
    def test_two_state_generator(self):
        np.testing.assert_array_equal(two_state_generator().rates, [[-1.0, 1.0], [1.0, -1.0]])

    def test_fast_only(self):
        A0, A1, Q = example_fast_only()
        assert is_hurwitz(A0) is HurwitzVerdict.UNSTABLE
        assert is_hurwitz(A1) is HurwitzVerdict.UNSTABLE
        assert is_hurwitz(0.5 * (A0 + A1)) is HurwitzVerdict.HURWITZ
        with pytest.raises(ValueError):
            A0[0, 0] = 0.0
        assert fast_only_system(rate=3.0).rate == 3.0

    def test_planar_pair(self):
        A0, A1 = planar_pair(0.2, 1.5)
        np.testing.assert_array_equal(A0, [[-0.2, 1.5], [0.0, -0.2]])
        np.testing.assert_array_equal(A1, [[-0.2, 0.0], [-1.5, -0.2]])
        average = eigenvalues(0.5 * (A0 + A1)).eigenvalues
        assert average[0] == pytest.approx(complex(-0.2, 0.75))

    @pytest.mark.parametrize('alpha, c', [(0.0, 1.0), (-0.1, 1.0), (0.1, 0.0), (0.1, -1.0)])
    def test_planar_pair_domain(self, alpha, c):
        with pytest.raises(DomainError):
            planar_pair(alpha, c)

    def test_relaxed_allows_zero_coupling(self):
        A0, A1 = planar_pair_relaxed(0.3, 0.0)
        np.testing.assert_array_equal(A0, -0.3 * np.eye(2))
        np.testing.assert_array_equal(A1, -0.3 * np.eye(2))

    def test_planar_system(self):
        system = planar_system(0.1, 2.0, rate=5.0)
        assert system.n_states == 2 and system.dim == 2
        assert system.rate == 5.0
