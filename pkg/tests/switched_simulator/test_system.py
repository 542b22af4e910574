"""
Unit tests for switchstab.switched_simulator.system.
"""

import numpy as np
import pytest

from switchstab.constructions import fast_only_system, planar_system
from switchstab.exceptions import InvalidSystemError
from switchstab.switched_simulator import SwitchedSystem, make_system, stability_hypotheses

SYMMETRIC_Q = [[-1.0, 1.0], [1.0, -1.0]]


class TestSwitchedSystem:
    """Construction invariants of the switched system."""

    def test_basic_properties(self):
        system = make_system([np.diag([-1.0, -2.0]), [[0.0, 4.0], [0.0, 0.0]]], SYMMETRIC_Q, rate=2.0)
        assert system.dim == 2
        assert system.n_states == 2
        assert system.rate == 2.0
        assert system.bound == pytest.approx(4.0)
        np.testing.assert_allclose(system.norms, [2.0, 4.0])
        assert system.stacked.shape == (2, 2, 2)

    def test_matrix_count_must_match_generator(self):
        with pytest.raises(InvalidSystemError, match='3 matrices'):
            make_system([np.eye(2)] * 3, SYMMETRIC_Q)

    def test_mixed_dimensions(self):
        with pytest.raises(InvalidSystemError, match='different dimensions'):
            make_system([np.eye(2), np.eye(3)], SYMMETRIC_Q)

    @pytest.mark.parametrize('rate', [0.0, -1.0, np.inf, np.nan])
    def test_rate_must_be_positive(self, rate):
        with pytest.raises(InvalidSystemError):
            make_system([np.eye(2), np.eye(2)], SYMMETRIC_Q, rate)

    def test_invalid_generator_is_wrapped(self):
        with pytest.raises(InvalidSystemError):
            make_system([np.eye(2), np.eye(2)], [[-1.0, 2.0], [1.0, -1.0]])

    def test_average_uses_stationary_weights(self):
        system = make_system([np.diag([1.0, 0.0]), np.diag([-2.0, 0.0])], [[-2.0, 2.0], [1.0, -1.0]])
        np.testing.assert_allclose(system.average, np.diag([-1.0, 0.0]))

    def test_with_rate_and_single(self):
        system = planar_system(0.1, 1.0, rate=1.0)
        faster = system.with_rate(50.0)
        assert faster.rate == 50.0
        assert faster.generator is system.generator
        single = SwitchedSystem.single([[-1.0]])
        assert single.n_states == 1 and single.dim == 1


class TestStabilityHypotheses:
    """Sufficient conditions reported for the named families."""

    def test_planar_pair(self):
        report = stability_hypotheses(planar_system(0.05, 1.0))
        assert report['hurwitz'] == ['Hurwitz', 'Hurwitz']
        assert report['all_hurwitz'] and report['average_hurwitz']
        assert not report['commuting']
        assert not report['normal_hurwitz']
        np.testing.assert_allclose(report['average'], [[-0.05, 0.5], [-0.5, -0.05]])

    def test_fast_only(self):
        report = stability_hypotheses(fast_only_system())
        assert report['hurwitz'] == ['Unstable', 'Unstable']
        assert not report['all_hurwitz']
        assert report['average_hurwitz']
        assert report['average_verdict'] == 'Hurwitz'

    def test_commuting_diagonal_pair(self):
        report = stability_hypotheses(make_system([np.diag([1.0, -2.0]), np.diag([-2.0, 1.0])], SYMMETRIC_Q))
        assert report['commuting'] and report['commuting_stable']
        assert report['commute'] == {'0,1': True}

    def test_normal_hurwitz_pair(self):
        report = stability_hypotheses(
            make_system([[[-1.0, 2.0], [-2.0, -1.0]], np.diag([-0.5, -3.0])], SYMMETRIC_Q)
        )
        assert report['normal'] == [True, True]
        assert report['normal_hurwitz']
