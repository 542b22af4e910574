"""
Unit tests for switchstab.markov_chain.jump_path.
"""

import math

import numpy as np
import pytest

from switchstab.exceptions import EmptyHorizonError, GeneratorError
from switchstab.markov_chain import (
    JumpPath,
    expected_jump_rate,
    mean_holding_times,
    occupation_fractions,
    sample_path,
    stationary,
    visit_fractions,
)

SYMMETRIC_Q = [[-1.0, 1.0], [1.0, -1.0]]
ASYMMETRIC_Q = [[-2.0, 2.0], [1.0, -1.0]]


@pytest.fixture
def small_path():
    return JumpPath(states=[0, 1, 0], holding_times=[1.0, 2.0], horizon=3.5, residual=0.5)


class TestJumpPath:
    """Structure and invariants of a hand-built path."""

    def test_accessors(self, small_path):
        assert small_path.initial_state == 0
        assert small_path.final_state == 0
        assert small_path.jump_count == 2
        np.testing.assert_array_equal(small_path.jump_times(), [1.0, 3.0])

    def test_state_at(self, small_path):
        assert small_path.state_at(0.0) == 0
        assert small_path.state_at(0.99) == 0
        assert small_path.state_at(1.0) == 1
        assert small_path.state_at(3.2) == 0
        with pytest.raises(ValueError):
            small_path.state_at(4.0)

    def test_rejects_inconsistent_horizon(self):
        with pytest.raises(ValueError, match='horizon'):
            JumpPath(states=[0, 1], holding_times=[1.0], horizon=3.0, residual=0.5)

    def test_rejects_repeated_state(self):
        with pytest.raises(ValueError):
            JumpPath(states=[0, 0], holding_times=[1.0], horizon=1.5, residual=0.5)

    def test_validate_against_generator(self, small_path):
        small_path.validate(SYMMETRIC_Q)
        three_state = [[-1.0, 0.0, 1.0], [1.0, -1.0, 0.0], [0.0, 1.0, -1.0]]
        with pytest.raises(GeneratorError, match='0 -> 1'):
            small_path.validate(three_state)

    def test_split(self, small_path):
        left, right = small_path.split(2.0)
        assert left.horizon == 2.0 and right.horizon == 1.5
        np.testing.assert_array_equal(left.states, [0, 1])
        assert left.residual == pytest.approx(1.0)
        np.testing.assert_array_equal(right.states, [1, 0])
        np.testing.assert_allclose(right.holding_times, [1.0])
        assert right.residual == pytest.approx(0.5)

    def test_split_inside_residual(self, small_path):
        left, right = small_path.split(3.25)
        assert left.jump_count == 2 and left.residual == pytest.approx(0.25)
        assert right.jump_count == 0 and right.residual == pytest.approx(0.25)

    def test_refine(self, small_path):
        states, durations, marks = small_path.refine([0.5, 1.0, 2.5, 3.5])
        np.testing.assert_array_equal(states, [0, 0, 1, 1, 0])
        np.testing.assert_allclose(durations, [0.5, 0.5, 1.5, 0.5, 0.5])
        np.testing.assert_array_equal(marks, [0, 1, 2, 4])

    def test_refine_rejects_unsorted(self, small_path):
        with pytest.raises(ValueError):
            small_path.refine([2.0, 1.0])

    def test_to_frame_last_row_is_residual(self, small_path):
        frame = small_path.to_frame()
        assert list(frame.columns) == ['k', 'state', 'holding_time']
        assert frame['k'].tolist() == [1, 2, 3]
        assert frame['holding_time'].iloc[-1] == 0.5


class TestSamplePath:
    """Sampling of the switching signal."""

    def test_horizon_identity(self):
        path = sample_path(ASYMMETRIC_Q, r=3.0, i0=1, T=50.0, seed=4)
        assert path.initial_state == 1
        assert math.fsum(path.holding_times) + path.residual == pytest.approx(50.0, abs=1e-9)
        path.validate(ASYMMETRIC_Q)

    def test_deterministic(self):
        a = sample_path(SYMMETRIC_Q, 2.0, 0, 100.0, seed=11, replica=2)
        b = sample_path(SYMMETRIC_Q, 2.0, 0, 100.0, seed=11, replica=2)
        np.testing.assert_array_equal(a.states, b.states)
        np.testing.assert_array_equal(a.holding_times, b.holding_times)
        c = sample_path(SYMMETRIC_Q, 2.0, 0, 100.0, seed=12, replica=2)
        assert not np.array_equal(a.holding_times, c.holding_times)

    def test_zero_horizon(self):
        path = sample_path(SYMMETRIC_Q, 1.0, 1, 0.0)
        assert path.jump_count == 0
        assert path.residual == 0.0
        with pytest.raises(EmptyHorizonError):
            occupation_fractions(path)

    def test_absorbing_single_state(self):
        path = sample_path([[0.0]], 5.0, 0, 10.0)
        assert path.jump_count == 0
        assert path.residual == 10.0

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            sample_path(SYMMETRIC_Q, 0.0, 0, 1.0)
        with pytest.raises(ValueError):
            sample_path(SYMMETRIC_Q, 1.0, 2, 1.0)
        with pytest.raises(ValueError):
            sample_path(SYMMETRIC_Q, 1.0, 0, -1.0)

    def test_high_rate_grows_buffer(self):
        path = sample_path(SYMMETRIC_Q, 1000.0, 0, 20.0, seed=1)
        assert path.jump_count == pytest.approx(20000, rel=0.05)

    def test_long_run_statistics(self):
        path = sample_path(ASYMMETRIC_Q, 1.0, 0, 20000.0, seed=5)
        np.testing.assert_allclose(occupation_fractions(path, 2), [1.0 / 3.0, 2.0 / 3.0], atol=0.02)
        np.testing.assert_allclose(mean_holding_times(path, 2), [0.5, 1.0], rtol=0.05)
        np.testing.assert_allclose(visit_fractions(path, 2), [0.5, 0.5], atol=0.01)


def _mean_stderr(values):
    values = np.asarray(values)
    return values.mean(axis=0), values.std(axis=0, ddof=1) / math.sqrt(values.shape[0])


class TestLongRunAverages:
    """Jump rates and occupation fractions averaged over independent seeds."""

    def test_symmetric_jump_rate(self):
        rates = [sample_path(SYMMETRIC_Q, 5.0, seed % 2, 1000.0, seed=seed).jump_count / 1000.0 for seed in range(100)]
        mean, stderr = _mean_stderr(rates)
        assert expected_jump_rate(SYMMETRIC_Q, 5.0) == pytest.approx(5.0)
        assert abs(mean - 5.0) < 3 * stderr

    def test_asymmetric_jump_rate_and_occupation(self):
        # r T sum(pi q) = 4000 / 3 jumps per path
        paths = [sample_path(ASYMMETRIC_Q, 1.0, seed % 2, 1000.0, seed=seed) for seed in range(200)]
        mean, stderr = _mean_stderr([path.jump_count / 1000.0 for path in paths])
        assert abs(mean - expected_jump_rate(ASYMMETRIC_Q, 1.0)) < 4 * stderr

        fractions, stderrs = _mean_stderr([occupation_fractions(path, 2) for path in paths])
        pi = stationary(ASYMMETRIC_Q)
        np.testing.assert_allclose(pi, [1.0 / 3.0, 2.0 / 3.0], rtol=1e-12)
        assert np.all(np.abs(fractions - pi) < 4 * stderrs)
