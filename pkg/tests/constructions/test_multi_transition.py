"""
Tests for the block-diagonal multi-window construction.
"""

import math

import numpy as np
import pytest

from switchstab.constructions import MultiSystemSpec, block_lyapunov, multi_system, multi_transition
from switchstab.exceptions import DomainError, NoWindow, ScaleTooSmall, ScaleUnderflow
from switchstab.linear_algebra import HurwitzVerdict, average_matrix, is_hurwitz
from switchstab.planar_analysis import lyapunov_analytic, sup_G
from switchstab.switched_simulator import lyapunov_mc

EDGES = {'r1': 1.0, 'a1': 0.5, 'b1': 2.0}


def _bump(lam, tol=None):
    return 0.2 * math.exp(-math.log(lam) ** 2)


@pytest.fixture
def bump_G(monkeypatch):
    monkeypatch.setattr('switchstab.planar_analysis.stability.G_eval', _bump)


class TestMultiSystemSpec:
    """Validation and derived windows."""

    def test_windows(self):
        spec = MultiSystemSpec(k=3, alpha1=0.1, c1=1.0, N=8.0, **EDGES)
        assert spec.windows == [(0.5, 2.0, 1.0), (0.5 / 8, 2.0 / 8, 1.0 / 8), (0.5 / 64, 2.0 / 64, 1.0 / 64)]
        assert spec.block_params(2).alpha == pytest.approx(0.1 / 64)
        report = spec.windows_report()
        assert report['N'] == 8.0
        assert report['windows'][1] == {'a': 0.0625, 'b': 0.25, 'r_star': 0.125}

    def test_windows_are_disjoint(self):
        spec = MultiSystemSpec(k=4, alpha1=0.1, c1=1.0, N=4.5, **EDGES)
        for (a_prev, _, _), (_, b_next, _) in zip(spec.windows, spec.windows[1:]):
            assert b_next < a_prev

    def test_scale_too_small(self):
        with pytest.raises(ScaleTooSmall):
            MultiSystemSpec(k=2, alpha1=0.1, c1=1.0, N=4.0, **EDGES)

    def test_scale_underflow(self):
        with pytest.raises(ScaleUnderflow):
            MultiSystemSpec(k=10, alpha1=0.1, c1=1.0, N=8.0, **EDGES)

    @pytest.mark.parametrize('k', [0, -1, 2.5])
    def test_bad_block_count(self, k):
        with pytest.raises(DomainError):
            MultiSystemSpec(k=k, alpha1=0.1, c1=1.0, N=8.0, **EDGES)

    def test_edges_out_of_order(self):
        with pytest.raises(DomainError):
            MultiSystemSpec(k=2, alpha1=0.1, c1=1.0, r1=3.0, a1=0.5, b1=2.0, N=8.0)

    def test_block_index(self):
        spec = MultiSystemSpec(k=2, alpha1=0.1, c1=1.0, N=8.0, **EDGES)
        with pytest.raises(IndexError):
            spec.scale(2)


class TestMultiTransition:
    """Assembly of the block matrices."""

    def test_block_structure(self):
        A0, A1, spec = multi_transition(3, 0.1, 1.0, **EDGES)
        assert spec.N == pytest.approx(8.0)
        assert A0.shape == (6, 6) and A1.shape == (6, 6)
        np.testing.assert_allclose(A0[2:4, 2:4], [[-0.1 / 8, 1.0 / 8], [0.0, -0.1 / 8]])
        np.testing.assert_allclose(A1[4:6, 4:6], [[-0.1 / 64, 0.0], [-1.0 / 64, -0.1 / 64]])
        assert np.count_nonzero(A0[:2, 2:]) == 0
        for A in (A0, A1, average_matrix([A0, A1], [0.5, 0.5])):
            assert is_hurwitz(A) is HurwitzVerdict.HURWITZ

    def test_partial_edges(self):
        with pytest.raises(DomainError):
            multi_transition(2, 0.1, 1.0, r1=1.0)

    def test_no_window(self, monkeypatch):
        monkeypatch.setattr('switchstab.constructions.multi_transition.find_window', lambda params, tol: None)
        with pytest.raises(NoWindow):
            multi_transition(2, 5.0, 1.0)

    def test_multi_system(self):
        _, _, spec = multi_transition(2, 0.1, 1.0, **EDGES)
        system = multi_system(spec, rate=0.3)
        assert system.dim == 4 and system.rate == 0.3

    def test_window_located_automatically(self, bump_G):
        _, _, spec = multi_transition(3, 0.1, 1.0)
        edge = math.sqrt(math.log(2.0))
        assert spec.a1 == pytest.approx(math.exp(-edge), rel=1e-8)
        assert spec.b1 == pytest.approx(math.exp(edge), rel=1e-8)
        assert spec.N == pytest.approx(2.0 * math.exp(2.0 * edge), rel=1e-8)

    def test_block_lyapunov_sign_pattern(self, bump_G):
        _, _, spec = multi_transition(3, 0.1, 1.0)
        windows = spec.windows
        for _, _, r in windows:
            assert block_lyapunov(spec, r) > 0
        for (a_prev, _, _), (_, b_next, _) in zip(windows, windows[1:]):
            assert block_lyapunov(spec, math.sqrt(a_prev * b_next)) < 0
        assert block_lyapunov(spec, 2.0 * windows[0][1]) < 0
        assert block_lyapunov(spec, 0.5 * windows[-1][0]) < 0


@pytest.mark.slow
class TestThreeWindows:
    """Three windows on the real functional, with a Monte Carlo spot check per block."""

    @pytest.fixture(scope='class')
    def spec(self):
        _, g_star = sup_G()
        return multi_transition(3, 0.5 * g_star, 1.0)[2]

    def test_sign_pattern(self, spec):
        windows = spec.windows
        for _, _, r in windows:
            assert block_lyapunov(spec, r) > 0
        for (a_prev, _, _), (_, b_next, _) in zip(windows, windows[1:]):
            assert b_next < a_prev
            assert block_lyapunov(spec, math.sqrt(a_prev * b_next)) < 0
        assert block_lyapunov(spec, 2.0 * windows[0][1]) < 0
        assert block_lyapunov(spec, 0.5 * windows[-1][0]) < 0

    def test_monte_carlo_per_block(self, spec):
        for i, (_, _, r) in enumerate(spec.windows):
            system = multi_system(spec, rate=r)
            u0 = np.zeros(system.dim)
            u0[2 * i] = 1.0
            estimate = lyapunov_mc(system, T=2000.0 * spec.scale(i), n_reps=100, seed=i, u0=u0, workers=0)
            expected = lyapunov_analytic(spec.block_params(i), r)
            assert abs(estimate.mean - expected) <= 3 * estimate.stderr + 1e-6
            assert expected == pytest.approx(block_lyapunov(spec, r))
