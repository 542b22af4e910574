"""
Unit tests for the switchstab CLI commands using Typer's CliRunner.
"""

import json
import logging
import math
import sys
from pathlib import Path
from unittest.mock import patch

import pandas as pd
import pytest
from typer.testing import CliRunner

from switchstab.__version__ import __version__
from switchstab.application_interfaces.cli import app
from switchstab.application_interfaces.cli.main import exit_code
from switchstab.exceptions import (
    DomainError,
    MissingConfigurationParameter,
    NoWindow,
    QuadratureError,
    ScaleTooSmall,
    SpecValidationError,
    WindowSearchError,
)

PLANAR = {'family': 'planar', 'alpha': 0.05, 'c': 1.0, 'r': 1.0}
FAST_ONLY = {
    'matrices': [{'dim': 2, 'rows': [[1.0, 4.0], [0.0, -2.0]]}, {'dim': 2, 'rows': [[-2.0, 0.0], [0.0, 1.0]]}],
    'Q': {'states': 2, 'Q': [[-1.0, 1.0], [1.0, -1.0]]},
    'r': 10.0,
}


def _bump(lam, tol=None):
    return 0.2 * math.exp(-math.log(lam) ** 2)


def _flat(lam, tol=None):
    return 0.2 / (1.0 + math.log(lam) ** 2 / 100.0)


def _write(name, document):
    Path(name).write_text(json.dumps(document))
    return name


class TestSwitchstabCLI:
    """
    Test suite for the switchstab CLI commands.
    """

    @pytest.fixture
    def runner(self):
        return CliRunner()

    @pytest.fixture(autouse=True)
    def reset_logging(self):
        original_excepthook = sys.excepthook
        yield
        logger = logging.getLogger('switchstab')
        for handler in logger.handlers[:]:
            logger.removeHandler(handler)
            handler.close()
        sys.excepthook = original_excepthook

    @pytest.fixture
    def bump_G(self, monkeypatch):
        monkeypatch.setattr('switchstab.planar_analysis.stability.G_eval', _bump)

    def test_version(self, runner):
        result = runner.invoke(app, ['--version'])
        assert result.exit_code == 0
        assert f'switchstab {__version__}' in result.output

    def test_check(self, runner):
        with runner.isolated_filesystem():
            result = runner.invoke(app, ['check', _write('planar.json', PLANAR)])
            assert result.exit_code == 0, result.output
            assert 'family: planar' in result.output
            assert 'all convex combinations Hurwitz: yes' in result.output
            assert 'every A_i Hurwitz (stable for slow switching): yes' in result.output

    def test_check_json(self, runner):
        with runner.isolated_filesystem():
            result = runner.invoke(app, ['check', '--json', _write('fast.json', FAST_ONLY)])
            assert result.exit_code == 0, result.output
            report = json.loads(result.output)
            assert report['hurwitz'] == ['Unstable', 'Unstable']
            assert report['average_hurwitz']
            assert not report['commuting']

    def test_log_dir(self, runner):
        with runner.isolated_filesystem():
            result = runner.invoke(
                app, ['--log-level', 'INFO', '--log-dir', 'logs', 'check', _write('planar.json', PLANAR)]
            )
            assert result.exit_code == 0, result.output
            for handler in logging.getLogger('switchstab').handlers:
                handler.flush()
            content = Path('logs/log.txt').read_text()
            assert '=== RUN START ===' in content
            assert 'Command: check' in content
            assert 'Loaded planar system from planar.json' in content

    def test_lyapunov_is_reproducible(self, runner):
        with runner.isolated_filesystem():
            spec = _write('fast.json', FAST_ONLY)
            args = ['lyapunov', spec, '--T', '5', '--reps', '4', '--seed', '3']
            serial = runner.invoke(app, [*args, '--workers', '1'])
            threaded = runner.invoke(app, [*args, '--workers', '2'])
            assert serial.exit_code == 0, serial.output
            assert serial.output.startswith('mean=')
            assert 'verdict=' in serial.output
            assert serial.output == threaded.output

    def test_lyapunov_out(self, runner):
        with runner.isolated_filesystem():
            spec = _write('fast.json', FAST_ONLY)
            result = runner.invoke(app, ['lyapunov', spec, '--T', '5', '--reps', '4', '--out', 'estimate.csv'])
            assert result.exit_code == 0, result.output
            header = Path('estimate.csv').read_text().splitlines()[0]
            assert header == 'mean,stderr,replicas,horizon,burn_in,verdict'

    def test_lyapunov_path_and_trajectory(self, runner):
        with runner.isolated_filesystem():
            spec = _write('fast.json', FAST_ONLY)
            result = runner.invoke(
                app,
                ['lyapunov', spec, '--T', '5', '--reps', '4', '--seed', '3',
                 '--path-out', 'path.csv', '--trajectory-out', 'trajectory.csv'],
            )
            assert result.exit_code == 0, result.output
            assert "Path written to 'path.csv'." in result.output
            assert "Trajectory written to 'trajectory.csv'." in result.output
            path = pd.read_csv('path.csv')
            trajectory = pd.read_csv('trajectory.csv')
            assert list(path.columns) == ['k', 'state', 'holding_time']
            assert list(trajectory.columns) == ['t', 'state', 'log_radius', 'theta']
            assert path['holding_time'].sum() == pytest.approx(5.5)
            assert len(trajectory) == len(path) + 1

    def test_scan_to_stdout(self, runner):
        with runner.isolated_filesystem():
            spec = _write('planar.json', PLANAR)
            result = runner.invoke(app, ['scan', spec, '--r-grid', '0.5:2:2', '--no-mc', '--tol', '1e-8'])
            assert result.exit_code == 0, result.output
            lines = result.output.splitlines()
            assert lines[0] == 'r,lambda_analytic,lambda_mc,mc_stderr'
            assert len(lines) == 3
            assert lines[1].startswith('0.5,')

    def test_scan_bad_grid(self, runner):
        with runner.isolated_filesystem():
            result = runner.invoke(app, ['scan', _write('planar.json', PLANAR), '--r-grid', '2:1:3'])
            assert result.exit_code == 2
            assert 'Error scanning rates' in result.output

    def test_kurtz(self, runner):
        with runner.isolated_filesystem():
            spec = _write('fast.json', FAST_ONLY)
            result = runner.invoke(app, ['kurtz', spec, '--T', '1', '--r-list', '1,10', '--reps', '4', '--out', 'k.csv'])
            assert result.exit_code == 0, result.output
            assert "Results written to 'k.csv'." in result.output
            lines = Path('k.csv').read_text().splitlines()
            assert lines[0] == 'r,mean_norm,stderr,limit'
            assert lines[-1].startswith('inf,')

    def test_density(self, runner):
        result = runner.invoke(app, ['density', '--lambda', '1', '--points', '8', '--tol', '1e-8'])
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines[0] == 'theta,p0,p1'
        assert len(lines) == 11
        assert lines[-2].startswith('# G=')
        assert lines[-1].startswith('# C=')

    def test_density_bad_lambda(self, runner):
        result = runner.invoke(app, ['density', '--lambda=-1'])
        assert result.exit_code == 2
        assert 'Error computing densities' in result.output

    def test_gscan(self, runner):
        result = runner.invoke(app, ['gscan', '--lambda-grid', '0.1:10:3', '--tol', '1e-8'])
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines[0] == 'lambda,G'
        assert len(lines) == 4
        assert lines[1].startswith('0.1,')

    def test_gscan_bad_grid(self, runner):
        result = runner.invoke(app, ['gscan', '--lambda-grid', '0:1:3'])
        assert result.exit_code == 2
        assert 'lambda grid' in result.output

    def test_failure_is_logged(self, runner):
        with runner.isolated_filesystem():
            result = runner.invoke(app, ['--log-level', 'INFO', '--log-dir', 'logs', 'density', '--lambda=-1'])
            assert result.exit_code == 2
            for handler in logging.getLogger('switchstab').handlers:
                handler.flush()
            content = Path('logs/log.txt').read_text()
            assert '=== RUN FAILED ===' in content
            assert 'Error type: DomainError' in content
            assert 'Exit code: 2' in content

    def test_invalid_spec(self, runner):
        with runner.isolated_filesystem():
            result = runner.invoke(app, ['check', _write('bad.json', {'family': 'planar'})])
            assert result.exit_code == 2
            assert 'bad.json' in result.output

    def test_missing_spec(self, runner):
        with runner.isolated_filesystem():
            result = runner.invoke(app, ['check', 'absent.json'])
            assert result.exit_code == 2

    def test_window(self, runner, bump_G):
        result = runner.invoke(app, ['window', '--alpha', '0.1', '--c', '1'])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report['a'] < report['r_star'] < report['b']

    def test_window_search_failure(self, runner):
        with patch('switchstab.application_interfaces.api.locate_window') as mock:
            mock.side_effect = WindowSearchError('bracket lost')
            result = runner.invoke(app, ['window', '--alpha', '0.1', '--c', '1'])
        assert result.exit_code == 3
        assert 'bracket lost' in result.output

    def test_window_beyond_the_rate_range(self, runner, monkeypatch):
        monkeypatch.setattr('switchstab.planar_analysis.stability.G_eval', _flat)
        result = runner.invoke(app, ['window', '--alpha', '0.1', '--c', '1'])
        assert result.exit_code == 3
        assert 'edge of the rate range' in result.output

    def test_construct(self, runner, bump_G):
        with runner.isolated_filesystem():
            result = runner.invoke(app, ['construct', '--k', '2', '--alpha1', '0.1', '--c1', '1', '--out', 'sys.json'])
            assert result.exit_code == 0, result.output
            assert "System written to 'sys.json'." in result.output
            document = json.loads(Path('sys.json').read_text())
            assert document['matrices'][0]['dim'] == 4
            windows = json.loads(Path('sys.windows.json').read_text())
            assert len(windows['windows']) == 2

    @pytest.mark.parametrize('extra', [['--alpha1', '5'], ['--alpha1', '0.1', '--N', '1.5']])
    def test_construct_infeasible(self, runner, bump_G, extra):
        with runner.isolated_filesystem():
            result = runner.invoke(app, ['construct', '--k', '2', '--c1', '1', *extra])
            assert result.exit_code == 4
            assert not Path('system.json').exists()

    def test_unexpected_error(self, runner):
        with runner.isolated_filesystem():
            spec = _write('planar.json', PLANAR)
            with patch('switchstab.application_interfaces.api.check_system') as mock:
                mock.side_effect = RuntimeError('boom')
                result = runner.invoke(app, ['check', spec])
            assert result.exit_code == 1
            assert 'Error checking system: boom' in result.output


class TestExitCodes:
    @pytest.mark.parametrize(
        'error, code',
        [
            (NoWindow('x'), 4),
            (ScaleTooSmall('x'), 4),
            (WindowSearchError('x'), 3),
            (QuadratureError('x', 0.0, 1.0), 3),
            (DomainError('x'), 2),
            (MissingConfigurationParameter('x'), 2),
            (SpecValidationError('x'), 2),
            (ValueError('x'), 2),
            (RuntimeError('x'), 1),
        ],
    )
    def test_exit_code(self, error, code):
        assert exit_code(error) == code
