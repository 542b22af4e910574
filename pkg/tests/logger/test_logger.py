"""
Test suite for the switchstab logging helpers.

Covers:
- Log file creation and content
- Run state sentences
- Global exception hook
- Idempotent initialization
"""

import logging
import sys

import pytest

from switchstab.logger.logger import get_logger, log_exception, log_run_state, setup_logging

LOG_FILENAME = 'log.txt'


class LoggerTestBase:
    """Base class for logger tests with proper isolation."""

    @pytest.fixture(autouse=True)
    def setup_and_cleanup(self, tmp_path):
        self.original_excepthook = sys.excepthook
        self.results_dir = tmp_path / 'results'
        self.reset_logging_completely()
        yield
        self.reset_logging_completely()
        sys.excepthook = self.original_excepthook

    def reset_logging_completely(self):
        for name in list(logging.Logger.manager.loggerDict.keys()):
            logger = logging.getLogger(name)
            for handler in logger.handlers[:]:
                logger.removeHandler(handler)
                handler.close()

    def log_content(self):
        for handler in logging.getLogger('switchstab').handlers:
            handler.flush()
        return (self.results_dir / LOG_FILENAME).read_text(encoding='utf-8')


class TestSetupLogging(LoggerTestBase):
    """Handlers and levels installed by setup_logging."""

    def test_creates_log_file(self):
        setup_logging(str(self.results_dir))
        logging.getLogger('switchstab.tests').info('hello from a module')
        assert 'hello from a module' in self.log_content()

    def test_no_file_without_directory(self):
        logger = setup_logging()
        assert len(logger.handlers) == 1
        assert logger.handlers[0].stream is sys.stderr
        assert not self.results_dir.exists()

    def test_repeated_setup_does_not_duplicate(self):
        setup_logging(str(self.results_dir))
        logger = setup_logging(str(self.results_dir))
        assert len(logger.handlers) == 2
        logger.info('once')
        assert self.log_content().count('once') == 1

    def test_level_and_propagation(self):
        logger = setup_logging(str(self.results_dir), level='warning')
        assert logger.level == logging.WARNING
        assert logger.propagate is False
        logging.getLogger('switchstab.tests').info('quiet')
        logging.getLogger('switchstab.tests').warning('loud')
        content = self.log_content()
        assert 'quiet' not in content
        assert 'loud' in content

    def test_debug_records_log_file(self):
        setup_logging(str(self.results_dir), level='DEBUG')
        content = self.log_content()
        assert '=== LOGGING INITIALIZED ===' in content
        assert 'Log file:' in content

    def test_get_logger(self):
        assert get_logger().name == 'switchstab'
        assert get_logger('switchstab.cli').name == 'switchstab.cli'


class TestRunState(LoggerTestBase):
    """Sentences written by log_run_state."""

    @pytest.fixture
    def logger(self):
        setup_logging(str(self.results_dir))
        return get_logger('switchstab.tests')

    def test_run_started(self, logger):
        log_run_state(logger, {'status': 'run_started', 'command': 'scan', 'spec_file': 'planar.json', 'python_version': '3.11.4'})
        content = self.log_content()
        assert '=== RUN START ===' in content
        assert 'Command: scan' in content
        assert 'Spec: planar.json' in content
        assert 'Python: 3.11.4' in content

    def test_system_loaded(self, logger):
        log_run_state(
            logger,
            {'status': 'system_loaded', 'family': 'planar', 'spec_file': 'p.json', 'n_states': 2, 'dim': 2, 'rate': 1.0, 'bound': 1.1},
        )
        content = self.log_content()
        assert 'Loaded planar system from p.json' in content
        assert 'States: 2, dimension: 2' in content

    def test_replicas(self, logger):
        log_run_state(logger, {'status': 'replicas_started', 'replicas': 64, 'workers': 4, 'horizon': 1000.0, 'seed': 7})
        log_run_state(logger, {'status': 'replicas_complete', 'mean': -0.5, 'stderr': 0.01, 'time_sec': 1.2})
        content = self.log_content()
        assert 'Replicas: 64 on 4 worker(s)' in content
        assert 'Seed: 7' in content
        assert 'Estimate: -0.5 +/- 0.01' in content

    def test_window_found(self, logger):
        log_run_state(logger, {'status': 'window_found', 'r_star': None})
        log_run_state(logger, {'status': 'window_found', 'a': 0.5, 'b': 2.0, 'r_star': 1.0, 'peak_exponent': 0.1})
        content = self.log_content()
        assert 'No instability window' in content
        assert 'Instability window (0.5, 2.0)' in content
        assert 'Peak exponent 0.1 at r = 1.0' in content

    def test_run_failed(self, logger):
        log_run_state(logger, {'status': 'run_failed', 'error_type': 'NoWindow', 'error_message': 'alpha too large'})
        content = self.log_content()
        assert '=== RUN FAILED ===' in content
        assert 'Error type: NoWindow' in content

    def test_other_status(self, logger):
        log_run_state(logger, {'status': 'density_computed', 'points': 4096})
        content = self.log_content()
        assert 'Status: Density Computed' in content
        assert 'points: 4096' in content


class TestExceptionLogging(LoggerTestBase):
    """Exceptions written by log_exception and the global hook."""

    def test_log_exception(self):
        setup_logging(str(self.results_dir))
        logger = get_logger('switchstab.tests')

        def inner_function():
            raise ValueError('Inner error')

        try:
            inner_function()
        except ValueError as e:
            log_exception(logger, e, context='estimating exponent')

        content = self.log_content()
        assert '=== ERROR: estimating exponent ===' in content
        assert 'Exception type: ValueError' in content
        assert 'Exception message: Inner error' in content
        assert 'inner_function' in content

    def test_hook_installed_once(self):
        setup_logging(str(self.results_dir))
        hook = sys.excepthook
        assert hook is not self.original_excepthook
        assert getattr(hook, '_switchstab_excepthook', False)
        setup_logging(str(self.results_dir))
        assert sys.excepthook is hook

    def test_unhandled_exception_logged(self):
        setup_logging(str(self.results_dir))
        sys.excepthook(RuntimeError, RuntimeError('Global test error'), None)
        content = self.log_content()
        assert 'Unhandled exception' in content
        assert 'Global test error' in content
