"""
Switchstab Logger
=================
A global logger for the switched-system stability toolkit.
"""

import logging
import os
import sys
from typing import Optional


def setup_logging(output_dir: Optional[str] = None, level: str = 'INFO') -> logging.Logger:
    """
    Configure global logging.
    - Attaches handlers to the top-level 'switchstab' logger
    - Console output goes to stderr so stdout carries only command results
    - Writes ``log.txt`` into ``output_dir`` when one is given
    - Installs a global exception hook
    """
    logger = logging.getLogger('switchstab')

    # Remove handlers, so a second call overwrites instead of duplicating output
    for h in logger.handlers[:]:
        logger.removeHandler(h)
        try:
            h.close()
        except Exception:
            pass

    numeric_level = getattr(logging, level.upper(), logging.INFO)
    logger.setLevel(numeric_level)

    formatter = logging.Formatter('%(asctime)s %(levelname)s %(name)s: %(message)s')

    logfile = None
    if output_dir is not None:
        os.makedirs(output_dir, exist_ok=True)
        logfile = os.path.join(output_dir, 'log.txt')
        file_handler = logging.FileHandler(logfile, mode='w')
        file_handler.setLevel(numeric_level)
        file_handler.setFormatter(formatter)
        file_handler.is_switchstab_handler = True  # marker to prevent duplicates
        logger.addHandler(file_handler)

    console_handler = logging.StreamHandler(stream=sys.stderr)
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(formatter)
    console_handler.is_switchstab_handler = True
    logger.addHandler(console_handler)

    logger.propagate = False

    install_global_excepthook(logger)

    logger.debug('=== LOGGING INITIALIZED ===')
    if logfile is not None:
        logger.debug(f'Log file: {os.path.abspath(logfile)}')
    return logger


def install_global_excepthook(logger: logging.Logger) -> None:
    """
    Install an excepthook that logs unhandled exceptions.
    The hook function is tagged so repeated installs are no-ops.
    """
    if getattr(sys.excepthook, '_switchstab_excepthook', False):
        return

    def _hook(exc_type, exc_value, exc_tb):
        if issubclass(exc_type, KeyboardInterrupt):
            sys.__excepthook__(exc_type, exc_value, exc_tb)
            return
        logger.exception('Unhandled exception', exc_info=(exc_type, exc_value, exc_tb))
        sys.__excepthook__(exc_type, exc_value, exc_tb)

    _hook._switchstab_excepthook = True
    sys.excepthook = _hook


def get_logger(name: str | None = None) -> logging.Logger:
    """
    Get a logger. Prefer logging.getLogger(__name__) in modules so records
    propagate to the 'switchstab' logger configured above.
    """
    return logging.getLogger(name or 'switchstab')


def log_run_state(logger: logging.Logger, state: dict, level=logging.INFO) -> None:
    """
    Logs the state of a run with human-readable sentences.
    Long records are split into multiple lines.
    """
    status = state.get('status', state.get('state', 'unknown'))

    if status == 'run_started':
        logger.log(level, '=== RUN START ===')
        logger.log(level, f'Command: {state.get("command", "unknown")}')
        logger.log(level, f'Spec: {state.get("spec_file", "none")}')
        logger.log(level, f'Python: {state.get("python_version", "unknown")}')

    elif status == 'system_loaded':
        logger.log(level, f'Loaded {state.get("family", "explicit")} system from {state.get("spec_file", "unknown")}')
        logger.log(level, f'States: {state.get("n_states", "unknown")}, dimension: {state.get("dim", "unknown")}')
        logger.log(level, f'Switching rate r: {state.get("rate", "unknown")}, bound Lambda: {state.get("bound", "unknown")}')

    elif status == 'replicas_started':
        logger.log(level, '--- Monte Carlo ---')
        logger.log(level, f'Replicas: {state.get("replicas", "unknown")} on {state.get("workers", 1)} worker(s)')
        logger.log(level, f'Horizon: {state.get("horizon", "unknown")}, burn-in: {state.get("burn_in", 0)}')
        logger.log(level, f'Seed: {state.get("seed", "unknown")}')

    elif status == 'replicas_complete':
        logger.log(level, f'Estimate: {state.get("mean", "unknown")} +/- {state.get("stderr", "unknown")}')
        logger.log(level, f'Runtime: {state.get("time_sec", "unknown")}s')

    elif status == 'window_found':
        if state.get('r_star') is None:
            logger.log(level, 'No instability window')
        else:
            logger.log(level, f'Instability window ({state.get("a")}, {state.get("b")})')
            logger.log(level, f'Peak exponent {state.get("peak_exponent")} at r = {state.get("r_star")}')

    elif status == 'run_failed':
        logger.log(level, '=== RUN FAILED ===')
        logger.log(level, f'Error type: {state.get("error_type", "unknown")}')
        logger.log(level, f'Error message: {state.get("error_message", "unknown")}')
        if 'exit_code' in state:
            logger.log(level, f'Exit code: {state["exit_code"]}')

    else:
        clean_status = status.replace('_', ' ').title()
        logger.log(level, f'Status: {clean_status}')

        params = {k: v for k, v in state.items() if k not in ['status', 'state']}
        if len(params) > 3:
            for k, v in params.items():
                logger.log(level, f'  {k}: {v}')
        elif params:
            param_str = ', '.join(f'{k}: {v}' for k, v in params.items())
            logger.log(level, f'  {param_str}')


def log_exception(logger: logging.Logger, e: Exception, context: str | None = None) -> None:
    """
    Logs exceptions with stack trace and context information.

    Parameters
    ----------
    logger : logging.Logger
        Logger that receives the records.
    e : Exception
        The exception that occurred
    context : str, optional
        Additional context about where/when the exception occurred
    """
    if context:
        logger.error(f'=== ERROR: {context} ===')
    else:
        logger.error('=== RUN ERROR ===')

    logger.error(f'Exception type: {type(e).__name__}')
    logger.error(f'Exception message: {str(e)}')
    logger.error('Stack trace:', exc_info=True)
    logger.error('=' * 50)
