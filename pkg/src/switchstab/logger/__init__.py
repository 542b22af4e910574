"""
A directory for the switchstab logger
"""

from .logger import get_logger, setup_logging, log_run_state, log_exception

__all__ = ['get_logger', 'setup_logging', 'log_run_state', 'log_exception']
