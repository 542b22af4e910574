"""The switched process: propagation along jump paths and Monte Carlo estimators."""

from .system import SwitchedSystem, make_system, stability_hypotheses
from .propagation import (
    PolarState,
    default_direction,
    log_radius_at,
    propagate_dense,
    propagate_polar,
    propagator,
    trajectory_frame,
)
from .estimators import (
    LyapunovEstimate,
    NormEstimate,
    lyapunov_mc,
    monotone_norm_check,
    propagator_norm_mc,
    replica_path,
)
from .replicas import run_replicas

__all__ = [
    'SwitchedSystem',
    'make_system',
    'stability_hypotheses',
    'PolarState',
    'default_direction',
    'log_radius_at',
    'propagate_dense',
    'propagate_polar',
    'propagator',
    'trajectory_frame',
    'LyapunovEstimate',
    'NormEstimate',
    'lyapunov_mc',
    'monotone_norm_check',
    'propagator_norm_mc',
    'replica_path',
    'run_replicas',
]
