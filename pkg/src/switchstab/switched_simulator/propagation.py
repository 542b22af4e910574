"""
Exact propagation of the switched flow along a jump path.

Along a segment with matrix ``A`` and duration ``D`` the state is multiplied by
``exp(A D)``; no ODE discretization is involved. The polar kernels keep the
direction ``u = X/||X||`` and ``log(||X||/||X_0||)`` instead of ``X`` so they
can run over arbitrarily long horizons; in the plane they also maintain the
lifted angle ``Theta``.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd
from numba import njit
from numpy.typing import ArrayLike

from switchstab.exceptions import DimensionMismatchError, OverflowRiskError
from switchstab.linear_algebra.matrix_exponential import expm_kernel
from switchstab.markov_chain import JumpPath
from switchstab.switched_simulator.system import SwitchedSystem

logger = logging.getLogger(__name__)

# Largest Lambda*T accepted by the dense product.
DENSE_BOUND = 50.0
# Largest ||A||*D for one exponential in the polar kernel.
SEGMENT_BOUND = 30.0
# Largest ||A||*D per piece while the planar angle is tracked; the angle moves
# at most ||A|| per unit time so each increment stays below pi/2.
ANGLE_BOUND = 1.5
UNIT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PolarState:
    """
    Direction and log-radius of the state after propagation.

    Attributes
    ----------
    direction : np.ndarray
        Unit vector ``u``.
    log_radius : float
        ``log(||X||/||X_0||)``.
    theta : float or None
        Lifted angle, only for ``d = 2``.
    """

    direction: np.ndarray = field(repr=False)
    log_radius: float
    theta: Optional[float] = None

    def __post_init__(self):
        u = np.array(self.direction, dtype=np.float64)
        if abs(np.linalg.norm(u) - 1.0) > 1e-10:
            raise ValueError(f'direction must be a unit vector, got norm {np.linalg.norm(u)!r}')
        u.setflags(write=False)
        object.__setattr__(self, 'direction', u)


def _check_vector(system: SwitchedSystem, x: ArrayLike, name: str) -> np.ndarray:
    x = np.array(x, dtype=np.float64)
    if x.shape != (system.dim,):
        raise DimensionMismatchError(f'{name} must have shape ({system.dim},), got {x.shape}')
    if not np.all(np.isfinite(x)):
        raise ValueError(f'{name} must be finite')
    return x


def _check_path(system: SwitchedSystem, path: JumpPath) -> None:
    if path.states.size and (path.states.min() < 0 or path.states.max() >= system.n_states):
        raise ValueError(f'path visits states outside 0..{system.n_states - 1}')


def default_direction(dim: int) -> np.ndarray:
    """The deterministic starting direction ``(1, 0, ..., 0)``."""
    u = np.zeros(dim)
    u[0] = 1.0
    return u


def check_dense_bound(system: SwitchedSystem, T: float) -> None:
    load = system.bound * T
    if load > DENSE_BOUND:
        raise OverflowRiskError(
            f'Lambda*T = {load:.6g} exceeds {DENSE_BOUND:g}; the dense product may lose all accuracy or overflow. '
            'Use propagate_polar for long horizons.'
        )


@njit(cache=True, nogil=True)
def dense_product(mats, states, durations):
    """Product ``exp(A_{s_m} D_m) ... exp(A_{s_1} D_1)`` of the segment exponentials."""
    d = mats.shape[1]
    S = np.eye(d)
    for k in range(states.shape[0]):
        if durations[k] > 0.0:
            S = expm_kernel(mats[states[k]], durations[k]) @ S
    return S


def propagator(system: SwitchedSystem, path: JumpPath) -> np.ndarray:
    """
    The full path product ``S_T`` mapping ``X_0`` to ``X_T``.

    Raises
    ------
    OverflowRiskError
        If ``Lambda T`` exceeds the dense bound.
    """
    _check_path(system, path)
    check_dense_bound(system, path.horizon)
    states, durations = path.segments()
    return dense_product(system.stacked, states, durations)


def propagate_dense(system: SwitchedSystem, path: JumpPath, X0: ArrayLike) -> np.ndarray:
    """
    ``X_T = exp(A_{xi_{N+1}} a_T) exp(A_{xi_N} tau_N) ... exp(A_{xi_1} tau_1) X_0``.

    Raises
    ------
    OverflowRiskError
        If ``Lambda T`` exceeds the dense bound; use :func:`propagate_polar`.
    """
    X0 = _check_vector(system, X0, 'X0')
    if np.linalg.norm(X0) == 0:
        raise ValueError('X0 must be nonzero')
    return propagator(system, path) @ X0


@njit(cache=True, nogil=True)
def polar_kernel(mats, norms, states, durations, u0, track_theta):
    """
    Propagate direction and log-radius over the segments.

    Returns the final direction, log-radius and lifted angle plus the
    log-radius and angle recorded at the end of every segment.
    """
    n_seg = states.shape[0]
    u = u0.copy()
    log_r = 0.0
    theta = 0.0
    phi = 0.0
    if track_theta:
        theta = math.atan2(u[1], u[0])
        phi = theta
    rec_log_r = np.empty(n_seg)
    rec_theta = np.empty(n_seg)

    for k in range(n_seg):
        duration = durations[k]
        if duration > 0.0:
            load = norms[states[k]] * duration
            bound = ANGLE_BOUND if track_theta else SEGMENT_BOUND
            pieces = 1
            if load > bound:
                pieces = int(math.ceil(load / bound))
            E = expm_kernel(mats[states[k]], duration / pieces)
            for _ in range(pieces):
                v = E @ u
                nv = math.sqrt(np.dot(v, v))
                log_r += math.log(nv)
                u = v / nv
                if track_theta:
                    new_phi = math.atan2(u[1], u[0])
                    inc = new_phi - phi
                    if inc > math.pi:
                        inc -= 2.0 * math.pi
                    elif inc <= -math.pi:
                        inc += 2.0 * math.pi
                    theta += inc
                    phi = new_phi
        rec_log_r[k] = log_r
        rec_theta[k] = theta
    return u, log_r, theta, rec_log_r, rec_theta


def _run_polar(system: SwitchedSystem, states: np.ndarray, durations: np.ndarray, u0: ArrayLike):
    u0 = _check_vector(system, u0, 'u0')
    if abs(np.linalg.norm(u0) - 1.0) > UNIT_TOL:
        raise ValueError(f'u0 must be a unit vector, got norm {np.linalg.norm(u0)!r}')
    u0 = u0 / np.linalg.norm(u0)
    track_theta = system.dim == 2
    return polar_kernel(
        system.stacked,
        np.ascontiguousarray(system.norms),
        np.ascontiguousarray(states),
        np.ascontiguousarray(durations),
        u0,
        track_theta,
    )


def propagate_polar(system: SwitchedSystem, path: JumpPath, u0: Optional[ArrayLike] = None) -> PolarState:
    """
    Propagate the polar pair ``(u, log R)`` exactly along ``path``.

    Parameters
    ----------
    system : SwitchedSystem
    path : JumpPath
    u0 : array_like, optional
        Unit starting direction, ``(1, 0, ..., 0)`` by default.
    """
    _check_path(system, path)
    if u0 is None:
        u0 = default_direction(system.dim)
    states, durations = path.segments()
    u, log_r, theta, _, _ = _run_polar(system, states, durations, u0)
    return PolarState(direction=u, log_radius=float(log_r), theta=float(theta) if system.dim == 2 else None)


def log_radius_at(system: SwitchedSystem, path: JumpPath, times: ArrayLike, u0: Optional[ArrayLike] = None):
    """``log(||X_t||/||X_0||)`` at the sorted ``times`` in ``[0, T]``."""
    _check_path(system, path)
    if u0 is None:
        u0 = default_direction(system.dim)
    states, durations, marks = path.refine(times)
    _, _, _, rec_log_r, _ = _run_polar(system, states, durations, u0)
    values = np.zeros(marks.shape[0])
    recorded = marks >= 0
    values[recorded] = rec_log_r[marks[recorded]]
    return values


def trajectory_frame(system: SwitchedSystem, path: JumpPath, u0: Optional[ArrayLike] = None) -> pd.DataFrame:
    """
    Per-segment trajectory table with columns ``t, state, log_radius, theta``.

    The first row is the initial point; each further row is the end of a
    segment, with ``state`` the state occupied during it. ``theta`` is empty
    (NaN) unless ``d = 2``.
    """
    _check_path(system, path)
    if u0 is None:
        u0 = default_direction(system.dim)
    states, durations = path.segments()
    u0 = _check_vector(system, u0, 'u0')
    _, _, _, rec_log_r, rec_theta = _run_polar(system, states, durations, u0)

    times = np.concatenate(([0.0], np.cumsum(durations)))
    theta0 = math.atan2(u0[1], u0[0]) if system.dim == 2 else np.nan
    thetas = np.concatenate(([theta0], rec_theta)) if system.dim == 2 else np.full(times.shape, np.nan)
    return pd.DataFrame(
        {
            't': times,
            'state': np.concatenate(([states[0]], states)),
            'log_radius': np.concatenate(([0.0], rec_log_r)),
            'theta': thetas,
        }
    )
