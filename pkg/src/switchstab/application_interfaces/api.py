"""
Application Interface (API)
===========================

High-level functions behind the command-line interface: load a system spec,
check the classical stability hypotheses, estimate Lyapunov exponents, scan
switching rates, locate instability windows, build multi-window systems and
export sampled paths, trajectories and ``G`` tables.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from switchstab.application_interfaces.configuration_controller import ConfigurationController
from switchstab.constructions import (
    MultiSystemSpec,
    block_lyapunov,
    multi_system,
    multi_transition,
    planar_system,
    two_state_generator,
)
from switchstab.exceptions import ConfigurationError, DomainError, MissingConfigurationParameter
from switchstab.linear_algebra import convex_combination_scan, mat_exp, matrix_from_literal, matrix_to_literal
from switchstab.logger import log_run_state
from switchstab.markov_chain import Generator
from switchstab.planar_analysis import (
    DEFAULT_TOL,
    PlanarParams,
    angular_density,
    density_frame,
    find_window,
    g_scan,
    lyapunov_analytic,
)
from switchstab.switched_simulator import (
    LyapunovEstimate,
    SwitchedSystem,
    lyapunov_mc,
    propagator_norm_mc,
    replica_path,
    stability_hypotheses,
    trajectory_frame,
)

logger = logging.getLogger(__name__)

REQUIRED_KEYS = {
    'explicit': ('matrices', 'Q'),
    'planar': ('alpha', 'c'),
    'multi': ('k', 'alpha1', 'c1'),
}


# ============================================================================
# Loading
# ============================================================================


@dataclass(frozen=True)
class LoadedSystem:
    """
    A switched system together with the family it was built from.

    Attributes
    ----------
    system : SwitchedSystem
    family : str
        ``'explicit'``, ``'planar'`` or ``'multi'``.
    planar : PlanarParams, optional
        Set for the planar family.
    multi : MultiSystemSpec, optional
        Set for the multi family.
    """

    system: SwitchedSystem
    family: str = 'explicit'
    planar: Optional[PlanarParams] = None
    multi: Optional[MultiSystemSpec] = None

    def analytic_exponent(self, r: float, tol: float = DEFAULT_TOL) -> float:
        """Closed-form top exponent at rate ``r``; NaN for explicit systems."""
        if self.planar is not None:
            return lyapunov_analytic(self.planar, r, tol)
        if self.multi is not None:
            return block_lyapunov(self.multi, r, tol)
        return math.nan


def build_system(document: Dict[str, Any], tol: float = DEFAULT_TOL) -> LoadedSystem:
    """
    Turn a spec document into a :class:`LoadedSystem`.

    Raises
    ------
    ConfigurationError
        If the family is unknown.
    MissingConfigurationParameter
        If a key the family needs is absent.
    InvalidSystemError
        If the matrices and generator do not form a valid system.
    NoWindow, ScaleTooSmall, ScaleUnderflow
        For an infeasible multi-window spec.
    """
    family = document.get('family', 'explicit')
    if family not in REQUIRED_KEYS:
        raise ConfigurationError(f'unknown system family {family!r}')
    missing = [key for key in REQUIRED_KEYS[family] if key not in document]
    if missing:
        raise MissingConfigurationParameter(f'{family} spec is missing {", ".join(missing)}')
    rate = document.get('r', 1.0)
    if family == 'planar':
        params = PlanarParams(document['alpha'], document['c'])
        return LoadedSystem(planar_system(params.alpha, params.c, rate), family, planar=params)
    if family == 'multi':
        edges = {key: document.get(key) for key in ('r1', 'a1', 'b1')}
        _, _, spec = multi_transition(
            document['k'], document['alpha1'], document['c1'], document.get('N'), tol, **edges
        )
        return LoadedSystem(multi_system(spec, rate), family, multi=spec)

    matrices = tuple(matrix_from_literal(m, name=f'matrices[{i}]') for i, m in enumerate(document['matrices']))
    generator = Generator.from_literal(document['Q'])
    return LoadedSystem(SwitchedSystem(matrices, generator, rate), family)


def load_system(spec_file: Union[str, Path], tol: float = DEFAULT_TOL) -> LoadedSystem:
    """
    Load and validate a spec file.

    Examples
    --------
    >>> loaded = load_system('planar.json')
    >>> loaded.system.dim
    2
    """
    controller = ConfigurationController(spec_file)
    loaded = build_system(controller.get_config(), tol)
    system = loaded.system
    log_run_state(
        logger,
        {'status': 'system_loaded', 'family': loaded.family, 'spec_file': str(spec_file),
         'n_states': system.n_states, 'dim': system.dim, 'rate': system.rate, 'bound': system.bound},
    )
    return loaded


def system_document(system: SwitchedSystem) -> Dict[str, Any]:
    """Explicit spec document of ``system``."""
    return {
        'matrices': [matrix_to_literal(m) for m in system.matrices],
        'Q': system.generator.to_literal(),
        'r': system.rate,
    }


# ============================================================================
# Analysis
# ============================================================================


def check_system(loaded: LoadedSystem, tol: float = 1e-10) -> Dict[str, Any]:
    """
    Stability hypotheses of the system; for two matrices also the scan of
    their convex combinations.
    """
    report = stability_hypotheses(loaded.system, tol)
    report['family'] = loaded.family
    if loaded.system.n_states == 2:
        scan = convex_combination_scan(*loaded.system.matrices)
        report['convex_combinations_hurwitz'] = scan['all_hurwitz']
        report['worst_convex_weight'] = scan['worst_weight']
        report['worst_convex_abscissa'] = scan['worst_abscissa']
    return report


def estimate_lyapunov(
    loaded: LoadedSystem,
    T: float,
    burn_in: Optional[float] = None,
    reps: int = 64,
    seed: int = 0,
    workers: Optional[int] = 1,
    progress: bool = False,
) -> LyapunovEstimate:
    """Monte Carlo top Lyapunov exponent at the spec's switching rate."""
    return lyapunov_mc(loaded.system, T, burn_in, reps, seed, workers=workers, progress=progress)


def parse_rate_grid(text: str, name: str = 'rate grid') -> np.ndarray:
    """
    Logarithmic grid from ``'min:max:points'``; ``name`` labels error messages.

    Raises
    ------
    DomainError
        If the text is malformed, ``min <= 0``, ``max < min`` or ``points < 1``.
    """
    try:
        lo, hi, points = text.split(':')
        lo, hi, points = float(lo), float(hi), int(points)
    except ValueError as e:
        raise DomainError(f'{name} must look like min:max:points, got {text!r}') from e
    if not (lo > 0 and math.isfinite(hi)) or hi < lo or points < 1:
        raise DomainError(f'{name} needs 0 < min <= max and points >= 1, got {text!r}')
    if points == 1:
        return np.array([lo])
    return np.geomspace(lo, hi, points)


def parse_rate_list(text: str) -> np.ndarray:
    """Rates from a comma-separated list; every rate must be positive."""
    try:
        rates = np.array([float(item) for item in text.split(',') if item.strip()])
    except ValueError as e:
        raise DomainError(f'rate list must be comma-separated numbers, got {text!r}') from e
    if rates.size == 0 or not np.all(rates > 0) or not np.all(np.isfinite(rates)):
        raise DomainError(f'rates must be positive and finite, got {text!r}')
    return rates


def scan_rates(
    loaded: LoadedSystem,
    rates: Sequence[float],
    analytic: bool = True,
    mc: bool = True,
    T: float = 500.0,
    burn_in: Optional[float] = None,
    reps: int = 32,
    seed: int = 0,
    workers: Optional[int] = 1,
    tol: float = DEFAULT_TOL,
) -> pd.DataFrame:
    """
    Exponents over a grid of switching rates.

    Returns
    -------
    pd.DataFrame
        Columns ``r, lambda_analytic, lambda_mc, mc_stderr``; columns that
        were not requested or do not apply hold NaN.
    """
    rates = np.asarray(rates, dtype=np.float64)
    if rates.size == 0 or not np.all(rates > 0):
        raise DomainError('scan rates must be positive')
    rows = []
    for r in rates:
        exact = loaded.analytic_exponent(r, tol) if analytic else math.nan
        mean = stderr = math.nan
        if mc:
            estimate = lyapunov_mc(loaded.system.with_rate(r), T, burn_in, reps, seed, workers=workers)
            mean, stderr = estimate.mean, estimate.stderr
        rows.append({'r': r, 'lambda_analytic': exact, 'lambda_mc': mean, 'mc_stderr': stderr})
        logger.info(f'r={r:.6g}: analytic {exact:.6g}, mc {mean:.6g} +/- {stderr:.2g}')
    return pd.DataFrame(rows, columns=['r', 'lambda_analytic', 'lambda_mc', 'mc_stderr'])


def locate_window(alpha: float, c: float, tol: float = DEFAULT_TOL) -> Dict[str, Any]:
    """Instability window report ``{a, b, r_star, peak_exponent}`` or ``{'window': None}``."""
    window = find_window(PlanarParams(alpha, c), tol)
    return {'window': None} if window is None else window.to_dict()


def construct_multi(
    k: int,
    alpha1: float,
    c1: float,
    N: Optional[float] = None,
    tol: float = DEFAULT_TOL,
    rate: float = 1.0,
) -> Tuple[Dict[str, Any], Dict[str, Any]]:
    """
    Explicit spec document of the ``2k``-dimensional block system and its windows report.
    """
    A0, A1, spec = multi_transition(k, alpha1, c1, N, tol)
    system = SwitchedSystem((A0, A1), two_state_generator(), rate)
    return system_document(system), spec.windows_report()


def kurtz_table(
    loaded: LoadedSystem,
    T: float,
    rates: Sequence[float],
    reps: int = 64,
    seed: int = 0,
    workers: Optional[int] = 1,
) -> pd.DataFrame:
    """
    Expected propagator norm at each rate next to the averaged-flow limit ``||exp(A_bar T)||``.

    The last row, at ``r = inf``, holds the limit itself.
    """
    limit = float(np.linalg.norm(mat_exp(loaded.system.average, T), 2))
    rows = []
    for r in rates:
        estimate = propagator_norm_mc(loaded.system.with_rate(r), T, reps, seed, workers=workers)
        rows.append({'r': float(r), 'mean_norm': estimate.mean, 'stderr': estimate.stderr, 'limit': limit})
    rows.append({'r': math.inf, 'mean_norm': limit, 'stderr': 0.0, 'limit': limit})
    return pd.DataFrame(rows, columns=['r', 'mean_norm', 'stderr', 'limit'])


def density_table(lam: float, points: int = 4096, tol: float = DEFAULT_TOL) -> Tuple[pd.DataFrame, float, float]:
    """Densities on the offset grid together with ``G(lam)`` and ``C(lam)``."""
    frame = density_frame(lam, points, tol)
    density = angular_density(float(lam), float(tol))
    return frame, density.G, density.normalization


def g_table(lambdas: Sequence[float], tol: float = DEFAULT_TOL) -> pd.DataFrame:
    """``G`` over a grid of ``lambda = r / c`` values, columns ``lambda, G``."""
    return g_scan(lambdas, tol)


def sample_trajectory(
    loaded: LoadedSystem,
    T: float,
    burn_in: Optional[float] = None,
    seed: int = 0,
    replica: int = 0,
) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """
    Jump path and per-segment trajectory of one Lyapunov replica.

    The path is the one :func:`estimate_lyapunov` samples for ``replica`` with
    the same ``seed``, on ``[0, burn_in + T]``.

    Returns
    -------
    tuple of pd.DataFrame
        The path table (``k, state, holding_time``, last row the residual
        hold) and the trajectory table (``t, state, log_radius, theta``).
    """
    if burn_in is None:
        burn_in = T / 10.0
    if not (T > burn_in >= 0) or not math.isfinite(T):
        raise ValueError(f'need T > burn_in >= 0, got T={T}, burn_in={burn_in}')
    path = replica_path(loaded.system, burn_in + T, seed, replica)
    logger.info(f'replica {replica} path: {path.jump_count} jumps on [0, {burn_in + T:g}]')
    return path.to_frame(), trajectory_frame(loaded.system, path)
