"""
Stability of the one-transition planar family from the functional ``G``:
the top Lyapunov exponent is ``c G(r/c) - alpha``.
"""

import logging
import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy import optimize

from switchstab.exceptions import DomainError, WindowSearchError
from switchstab.logger import log_run_state
from switchstab.planar_analysis.angular_density import G_eval
from switchstab.planar_analysis.quadrature import DEFAULT_TOL

logger = logging.getLogger(__name__)

SCAN_RANGE = (1e-3, 1e3)
SCAN_POINTS = 60
GOLDEN_XTOL = 1e-6


@dataclass(frozen=True)
class PlanarParams:
    """
    Decay rate ``alpha`` and coupling ``c`` of the pair
    ``A_0 = [[-alpha, c], [0, -alpha]]``, ``A_1 = [[-alpha, 0], [-c, -alpha]]``.
    """

    alpha: float
    c: float

    def __post_init__(self):
        for name in ('alpha', 'c'):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f'{name} must be positive and finite, got {value}')
        object.__setattr__(self, 'alpha', float(self.alpha))
        object.__setattr__(self, 'c', float(self.c))

    def scaled(self, factor: float) -> 'PlanarParams':
        """Both rates divided by ``factor``."""
        return PlanarParams(self.alpha / factor, self.c / factor)


class StabilityTag(str, Enum):
    STABLE = 'Stable'
    UNSTABLE = 'Unstable'
    INCONCLUSIVE = 'Inconclusive'


@dataclass(frozen=True)
class StabilityVerdict:
    """
    Attributes
    ----------
    tag : StabilityTag
    analytic_exponent : float
        ``c G(r/c) - alpha``.
    margin : float
        Distance of the exponent from the tolerance band; negative when inconclusive.
    """

    tag: StabilityTag
    analytic_exponent: float
    margin: float


@dataclass(frozen=True)
class InstabilityWindow:
    """Rates ``a < r_star < b`` with a positive exponent inside ``(a, b)`` and a negative one outside."""

    a: float
    b: float
    r_star: float
    peak_exponent: float

    def __post_init__(self):
        if not (0 < self.a < self.r_star < self.b):
            raise WindowSearchError(f'window must satisfy 0 < a < r_star < b, got ({self.a}, {self.r_star}, {self.b})')
        if not self.peak_exponent > 0:
            raise WindowSearchError(f'peak exponent must be positive, got {self.peak_exponent}')

    def contains(self, r: float) -> bool:
        return self.a < r < self.b

    def to_dict(self) -> dict:
        return asdict(self)


def _check_rate(r: float) -> float:
    r = float(r)
    if not (r > 0 and math.isfinite(r)):
        raise DomainError(f'switching rate must be positive and finite, got {r}')
    return r


def lyapunov_analytic(params: PlanarParams, r: float, tol: float = DEFAULT_TOL) -> float:
    """
    Top Lyapunov exponent ``c G(r/c) - alpha`` of the planar pair switched at rate ``r``.

    Raises
    ------
    QuadratureError
        If ``G`` cannot be evaluated to ``tol``.
    """
    r = _check_rate(r)
    return params.c * G_eval(r / params.c, tol) - params.alpha


def classify(params: PlanarParams, r: float, tol: float = DEFAULT_TOL) -> StabilityVerdict:
    """Unstable above ``tol``, Stable below ``-tol``, Inconclusive in between."""
    exponent = lyapunov_analytic(params, r, tol)
    if exponent > tol:
        tag = StabilityTag.UNSTABLE
    elif exponent < -tol:
        tag = StabilityTag.STABLE
    else:
        tag = StabilityTag.INCONCLUSIVE
    return StabilityVerdict(tag=tag, analytic_exponent=exponent, margin=abs(exponent) - tol)


def sup_G(
    tol: float = DEFAULT_TOL,
    lam_range: Tuple[float, float] = SCAN_RANGE,
    points: int = SCAN_POINTS,
) -> Tuple[float, float]:
    """
    Maximizer and maximum of ``G`` over ``lam_range``.

    A logarithmic grid locates the peak, golden-section search refines it to
    relative width ``1e-6``.

    Raises
    ------
    WindowSearchError
        If the grid maximum sits on the boundary of ``lam_range``.
    """
    lo, hi = lam_range
    if not (0 < lo < hi) or points < 3:
        raise DomainError(f'need 0 < lo < hi and at least 3 points, got {lam_range}, {points}')
    grid = np.geomspace(lo, hi, points)
    values = np.array([G_eval(lam, tol) for lam in grid])
    i = int(np.argmax(values))
    if i == 0 or i == points - 1:
        raise WindowSearchError(
            f'G is largest at the scan boundary lambda={grid[i]:g}; widen the lambda range beyond [{lo:g}, {hi:g}]'
        )

    result = optimize.minimize_scalar(
        lambda lam: -G_eval(lam, tol),
        bracket=(grid[i - 1], grid[i], grid[i + 1]),
        method='golden',
        options={'xtol': GOLDEN_XTOL},
    )
    lam_star = float(result.x)
    g_star = float(-result.fun)
    if g_star < values[i]:
        lam_star, g_star = float(grid[i]), float(values[i])
    logger.debug(f'sup G = {g_star!r} at lambda = {lam_star!r} after {result.nfev} refinements')
    return lam_star, g_star


def find_window(
    params: PlanarParams,
    tol: float = DEFAULT_TOL,
    lam_range: Tuple[float, float] = SCAN_RANGE,
) -> Optional[InstabilityWindow]:
    """
    Instability window of the planar pair, or None when the exponent is
    nonpositive at every rate.

    The edges solve ``c G(r/c) = alpha`` on either side of ``r_star = c lambda*``
    and are located by bisection to relative width ``tol``. The result is
    certified by Stable verdicts at ``a/2`` and ``2b``.

    Raises
    ------
    WindowSearchError
        If the maximizer lies on the boundary of the scanned range, if the
        exponent is nonnegative at either end of the rate range ``c * lam_range``
        so that an edge cannot be bracketed, or if certification fails.
    """
    lam_star, g_star = sup_G(tol, lam_range)
    peak = params.c * g_star - params.alpha
    if peak <= tol:
        log_run_state(logger, {'status': 'window_found', 'r_star': None})
        return None

    r_star = params.c * lam_star
    r_lo, r_hi = params.c * lam_range[0], params.c * lam_range[1]

    def exponent(r):
        return lyapunov_analytic(params, r, tol)

    if exponent(r_lo) >= 0 or exponent(r_hi) >= 0:
        raise WindowSearchError(
            f'the exponent is nonnegative at the edge of the rate range [{r_lo:g}, {r_hi:g}]; widen the lambda range'
        )
    rtol = max(tol, 4 * np.finfo(float).eps)
    a = optimize.bisect(exponent, r_lo, r_star, xtol=1e-300, rtol=rtol)
    b = optimize.bisect(exponent, r_star, r_hi, xtol=1e-300, rtol=rtol)
    logger.debug(f'window edges a={a!r}, b={b!r} at relative width {rtol:g}')

    for r in (0.5 * a, 2.0 * b):
        verdict = classify(params, r, tol)
        if verdict.tag is not StabilityTag.STABLE:
            raise WindowSearchError(f'could not certify stability at r={r:g}: {verdict.tag.value}')
    if classify(params, r_star, tol).tag is not StabilityTag.UNSTABLE:
        raise WindowSearchError(f'could not certify instability at r_star={r_star:g}')

    window = InstabilityWindow(a=float(a), b=float(b), r_star=r_star, peak_exponent=peak)
    log_run_state(logger, {'status': 'window_found', **window.to_dict()})
    return window
