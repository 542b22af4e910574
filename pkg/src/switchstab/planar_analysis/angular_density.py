"""
Invariant angular density of the one-transition planar family.

For ``A_0 = [[-a, c], [0, -a]]`` and ``A_1 = [[-a, 0], [-c, -a]]`` switched at
rate ``r`` the angle has the stationary densities

    p_0(theta) = C csc^2(theta) lam H(theta),   p_1(theta) = C sec^2(theta) lam K(theta)

on ``(-pi/2, 0)`` with ``lam = r/c``, extended by
``p_i(theta) = p_{1-i}(theta + pi/2) = p_i(theta + pi)``. Here

    H(theta) = int_theta^0 exp(2 lam (cot 2y - cot 2theta)) sec^2(y) dy
    K(theta) = int_theta^0 exp(2 lam (cot 2y - cot 2theta)) csc^2(y) dy

and ``lam H + lam K = 1``. The exponent is nonpositive on the whole range.
Substituting ``s = 2 lam (cot 2theta - cot 2y)`` gives

    lam H = int_0^inf e^{-s} sin^2(y(s)) ds,   lam K = int_0^inf e^{-s} cos^2(y(s)) ds

with ``cot 2y(s) = cot 2theta - s/(2 lam)``, which is what is integrated
below. The reduced quantities ``h_0 = lam H / sin^2`` and
``k_1 = lam K / cos^2`` are bounded, so ``p_0 = C h_0`` and ``p_1 = C k_1``
carry no cancellation at either end of the interval.
"""

import logging
import math
from functools import cached_property, lru_cache
from typing import Tuple

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from switchstab.exceptions import DomainError
from switchstab.planar_analysis.quadrature import DEFAULT_TOL, integrate_batch

logger = logging.getLogger(__name__)

HALF_PI = 0.5 * math.pi
# Smallest tolerance requested from the inner integrals.
TOL_FLOOR = 5e-15
# Initial subdivision of the Laplace variable, as fractions of the truncated range.
LAPLACE_BREAKS = (0.02, 0.05, 0.1, 0.2, 0.4)
ANGLE_BREAKS = (0.25, 0.5, 0.75)
SINGULAR_GAP = 1e-3


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not lam > 0 or not math.isfinite(lam):
        raise DomainError(f'lambda must be positive and finite, got {lam}')
    return lam


def _check_tol(tol: float) -> float:
    tol = float(tol)
    if not tol > 0:
        raise DomainError(f'tolerance must be positive, got {tol}')
    return tol


def _cot2(theta: np.ndarray) -> np.ndarray:
    return np.cos(2.0 * theta) / np.sin(2.0 * theta)


def _squares(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    ``sin^2 y`` and ``cos^2 y`` for ``y`` in ``(-pi/2, 0)`` with ``cot 2y = x``,
    each evaluated without cancellation.
    """
    r = np.hypot(1.0, x)
    with np.errstate(over='ignore', divide='ignore'):
        sin_sq = np.where(x < 0, 0.5 / (r * (r - x)), 0.5 * (r + x) / r)
        cos_sq = np.where(x > 0, 0.5 / (r * (r + x)), 0.5 * (r - x) / r)
    return sin_sq, cos_sq


def reduced_integrals(thetas: ArrayLike, lam: float, tol) -> Tuple[np.ndarray, np.ndarray]:
    """
    ``h_0 = lam H / sin^2(theta)`` and ``k_1 = lam K / cos^2(theta)`` for
    ``theta`` strictly inside ``(-pi/2, 0)``.

    Parameters
    ----------
    thetas : array_like
        Angles in ``(-pi/2, 0)``.
    lam : float
        ``r / c``.
    tol : float or array_like
        Absolute tolerance on ``h_0`` and ``k_1`` per angle.
    """
    lam = _check_lambda(lam)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    if thetas.size == 0:
        return np.empty(0), np.empty(0)
    tol = np.maximum(np.broadcast_to(np.asarray(tol, dtype=np.float64), thetas.shape), TOL_FLOOR)

    x0 = _cot2(thetas)
    sin0, cos0 = _squares(x0)
    # Integrands are bounded by e^{-s} and e^{-s}/cos^2, which fixes the truncation.
    upper = 2.0 + np.log(1.0 / tol) + np.maximum(0.0, -np.log(cos0))
    upper = np.maximum(upper, 30.0)

    def integrand(s, idx):
        x = x0[idx, None] - s / (2.0 * lam)
        sin_sq, cos_sq = _squares(x)
        decay = np.exp(-s)
        return np.stack((decay * sin_sq / sin0[idx, None], decay * cos_sq / cos0[idx, None]))

    result = integrate_batch(
        integrand,
        np.zeros_like(thetas),
        upper,
        tol,
        breakpoints=LAPLACE_BREAKS,
    )
    return result.value[0], result.value[1]


def _check_base(theta: np.ndarray, closed: bool) -> None:
    lower_ok = theta > -HALF_PI
    upper_ok = theta <= 0.0 if closed else theta < 0.0
    if not np.all(lower_ok & upper_ok):
        interval = '(-pi/2, 0]' if closed else '(-pi/2, 0)'
        bad = theta[~(lower_ok & upper_ok)][0]
        raise DomainError(f'angle {bad!r} outside {interval}')


def _scalar_or_array(values: np.ndarray, like):
    return float(values[0]) if np.ndim(like) == 0 else values


def H_eval(theta: ArrayLike, lam: float, tol: float = DEFAULT_TOL):
    """
    ``H(theta; lam)`` on ``(-pi/2, 0]`` to absolute tolerance ``tol``; ``H(0) = 0``.

    Raises
    ------
    DomainError
        If an angle is outside ``(-pi/2, 0]`` or ``lam <= 0``.
    QuadratureError
        If the quadrature exhausts its panel budget.
    """
    lam = _check_lambda(lam)
    tol = _check_tol(tol)
    th = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    _check_base(th, closed=True)
    out = np.zeros(th.shape)
    inside = th < 0
    if np.any(inside):
        sin_sq = np.sin(th[inside]) ** 2
        h0, _ = reduced_integrals(th[inside], lam, tol * lam / sin_sq)
        out[inside] = sin_sq * h0 / lam
    return _scalar_or_array(out, theta)


def K_eval(theta: ArrayLike, lam: float, tol: float = DEFAULT_TOL):
    """
    ``K(theta; lam)`` on ``(-pi/2, 0]``, the complement with ``lam H + lam K = 1``;
    ``K(0) = 1/lam``.
    """
    lam = _check_lambda(lam)
    tol = _check_tol(tol)
    th = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    _check_base(th, closed=True)
    out = np.full(th.shape, 1.0 / lam)
    inside = th < 0
    if np.any(inside):
        cos_sq = np.cos(th[inside]) ** 2
        _, k1 = reduced_integrals(th[inside], lam, tol * lam / cos_sq)
        out[inside] = cos_sq * k1 / lam
    return _scalar_or_array(out, theta)


def H_deriv(theta: ArrayLike, lam: float, tol: float = DEFAULT_TOL):
    """
    ``H'(theta) = lam H (sec^2 + csc^2) - sec^2`` on ``(-pi/2, 0)``, evaluated
    from the identity rather than by differencing.
    """
    lam = _check_lambda(lam)
    th = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    _check_base(th, closed=False)
    H = np.atleast_1d(H_eval(th, lam, tol))
    sec_sq = 1.0 / np.cos(th) ** 2
    csc_sq = 1.0 / np.sin(th) ** 2
    return _scalar_or_array(lam * H * (sec_sq + csc_sq) - sec_sq, theta)


def reduce_angle(theta: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """
    Map angles to the fundamental domain ``(-pi/2, 0]``.

    Returns
    -------
    base : np.ndarray
        Equivalent angle in ``(-pi/2, 0]``.
    swap : np.ndarray of bool
        True where ``p_i(theta) = p_{1-i}(base)``, else ``p_i(theta) = p_i(base)``.
    """
    th = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    s = np.mod(th, math.pi)
    swap = (s > 0.0) & (s <= HALF_PI)
    base = np.where(s == 0.0, 0.0, np.where(swap, s - HALF_PI, s - math.pi))
    return base, swap


class AngularDensity:
    """
    Stationary angular densities ``p_0, p_1`` for a fixed ``lam = r/c``.

    ``C`` and ``G`` are computed on first use and cached; the object is
    otherwise immutable.

    Parameters
    ----------
    lam : float
        Ratio ``r/c > 0``.
    tol : float
        Absolute quadrature tolerance.
    """

    def __init__(self, lam: float, tol: float = DEFAULT_TOL):
        self._lam = _check_lambda(lam)
        self._tol = _check_tol(tol)

    def __repr__(self) -> str:
        return f'AngularDensity(lam={self._lam!r}, tol={self._tol!r})'

    @property
    def lam(self) -> float:
        return self._lam

    @property
    def tol(self) -> float:
        return self._tol

    @cached_property
    def _moments(self) -> Tuple[float, float]:
        """``int (h_0 + k_1)`` and ``int (h_0 - k_1) sin cos`` over ``(-pi/2, 0)``."""
        inner_tol = 0.2 * self._tol

        def integrand(theta, idx):
            h0, k1 = reduced_integrals(theta.ravel(), self._lam, inner_tol)
            h0 = h0.reshape(theta.shape)
            k1 = k1.reshape(theta.shape)
            return np.stack((h0 + k1, (h0 - k1) * np.sin(theta) * np.cos(theta)))

        result = integrate_batch(
            integrand, np.array([-HALF_PI]), np.array([0.0]), 0.4 * self._tol, breakpoints=ANGLE_BREAKS
        )
        total, moment = float(result.value[0, 0]), float(result.value[1, 0])
        logger.debug(f'lam={self._lam:g}: moments {total!r}, {moment!r} from {int(result.panels[0])} panels')
        return total, moment

    @cached_property
    def normalization(self) -> float:
        """The constant ``C(lam)``."""
        return 1.0 / (4.0 * self._moments[0])

    @cached_property
    def G(self) -> float:
        """``G(lam) = int_0^{2pi} (p_0 - p_1) cos sin``."""
        total, moment = self._moments
        return moment / total

    def densities(self, theta: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        """``(p_0(theta), p_1(theta))`` for any real angles, with ``p_0(0) = 0`` and ``p_1(0) = C``."""
        base, swap = reduce_angle(theta)
        C = self.normalization
        p0 = np.zeros(base.shape)
        p1 = np.full(base.shape, C)
        inside = base < 0
        if np.any(inside):
            h0, k1 = reduced_integrals(base[inside], self._lam, self._tol / C)
            p0[inside] = C * h0
            p1[inside] = C * k1
        return np.where(swap, p1, p0), np.where(swap, p0, p1)

    def density(self, theta: ArrayLike, i: int):
        """``p_i(theta)``."""
        if i not in (0, 1):
            raise DomainError(f'state must be 0 or 1, got {i}')
        values = self.densities(theta)[i]
        return _scalar_or_array(values, theta)

    def stationarity_residual(self, grid: ArrayLike, p0_scale: float = 1.0) -> float:
        """
        Largest ``|L* p|`` over ``grid`` and both states, with ``c = 1`` and ``r = lam``.

        The drift term ``d/dtheta (sin^2 p_0)`` equals ``C lam H'`` on the
        fundamental domain and is evaluated through :func:`H_deriv`.
        ``p0_scale`` multiplies ``p_0`` to probe the sensitivity of the check.

        Raises
        ------
        DomainError
            If a grid angle lies within ``1e-3`` of a multiple of ``pi/2``.
        """
        grid = np.atleast_1d(np.asarray(grid, dtype=np.float64))
        offset = np.abs(np.mod(grid + 0.25 * math.pi, HALF_PI) - 0.25 * math.pi)
        if np.any(offset < SINGULAR_GAP):
            bad = grid[offset < SINGULAR_GAP][0]
            raise DomainError(f'grid angle {bad!r} is within {SINGULAR_GAP:g} of a multiple of pi/2')

        base, swap = reduce_angle(grid)
        lam = self._lam
        C = self.normalization
        h0, k1 = reduced_integrals(base, lam, 0.1 * self._tol / C)
        dH = np.atleast_1d(H_deriv(base, lam, 0.1 * self._tol / C))

        q0_base, q1_base = C * h0, C * k1
        d0_base = C * lam * dH
        d1_base = -d0_base
        q0 = np.where(swap, q1_base, q0_base)
        q1 = np.where(swap, q0_base, q1_base)
        d0 = np.where(swap, d1_base, d0_base)
        d1 = np.where(swap, d0_base, d1_base)

        r0 = p0_scale * d0 + lam * (q1 - p0_scale * q0)
        r1 = d1 + lam * (p0_scale * q0 - q1)
        return float(max(np.abs(r0).max(), np.abs(r1).max()))


@lru_cache(maxsize=4096)
def angular_density(lam: float, tol: float = DEFAULT_TOL) -> AngularDensity:
    """Shared :class:`AngularDensity` per ``(lam, tol)`` so ``C`` and ``G`` are computed once."""
    return AngularDensity(lam, tol)


def C_const(lam: float, tol: float = DEFAULT_TOL) -> float:
    """Normalizing constant ``C(lam)``."""
    return angular_density(_check_lambda(lam), _check_tol(tol)).normalization


def G_eval(lam: float, tol: float = DEFAULT_TOL) -> float:
    """
    Stability functional ``G(lam) = 4 int_{-pi/2}^0 (p_0 - p_1) cos sin``.

    Raises
    ------
    QuadratureError
        If the quadrature exhausts its panel budget.
    """
    return angular_density(_check_lambda(lam), _check_tol(tol)).G


def density(theta: ArrayLike, i: int, lam: float, tol: float = DEFAULT_TOL):
    """``p_i(theta; lam)`` for any real ``theta``."""
    return angular_density(_check_lambda(lam), _check_tol(tol)).density(theta, i)


def stationarity_residual(lam: float, grid: ArrayLike, tol: float = DEFAULT_TOL, p0_scale: float = 1.0) -> float:
    """Largest ``|L* p|`` over ``grid``; see :meth:`AngularDensity.stationarity_residual`."""
    return angular_density(_check_lambda(lam), _check_tol(tol)).stationarity_residual(grid, p0_scale)


def g_scan(lambdas: ArrayLike, tol: float = DEFAULT_TOL) -> pd.DataFrame:
    """``G`` on a grid of ``lam`` values, columns ``lambda, G``."""
    lambdas = np.asarray(lambdas, dtype=np.float64)
    return pd.DataFrame({'lambda': lambdas, 'G': [G_eval(lam, tol) for lam in lambdas]})


def density_frame(lam: float, points: int = 4096, tol: float = DEFAULT_TOL) -> pd.DataFrame:
    """
    Densities on the offset uniform grid ``theta_k = (k + 1/2) 2 pi / points``,
    columns ``theta, p0, p1``.
    """
    if points < 4:
        raise DomainError(f'need at least 4 grid points, got {points}')
    theta = (np.arange(points) + 0.5) * (2.0 * math.pi / points)
    p0, p1 = angular_density(_check_lambda(lam), _check_tol(tol)).densities(theta)
    return pd.DataFrame({'theta': theta, 'p0': p0, 'p1': p1})
