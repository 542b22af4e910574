"""
Adaptive composite Gauss-Legendre quadrature.

Panels carry a 15-point Gauss-Legendre rule. A panel is accepted when the
rule on the whole panel and the sum of the rules on its two halves agree to
within the panel's share of the tolerance (proportional to its length);
otherwise it is bisected. The batch driver integrates many integrals at once
so each refinement round evaluates the integrand a single time on every open
panel. Integrands may be vector-valued.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from switchstab.exceptions import QuadratureError

logger = logging.getLogger(__name__)

ORDER = 15
MAX_PANELS = 10_000
DEFAULT_TOL = 1e-10

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(ORDER)
# Nodes of the two half-panels followed by the full panel, on [-1, 1].
_ALL_NODES = np.concatenate((0.5 * (_NODES - 1.0), 0.5 * (_NODES + 1.0), _NODES))


@dataclass(frozen=True)
class QuadratureResult:
    """Integral estimate, error estimate and number of accepted panels."""

    value: np.ndarray
    error: np.ndarray
    panels: np.ndarray


def integrate_batch(
    integrand: Callable[[np.ndarray, np.ndarray], np.ndarray],
    lower: np.ndarray,
    upper: np.ndarray,
    tol,
    max_panels: int = MAX_PANELS,
    breakpoints: Optional[Sequence[float]] = None,
) -> QuadratureResult:
    """
    Integrate ``m`` integrals over ``[lower[j], upper[j]]`` simultaneously.

    Parameters
    ----------
    integrand : callable
        ``integrand(x, idx)`` with nodes ``x`` of shape ``(p, q)`` and the
        integral index ``idx`` of each row (shape ``(p,)``); returns values of
        shape ``(p, q)`` or ``(k, p, q)`` for ``k`` components.
    lower, upper : np.ndarray
        Integration limits, shape ``(m,)``, ``lower < upper``.
    tol : float or np.ndarray
        Absolute tolerance per integral (max over components).
    max_panels : int
        Panel budget per integral.
    breakpoints : sequence of float, optional
        Initial subdivision as fractions of each interval, e.g. ``[0.1, 0.5]``.

    Returns
    -------
    QuadratureResult
        ``value`` has shape ``(m,)`` or ``(k, m)``.

    Raises
    ------
    QuadratureError
        If some integral exhausts its panel budget.
    """
    lower = np.atleast_1d(np.asarray(lower, dtype=np.float64))
    upper = np.atleast_1d(np.asarray(upper, dtype=np.float64))
    m = lower.shape[0]
    tol = np.broadcast_to(np.asarray(tol, dtype=np.float64), (m,))
    length = upper - lower

    fractions = np.concatenate(([0.0], np.asarray(breakpoints if breakpoints is not None else [], float), [1.0]))
    n_init = fractions.shape[0] - 1
    idx = np.repeat(np.arange(m), n_init)
    a = (lower[:, None] + fractions[None, :-1] * length[:, None]).ravel()
    b = (lower[:, None] + fractions[None, 1:] * length[:, None]).ravel()

    value = None
    error = np.zeros(m)
    panels = np.zeros(m, dtype=np.int64)
    spent = np.full(m, n_init, dtype=np.int64)

    while idx.size:
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        # The half-panel nodes map to [a, mid] and [mid, b]; the full-panel nodes to [a, b].
        x = mid[:, None] + half[:, None] * _ALL_NODES[None, :]
        fx = np.asarray(integrand(x, idx), dtype=np.float64)
        vector = fx.ndim == 3
        if not vector:
            fx = fx[None, ...]
        if value is None:
            value = np.zeros((fx.shape[0], m))

        fine = 0.5 * half * (fx[:, :, :ORDER] @ _WEIGHTS + fx[:, :, ORDER : 2 * ORDER] @ _WEIGHTS)
        coarse = half * (fx[:, :, 2 * ORDER :] @ _WEIGHTS)
        est = np.max(np.abs(fine - coarse), axis=0)

        share = tol[idx] * (b - a) / length[idx]
        if not np.all(np.isfinite(est)):
            bad = int(idx[~np.isfinite(est)][0])
            raise QuadratureError(
                f'integrand is not finite on [{lower[bad]}, {upper[bad]}]', estimate=float('nan'), error=float('inf')
            )
        tiny = (b - a) <= 1e-14 * np.maximum(1.0, np.abs(mid))
        done = (est <= share) | tiny
        if np.any(tiny & (est > share)):
            logger.debug('accepting panels at the resolution limit')

        for k in range(value.shape[0]):
            np.add.at(value[k], idx[done], fine[k, done])
        np.add.at(error, idx[done], est[done])
        np.add.at(panels, idx[done], 1)

        open_idx = idx[~done]
        if open_idx.size:
            np.add.at(spent, open_idx, 1)
            over = np.unique(open_idx[spent[open_idx] > max_panels])
            if over.size:
                j = int(over[0])
                remaining = fine[:, ~done][:, open_idx == j].sum(axis=1)
                estimate = value[:, j] + remaining
                raise QuadratureError(
                    f'adaptive quadrature exceeded {max_panels} panels on [{lower[j]}, {upper[j]}]',
                    estimate=float(estimate[0]) if estimate.shape[0] == 1 else estimate.tolist(),
                    error=float(error[j] + est[~done][open_idx == j].sum()),
                )

        a_open, b_open, mid_open = a[~done], b[~done], mid[~done]
        idx = np.concatenate((open_idx, open_idx))
        a = np.concatenate((a_open, mid_open))
        b = np.concatenate((mid_open, b_open))

    if value is None:
        value = np.zeros((1, m))
        vector = False
    logger.debug(f'quadrature used {int(panels.sum())} panels for {m} integral(s)')
    out = value if vector else value[0]
    return QuadratureResult(value=out, error=error, panels=panels)


def adaptive_gauss_legendre(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    max_panels: int = MAX_PANELS,
    breakpoints: Optional[Sequence[float]] = None,
):
    """
    Integrate ``f`` over ``[a, b]`` to absolute tolerance ``tol``.

    ``f`` receives a flat array of nodes and returns an array of the same
    length, or ``(k, n)`` for a vector-valued integrand.

    Returns
    -------
    value, error : float or np.ndarray
    """
    if not a < b:
        raise ValueError(f'need a < b, got [{a}, {b}]')

    def batch(x, idx):
        fx = np.asarray(f(x.ravel()), dtype=np.float64)
        return fx.reshape(fx.shape[:-1] + x.shape)

    result = integrate_batch(batch, np.array([a]), np.array([b]), tol, max_panels, breakpoints)
    value = result.value[..., 0]
    if value.ndim == 0:
        value = float(value)
    return value, float(result.error[0])
