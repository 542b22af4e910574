"""
Matrix exponentials.

The public :func:`mat_exp` validates its input, takes the closed-form path for
matrices of the form ``-alpha I + c N`` with ``N^2 = 0`` and otherwise calls
:func:`scipy.linalg.expm`. The ``@njit`` kernels below are used by the
propagation loops in :mod:`switchstab.switched_simulator.propagation`: a
closed form for 2x2 blocks and a Pade(13) scaling-and-squaring kernel for
anything larger.
"""

import math

import numpy as np
import scipy.linalg
from numba import njit
from numpy.typing import ArrayLike

from switchstab.exceptions import NonFiniteMatrixError, OverflowRiskError
from switchstab.linear_algebra.square_matrix import as_square_matrix

# exp(709.78) is the largest finite double.
MAX_NORM_TIME = 700.0
NILPOTENT_TOL = 1e-14


def mat_exp(A: ArrayLike, t: float = 1.0) -> np.ndarray:
    """
    Compute ``exp(A t)``.

    Parameters
    ----------
    A : array_like
        Square real matrix.
    t : float
        Nonnegative finite time.

    Returns
    -------
    np.ndarray
        Read-only ``exp(A t)``.

    Raises
    ------
    OverflowRiskError
        If ``||A|| t`` is large enough for the result to overflow. Long horizons
        should go through ``propagate_polar`` which tracks the log-norm instead.
    """
    A = as_square_matrix(A)
    t = float(t)
    if not math.isfinite(t):
        raise NonFiniteMatrixError(f'time must be finite, got {t}')
    if t < 0:
        raise ValueError(f'time must be nonnegative, got {t}')

    norm_t = float(np.linalg.norm(A, 2)) * t
    if norm_t > MAX_NORM_TIME:
        raise OverflowRiskError(
            f'||A||*t = {norm_t:.6g} exceeds {MAX_NORM_TIME:g}; exp(A t) may overflow. '
            'Use propagate_polar to track log-norms over long horizons.'
        )

    fast = _shifted_nilpotent_exp(A, t)
    if fast is not None:
        result = fast
    else:
        result = scipy.linalg.expm(A * t)

    result = np.asarray(result, dtype=np.float64)
    result.setflags(write=False)
    return result


def _shifted_nilpotent_exp(A: np.ndarray, t: float):
    """``exp(A t) = e^{-alpha t} (I + t N)`` when ``A = -alpha I + N`` with ``N^2 = 0``, else None."""
    d = A.shape[0]
    shift = np.trace(A) / d
    N = A - shift * np.eye(d)
    scale = max(1.0, float(np.abs(N).max()) ** 2)
    if np.abs(N @ N).max() > NILPOTENT_TOL * scale:
        return None
    return math.exp(shift * t) * (np.eye(d) + t * N)


@njit(cache=True, nogil=True)
def expm_2x2(a, b, c, d):
    """
    Closed-form exponential of ``[[a, b], [c, d]]``.

    With ``s = (a + d)/2``, ``p = (a - d)/2`` and ``delta^2 = p^2 + b c`` the
    exponential is ``e^s (cosh(delta) I + sinh(delta)/delta (A - s I))``.
    For large real ``delta`` the diagonal uses the split
    ``e^{s+delta}, e^{s-delta}`` form so no large terms cancel.
    """
    s = 0.5 * (a + d)
    p = 0.5 * (a - d)
    delta_sq = p * p + b * c
    result = np.empty((2, 2))
    if abs(delta_sq) < 1e-30:
        exp_s = math.exp(s)
        result[0, 0] = exp_s * (1.0 + p)
        result[0, 1] = exp_s * b
        result[1, 0] = exp_s * c
        result[1, 1] = exp_s * (1.0 - p)
    elif delta_sq > 0.0:
        delta = math.sqrt(delta_sq)
        if delta < 1.0:
            exp_s = math.exp(s)
            ch = math.cosh(delta)
            shd = math.sinh(delta) / delta
            result[0, 0] = exp_s * (ch + p * shd)
            result[0, 1] = exp_s * b * shd
            result[1, 0] = exp_s * c * shd
            result[1, 1] = exp_s * (ch - p * shd)
        else:
            e_plus = math.exp(s + delta)
            e_minus = math.exp(s - delta)
            shd = 0.5 * (e_plus - e_minus) / delta
            # m = 1 - |p|/delta without cancellation
            m = (b * c) / (delta * (delta + abs(p)))
            if p >= 0.0:
                result[0, 0] = 0.5 * ((2.0 - m) * e_plus + m * e_minus)
                result[1, 1] = 0.5 * (m * e_plus + (2.0 - m) * e_minus)
            else:
                result[0, 0] = 0.5 * (m * e_plus + (2.0 - m) * e_minus)
                result[1, 1] = 0.5 * ((2.0 - m) * e_plus + m * e_minus)
            result[0, 1] = b * shd
            result[1, 0] = c * shd
    else:
        exp_s = math.exp(s)
        delta = math.sqrt(-delta_sq)
        co = math.cos(delta)
        sid = math.sin(delta) / delta
        result[0, 0] = exp_s * (co + p * sid)
        result[0, 1] = exp_s * b * sid
        result[1, 0] = exp_s * c * sid
        result[1, 1] = exp_s * (co - p * sid)
    return result


@njit(cache=True, nogil=True)
def _onenorm(A):
    n = A.shape[0]
    result = 0.0
    for j in range(n):
        col_sum = 0.0
        for i in range(n):
            col_sum += abs(A[i, j])
        if col_sum > result:
            result = col_sum
    return result


@njit(cache=True, nogil=True)
def _solve_in_place(A, B):
    """Solve ``A X = B`` by Gaussian elimination with partial pivoting; overwrites both."""
    n = A.shape[0]
    for k in range(n):
        max_val = abs(A[k, k])
        max_row = k
        for i in range(k + 1, n):
            if abs(A[i, k]) > max_val:
                max_val = abs(A[i, k])
                max_row = i
        if max_row != k:
            for j in range(k, n):
                tmp = A[k, j]
                A[k, j] = A[max_row, j]
                A[max_row, j] = tmp
            for j in range(n):
                tmp = B[k, j]
                B[k, j] = B[max_row, j]
                B[max_row, j] = tmp
        for i in range(k + 1, n):
            factor = A[i, k] / A[k, k]
            for j in range(k + 1, n):
                A[i, j] -= factor * A[k, j]
            A[i, k] = 0.0
            for j in range(n):
                B[i, j] -= factor * B[k, j]
    for k in range(n - 1, -1, -1):
        for j in range(n):
            for i in range(k + 1, n):
                B[k, j] -= A[k, i] * B[i, j]
            B[k, j] /= A[k, k]
    return B


@njit(cache=True, nogil=True)
def expm_pade13(A):
    """Pade(13) scaling-and-squaring exponential of a square matrix."""
    n = A.shape[0]
    norm_A = _onenorm(A)
    ident = np.eye(n)
    if norm_A == 0.0:
        return ident
    s = 0
    if norm_A > 5.4:
        s = int(math.ceil(math.log2(norm_A / 5.4)))
        A = A / (2.0**s)
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A2 @ A4
    W1 = A6 + 16380.0 * A4 + 40840800.0 * A2
    W2 = A6 @ W1 + 33522128640.0 * A6 + 10559470521600.0 * A4 + 1187353796428800.0 * A2
    W2 += 32382376266240000.0 * ident
    U = A @ W2
    Z1 = 182.0 * A6 + 960960.0 * A4 + 1323241920.0 * A2
    V = A6 @ Z1 + 670442572800.0 * A6 + 129060195264000.0 * A4 + 7771770303897600.0 * A2
    V += 64764752532480000.0 * ident
    R = _solve_in_place(V - U, V + U)
    for _ in range(s):
        R = R @ R
    return R


@njit(cache=True, nogil=True)
def expm_kernel(A, t):
    """``exp(A t)`` for use inside compiled loops; dispatches on the dimension."""
    n = A.shape[0]
    if n == 1:
        out = np.empty((1, 1))
        out[0, 0] = math.exp(A[0, 0] * t)
        return out
    if n == 2:
        return expm_2x2(A[0, 0] * t, A[0, 1] * t, A[1, 0] * t, A[1, 1] * t)
    return expm_pade13(A * t)
