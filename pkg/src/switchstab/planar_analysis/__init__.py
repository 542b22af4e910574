"""Closed-form analysis of the one-transition planar family."""

from .quadrature import DEFAULT_TOL, QuadratureResult, adaptive_gauss_legendre, integrate_batch
from .angular_density import (
    AngularDensity,
    C_const,
    G_eval,
    H_deriv,
    H_eval,
    K_eval,
    angular_density,
    density,
    density_frame,
    g_scan,
    reduce_angle,
    stationarity_residual,
)
from .stability import (
    InstabilityWindow,
    PlanarParams,
    StabilityTag,
    StabilityVerdict,
    classify,
    find_window,
    lyapunov_analytic,
    sup_G,
)

__all__ = [
    'DEFAULT_TOL',
    'QuadratureResult',
    'adaptive_gauss_legendre',
    'integrate_batch',
    'AngularDensity',
    'C_const',
    'G_eval',
    'H_deriv',
    'H_eval',
    'K_eval',
    'angular_density',
    'density',
    'density_frame',
    'g_scan',
    'reduce_angle',
    'stationarity_residual',
    'InstabilityWindow',
    'PlanarParams',
    'StabilityTag',
    'StabilityVerdict',
    'classify',
    'find_window',
    'lyapunov_analytic',
    'sup_G',
]
