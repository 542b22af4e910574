"""
switchstab: Stability of Markov-switched linear systems
=======================================================

Linear ODEs ``dX/dt = A_{I_t} X`` whose matrix is chosen by a continuous-time
Markov chain switching at rate ``r``. The package simulates the switched
process, estimates Lyapunov exponents and propagator norms, evaluates the
closed-form invariant densities of a planar family, and locates the switching
rates at which a system of Hurwitz matrices becomes unstable.

Main API Functions
------------------
Loading:
    - load_system: Load and validate a system spec file
    - check_system: Report the classical stability hypotheses

Estimation:
    - estimate_lyapunov: Monte Carlo top Lyapunov exponent
    - scan_rates: Exponents across switching rates
    - kurtz_table: Expected propagator norms against the averaged flow
    - sample_trajectory: Jump path and trajectory of one replica

Planar family:
    - locate_window: Instability window of the planar pair
    - construct_multi: Block system with several windows
    - g_table: The function G over a lambda grid

Examples
--------
>>> import switchstab
>>> loaded = switchstab.load_system('planar.json')
>>> switchstab.estimate_lyapunov(loaded, T=1000.0, reps=64, seed=1)
"""

from .__version__ import __version__

from .application_interfaces.api import (
    LoadedSystem,
    check_system,
    construct_multi,
    estimate_lyapunov,
    g_table,
    kurtz_table,
    load_system,
    locate_window,
    sample_trajectory,
    scan_rates,
)

__all__ = [
    '__version__',
    'LoadedSystem',
    'check_system',
    'construct_multi',
    'estimate_lyapunov',
    'g_table',
    'kurtz_table',
    'load_system',
    'locate_window',
    'sample_trajectory',
    'scan_rates',
]
