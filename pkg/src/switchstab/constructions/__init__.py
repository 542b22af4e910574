"""Named example systems and the multi-window block construction."""

from .examples import (
    example_fast_only,
    fast_only_system,
    planar_pair,
    planar_pair_relaxed,
    planar_system,
    two_state_generator,
)
from .multi_transition import MultiSystemSpec, block_lyapunov, multi_system, multi_transition

__all__ = [
    'example_fast_only',
    'fast_only_system',
    'planar_pair',
    'planar_pair_relaxed',
    'planar_system',
    'two_state_generator',
    'MultiSystemSpec',
    'block_lyapunov',
    'multi_system',
    'multi_transition',
]
