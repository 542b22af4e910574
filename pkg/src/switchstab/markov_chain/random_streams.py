"""
Counter-based random streams.

Every replica of every Monte Carlo operation draws from its own Philox stream,
derived from ``(seed, purpose, replica)`` through :class:`numpy.random.SeedSequence`.
Results therefore do not depend on how replicas are scheduled over threads.
"""

from enum import IntEnum

import numpy as np


class StreamPurpose(IntEnum):
    """Spawn-key prefix separating the streams of different operations."""

    PATH = 0
    LYAPUNOV = 1
    PROPAGATOR_NORM = 2
    MONOTONE_NORM = 3


def replica_stream(seed: int, replica: int = 0, purpose: StreamPurpose = StreamPurpose.PATH) -> np.random.Generator:
    """
    Return the generator for one replica of one operation.

    Parameters
    ----------
    seed : int
        Master seed (nonnegative).
    replica : int
        Replica index.
    purpose : StreamPurpose
        Operation the stream belongs to.
    """
    if seed < 0:
        raise ValueError(f'seed must be nonnegative, got {seed}')
    if replica < 0:
        raise ValueError(f'replica index must be nonnegative, got {replica}')
    sequence = np.random.SeedSequence(int(seed), spawn_key=(int(purpose), int(replica)))
    return np.random.Generator(np.random.Philox(sequence))
