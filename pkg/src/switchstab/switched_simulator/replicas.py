"""
Run independent Monte Carlo replicas, optionally on a thread pool.

The compiled kernels release the GIL, so threads give real parallelism.
Results always come back in replica-index order.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, TypeVar

from tqdm import tqdm

logger = logging.getLogger(__name__)

T = TypeVar('T')


def resolve_workers(workers: int | None) -> int:
    """``None`` or ``0`` means one worker per CPU."""
    if workers is None or workers == 0:
        return os.cpu_count() or 1
    if workers < 0:
        raise ValueError(f'workers must be nonnegative, got {workers}')
    return workers


def run_replicas(
    replica: Callable[[int], T],
    n_reps: int,
    workers: int | None = 1,
    progress: bool = False,
    desc: str = 'Replicas',
) -> List[T]:
    """
    Evaluate ``replica(k)`` for ``k = 0, ..., n_reps - 1``.

    Parameters
    ----------
    replica : callable
        Pure function of the replica index.
    n_reps : int
        Number of replicas.
    workers : int, optional
        Thread count; 1 runs serially.
    progress : bool
        Show a tqdm progress bar.
    desc : str
        Progress bar label.

    Returns
    -------
    list
        ``[replica(0), ..., replica(n_reps - 1)]``.
    """
    n_workers = min(resolve_workers(workers), max(n_reps, 1))
    logger.debug(f'running {n_reps} replicas on {n_workers} worker(s)')
    pbar = tqdm(total=n_reps, desc=desc, unit='rep', disable=not progress, leave=False)
    try:
        if n_workers == 1:
            results = []
            for k in range(n_reps):
                results.append(replica(k))
                pbar.update(1)
            return results

        def _tracked(k: int) -> T:
            value = replica(k)
            pbar.update(1)
            return value

        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            # map yields in submission order regardless of completion order
            return list(pool.map(_tracked, range(n_reps)))
    finally:
        pbar.close()
