"""Order-preserving parallel map for independent seeded trials."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

THREADS_ENV = "GCLAB_THREADS"


def default_workers() -> int:
    """Worker cap from ``GCLAB_THREADS`` (default 1, i.e. serial)."""
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def map_trials(fn, jobs: list, workers: int | None = None) -> list:
    """``[fn(j) for j in jobs]``, possibly across processes.

    Every job carries its own seed, so the result is identical for any
    ``workers``.
    """
    if workers is None:
        workers = default_workers()
    if workers <= 1 or len(jobs) < 2:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
