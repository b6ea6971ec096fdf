"""Seeded random streams.

Every stochastic routine takes an integer seed. Sub-streams are derived with
numpy's ``SeedSequence`` spawn keys: trial ``i`` under master seed ``s`` uses
``SeedSequence(s, spawn_key=(i,))``, which is exactly the ``i``-th child that
``SeedSequence(s).spawn`` would produce. Serial and parallel runs therefore
draw identical numbers for each trial. The bit generator is PCG64.
"""

from __future__ import annotations

import numpy as np

SEED_MASK = (1 << 64) - 1


def _sequence(seed: int, keys: tuple[int, ...]) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(seed) & SEED_MASK, spawn_key=tuple(int(k) for k in keys))


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """PCG64 generator for ``seed`` and the (possibly empty) key path ``keys``."""
    return np.random.Generator(np.random.PCG64(_sequence(seed, keys)))


def derive_seed(seed: int, *keys: int) -> int:
    """64-bit integer seed for the sub-stream at ``keys`` under ``seed``."""
    state = _sequence(seed, keys).generate_state(2, dtype=np.uint32)
    return (int(state[0]) << 32) | int(state[1])
