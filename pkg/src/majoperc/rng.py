"""Stateless seed derivation for reproducible parallel trials.

Every random object in the package is driven by a numpy ``Generator`` over
``PCG64`` seeded with a single 64-bit integer.  Per-task seeds are derived by
folding task coordinates into the master seed with the SplitMix64 finalizer,
so a task's randomness depends only on its coordinates and never on the order
in which a worker pool happens to schedule it.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    z = (x + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, *coords: int) -> int:
    """Mix ``coords`` into ``master``; the result is a 64-bit seed."""
    h = splitmix64(master & MASK64)
    for c in coords:
        h = splitmix64(h ^ splitmix64(c & MASK64))
    return h


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & MASK64))
