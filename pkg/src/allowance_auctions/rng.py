"""Seeding.

Every invocation has one root seed. Trial ``i`` runs on its own generator
seeded with ``splitmix64(root XOR i)``, so trials can be evaluated in any
order (or in parallel) and still reproduce bit-for-bit.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def trial_seed(root: int, index: int) -> int:
    return splitmix64((int(root) ^ int(index)) & MASK64)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & MASK64))


def trial_rng(root: int, index: int) -> np.random.Generator:
    return make_rng(trial_seed(root, index))


INSTANCE_STREAM = 0x5EED


def instance_rng(root: int, index: int) -> np.random.Generator:
    """Generator for drawing instance ``index``, disjoint from mechanism seeds."""
    return trial_rng(int(root) ^ INSTANCE_STREAM, index)
