"""Seed handling. Every stochastic entry point takes an explicit seed."""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator from an int seed; an existing Generator passes through."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"an explicit integer seed is required, got {seed!r}")
    return np.random.Generator(np.random.PCG64(int(seed) & MASK64))


def draw_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**63 - 1))


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(master: int, index: int, stream: int = 0) -> int:
    """Seed for replicate ``index`` of grid point ``stream``.

    Injective in ``(stream, index)`` for both below 2**32 because splitmix64 is
    a bijection on 64-bit words.
    """
    if not (0 <= index < 2**32 and 0 <= stream < 2**32):
        raise ValueError("index and stream must lie in [0, 2**32)")
    return splitmix64((int(master) & MASK64) ^ splitmix64((stream << 32) | index))


def spawn_seeds(seed, count: int) -> list[int]:
    base = draw_seed(seed) if isinstance(seed, np.random.Generator) else int(seed)
    return [derive_seed(base, i) for i in range(count)]
