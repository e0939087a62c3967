"""Deterministic random streams.

Every random draw in the package goes through :func:`uniform_stream`, which
takes raw 64-bit outputs of numpy's PCG64 bit generator (a stable, documented
algorithm) and maps them to doubles in [0, 1) as ``(x >> 11) * 2**-53``.
Numpy's distribution methods are deliberately avoided because their streams
are not guaranteed stable across numpy releases.

Per-trial substreams are derived with :func:`mix_seed`, a SplitMix64 finaliser
applied to ``seed + (trial + 1) * 0x9E3779B97F4A7C15``.
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


def mix_seed(seed: int, trial: int) -> int:
    """Seed of substream ``trial`` of the experiment seeded with ``seed``."""
    return splitmix64((seed + (trial + 1) * _GOLDEN) & MASK64)


class UniformStream:
    """Sequential stream of doubles in [0, 1) drawn from PCG64(seed)."""

    def __init__(self, seed: int):
        if not 0 <= seed <= MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self._bitgen = np.random.PCG64(seed)

    def draw(self, size: int) -> np.ndarray:
        raw = self._bitgen.random_raw(size)
        return (raw >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)

    def integers(self, high: int, size: int) -> np.ndarray:
        """Integers on [0, high) by scaling doubles; bias is at most high / 2**53."""
        u = self.draw(size)
        return np.minimum((u * high).astype(np.int64), high - 1)


def uniform_stream(seed: int) -> UniformStream:
    return UniformStream(seed)
