"""Counter-based splitmix64 stream.

Output i of the stream seeded with s is mix(s + (i + 1) * GAMMA) mod 2**64,
where mix is the splitmix64 finalizer

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z = z ^ (z >> 31)

and GAMMA = 0x9E3779B97F4A7C15 (the odd integer closest to 2**64 / golden ratio).
Because each output only depends on its index, whole blocks are generated
with vectorised uint64 arithmetic and the values are identical on every
platform. Uniform doubles take the top 53 bits.
"""
from __future__ import annotations

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Independent child seed, used to give each orbit of a batch its own stream."""
    return mix64((seed & MASK64) + (index + 1) * GAMMA)


def raw_block(seed: int, start: int, count: int) -> np.ndarray:
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + idx * np.uint64(GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


def uniform_block(seed: int, start: int, count: int) -> np.ndarray:
    return (raw_block(seed, start, count) >> np.uint64(11)).astype(np.float64) * 2.0**-53


class SplitMix64:
    """Sequential view of the stream, mostly for drawing uniforms block by block."""

    def __init__(self, seed: int = 0):
        self.seed = int(seed) & MASK64
        self.position = 0

    def uniform(self, count: int) -> np.ndarray:
        out = uniform_block(self.seed, self.position, count)
        self.position += count
        return out

    def integers(self, high: int, count: int) -> np.ndarray:
        return np.minimum((self.uniform(count) * high).astype(np.int64), high - 1)
