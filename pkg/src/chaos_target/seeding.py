"""Deterministic 64-bit seed derivation.

Each part is folded into a running state with the SplitMix64 finalizer:

    h = splitmix64(h ^ part)    for every part, starting from h = base

Floats are folded in by their IEEE-754 bit pattern, so 0.01 and 0.010000000000000002
get different seeds. The result is stable across processes and platforms
(unlike the salted builtin ``hash``).
"""
from __future__ import annotations

import struct

MASK64 = 0xFFFFFFFFFFFFFFFF


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def float_bits(v: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", float(v)))[0]


def derive_seed(base: int, *parts) -> int:
    h = int(base) & MASK64
    for part in parts:
        if isinstance(part, float):
            word = float_bits(part)
        elif isinstance(part, int):
            word = part & MASK64
        else:
            raise TypeError(f"cannot fold {type(part).__name__} into a seed")
        h = splitmix64(h ^ word)
    return h


def run_seed(batch_seed: int, n_steps: int, mu: float, epsilon: float, run_index: int) -> int:
    """Seed of one optimizer run inside a (N, mu, epsilon) cell."""
    return derive_seed(batch_seed, int(n_steps), float(mu), float(epsilon), int(run_index))
