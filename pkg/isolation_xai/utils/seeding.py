"""Seed derivation shared by forests, multi-run reports and sweeps.

A single master seed fans out to per-tree (or per-run) seeds through the
SplitMix64 finalizer, so every job can be built independently of the others
and in any order.
"""
import numpy as np

MASK64 = (1 << 64) - 1


def mix64(value: int) -> int:
    """SplitMix64 finalizer of ``value`` (64-bit, wraps around)."""
    z = (int(value) + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Child seed ``seed XOR mix64(index)`` for job number ``index``."""
    return (int(seed) & MASK64) ^ mix64(index)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) & MASK64)
