"""Deterministic RNG plumbing shared across the package.

Every stochastic operation takes either an integer seed, an existing
``numpy.random.Generator``, or ``None`` (fresh OS entropy). Nested
experiments derive child seeds from a master seed plus a structured key,
so partial re-runs of a sweep see the same streams.
"""
from __future__ import annotations

import zlib

import numpy as np


def as_generator(seed) -> np.random.Generator:
    """Coerce an int seed, SeedSequence, Generator, or None into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _key_to_int(part) -> int:
    if isinstance(part, bool):
        raise TypeError("bool is not a valid seed-key part")
    if isinstance(part, (int, np.integer)):
        if part < 0:
            raise ValueError(f"seed-key parts must be non-negative, got {part}")
        return int(part)
    if isinstance(part, str):
        return zlib.crc32(part.encode("utf-8"))
    raise TypeError(f"seed-key parts must be int or str, got {type(part).__name__}")


def derive_seed(*key) -> int:
    """Map a master seed plus a structured key to a reproducible 32-bit seed.

    ``derive_seed(master, "dataset", n, state_idx)`` always yields the same
    value for the same key, independent of any other derivations.
    """
    if not key:
        raise ValueError("derive_seed requires at least one key part")
    entropy = [_key_to_int(part) for part in key]
    ss = np.random.SeedSequence(entropy)
    return int(ss.generate_state(1, np.uint32)[0])
