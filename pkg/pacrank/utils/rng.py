# pacrank/utils/rng.py
import zlib
from typing import Hashable, Tuple

import numpy as np

Key = Tuple[int, ...]


def _key_word(part: Hashable) -> int:
    # strings are hashed with crc32 so keys stay stable across processes
    if isinstance(part, (bool, np.bool_)):
        return int(part)
    if isinstance(part, (int, np.integer)):
        if part < 0:
            raise ValueError(f"stream key parts must be non-negative, got {part}")
        return int(part)
    return zlib.crc32(str(part).encode("utf-8"))


def extend_key(key: Key, *parts: Hashable) -> Key:
    return key + tuple(_key_word(p) for p in parts)


def stream(seed: int, key: Key = ()) -> np.random.Generator:
    """Generator for (seed, key); equal inputs give equal streams, distinct keys independent ones."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def derive_seed(seed: int, *parts: Hashable) -> int:
    """A 63-bit integer seed for a child of `seed`, used to seed whole runs."""
    hi, lo = np.random.SeedSequence(seed, spawn_key=extend_key((), *parts)).generate_state(2, dtype=np.uint32)
    return ((int(hi) << 32) | int(lo)) >> 1
