"""Seed derivation.

Every random draw in the package goes through :func:`rng_for`, which builds a
counter-based Philox generator keyed by a master seed plus a tuple of tags.
Two calls with the same key produce the same stream regardless of what else
ran before, which is what makes parallel experiment runs reproducible.
"""
import zlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _tag_word(tag):
    if isinstance(tag, (bool, np.bool_)):
        return int(tag)
    if isinstance(tag, (int, np.integer)):
        tag = int(tag)
        if tag < 0:
            raise ValueError("integer tags must be non-negative")
        return tag
    return zlib.crc32(str(tag).encode("utf-8"))


def seed_sequence(seed, *tags):
    return np.random.SeedSequence(int(seed) & _MASK64, spawn_key=tuple(_tag_word(t) for t in tags))


def rng_for(seed, *tags):
    """Generator for the stream identified by ``(seed, *tags)``."""
    return np.random.Generator(np.random.Philox(seed_sequence(seed, *tags)))


def derive_seed(seed, *tags):
    """A 64-bit child seed for ``(seed, *tags)``."""
    lo, hi = seed_sequence(seed, *tags).generate_state(2, np.uint32)
    return (int(hi) << 32) | int(lo)
