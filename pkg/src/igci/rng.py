"""Counter-based random substreams.

Every random draw in the package comes from a generator keyed by a master
seed plus a tuple of labels (strings or non-negative integers).  Two streams
with different label tuples are statistically independent, and a stream's
output never depends on which other streams were consumed before it, so
experiments give identical results however the work is split across
threads.
"""
from __future__ import annotations

import zlib

import numpy as np


def _label_key(label) -> int:
    if isinstance(label, (int, np.integer)):
        if label < 0:
            raise ValueError(f"integer labels must be non-negative, got {label}")
        return int(label)
    if isinstance(label, str):
        # crc32 is stable across interpreter runs, unlike hash()
        return zlib.crc32(label.encode("utf-8"))
    raise TypeError(f"unsupported label type {type(label).__name__}")


def seed_sequence(seed: int, *labels) -> np.random.SeedSequence:
    return np.random.SeedSequence(int(seed), spawn_key=tuple(_label_key(x) for x in labels))


def substream(seed: int, *labels) -> np.random.Generator:
    """Return an independent generator for ``(seed, *labels)``."""
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, *labels)))


def derive_seed(seed: int, *labels) -> int:
    """Derive a child 63-bit master seed, e.g. one per benchmark trial."""
    state = seed_sequence(seed, *labels).generate_state(1, dtype=np.uint64)[0]
    return int(state) >> 1
