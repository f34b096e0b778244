"""Seeded random streams.

Every stream is a Philox (counter-based) generator keyed by a tuple of
nonnegative integers that starts with the 64-bit master seed.  Results
depend only on that key, never on how work is split across workers.

Two granularities are used:

* ``stream(seed, tag, r)`` -- one stream per replicate, for sweeps with a few
  hundred replicates;
* ``blocks(seed, tag, total)`` -- one stream per fixed-size block of
  replicates, for checks with 10^5 or more replicates where building a
  generator per replicate would dominate the run time.
"""

from __future__ import annotations

import zlib
from typing import Iterator

import numpy as np

from .errors import PredictiveError

BLOCK_SIZE = 1 << 14
_SEED_LIMIT = 1 << 64


def validate_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise PredictiveError(f"seed must be an integer, got {seed!r}")
    if not 0 <= int(seed) < _SEED_LIMIT:
        raise PredictiveError("seed must fit in an unsigned 64-bit integer")
    return int(seed)


def _tag(tag) -> int:
    if isinstance(tag, str):
        return zlib.crc32(tag.encode())
    return int(tag)


def stream(master_seed: int, *key) -> np.random.Generator:
    entropy = [validate_seed(master_seed)] + [_tag(k) for k in key]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def blocks(master_seed: int, tag, total: int,
           block_size: int = BLOCK_SIZE) -> Iterator[tuple[np.random.Generator, int]]:
    """Yield ``(generator, size)`` covering ``total`` replicates in order."""
    done, b = 0, 0
    while done < total:
        size = min(block_size, total - done)
        yield stream(master_seed, tag, b), size
        done += size
        b += 1
