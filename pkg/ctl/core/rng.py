"""Seeded counter-based random streams."""

from __future__ import annotations

import numpy as np

_SEED_LIMIT = 1 << 64


def check_seed(seed: int) -> int:
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < _SEED_LIMIT:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return seed


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Independent Philox stream for ``(seed, *stream)``; never touches global state."""
    check_seed(seed)
    return np.random.Generator(np.random.Philox([seed, *stream]))
