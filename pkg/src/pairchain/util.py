"""Small shared helpers."""

from __future__ import annotations

import numpy as np


def as_generator(seed):
    """Return a numpy Generator from a seed, passing Generators through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def categorical(rng, probs, size=None):
    """Draw from a categorical distribution given nonnegative row weights.

    ``probs`` is 1-d (one distribution, ``size`` draws) or 2-d (one draw per
    row).  Weights need not be normalized.
    """
    probs = np.asarray(probs, dtype=float)
    if probs.ndim == 1:
        cum = np.cumsum(probs)
        if cum[-1] <= 0.0:
            raise ValueError("weights sum to zero")
        u = rng.random(size) * cum[-1]
        return np.searchsorted(cum, u, side="right").clip(0, len(probs) - 1)
    cum = np.cumsum(probs, axis=1)
    tot = cum[:, -1]
    if np.any(tot <= 0.0):
        raise ValueError("weights sum to zero in some row")
    u = rng.random(len(probs)) * tot
    idx = (u[:, None] >= cum).sum(axis=1)
    return idx.clip(0, probs.shape[1] - 1)
