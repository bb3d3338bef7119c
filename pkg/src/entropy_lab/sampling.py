"""Monte Carlo sampling of outcome words.

Samples state trajectories from the stationary chain and outcome symbols
from the response rows, in independent blocks of at most ``BLOCK_SIZE``
draws.  Each block gets its own child generator spawned from one seed
sequence, so results are bit-reproducible and independent of how blocks
would be scheduled across workers; a parallel driver only has to respect
block boundaries to reproduce the sequential result.
"""

from __future__ import annotations

import numpy as np

from ._errors import CapExceededError, ValidationError
from .partitions import DEFAULT_WORD_CAP, PartitionOfUnity
from .systems import StochasticSystem

BLOCK_SIZE = 1 << 16

__all__ = ["BLOCK_SIZE", "sample_words", "empirical_distribution", "tv_distance", "tv_bound"]


def _cumulative_rows(matrix: np.ndarray) -> np.ndarray:
    cum = np.cumsum(matrix, axis=1)
    cum[:, -1] = 1.0
    return cum


def _pick(cum_rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Row-wise inverse CDF: smallest index whose cumulative weight exceeds u."""
    return np.sum(cum_rows < u[:, None], axis=1)


def sample_words(
    system: StochasticSystem,
    f: PartitionOfUnity,
    depth: int,
    n_samples: int,
    seed: int,
    *,
    word_cap: int = DEFAULT_WORD_CAP,
) -> np.ndarray:
    """Sample outcome words of the given depth; returns counts per word code.

    A sample is produced by drawing the start state from the stationary
    measure, an outcome from the current response row at each of ``depth``
    times, and a transition between consecutive times.
    """
    if f.n_states != system.n_states:
        raise ValidationError("partition does not match the system's state count")
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    if n_samples < 1:
        raise ValidationError("need at least one sample")
    k = f.n_outcomes
    n_words = k**depth
    if n_words > word_cap:
        raise CapExceededError(f"would count {n_words} words, cap is {word_cap}")
    cum_mu = np.cumsum(system.stationary)
    cum_mu[-1] = 1.0
    cum_p = _cumulative_rows(system.transition)
    cum_f = _cumulative_rows(f.response)
    counts = np.zeros(n_words, dtype=np.int64)
    n_blocks = (n_samples + BLOCK_SIZE - 1) // BLOCK_SIZE
    children = np.random.SeedSequence(seed).spawn(n_blocks)
    remaining = n_samples
    for child in children:
        rng = np.random.default_rng(child)
        m = min(BLOCK_SIZE, remaining)
        remaining -= m
        x = np.searchsorted(cum_mu, rng.random(m), side="right")
        codes = np.zeros(m, dtype=np.int64)
        for step in range(depth):
            symbols = _pick(cum_f[x], rng.random(m))
            codes = codes * k + symbols
            if step < depth - 1:
                x = _pick(cum_p[x], rng.random(m))
        counts += np.bincount(codes, minlength=n_words)
    return counts


def empirical_distribution(counts) -> np.ndarray:
    """Normalize word counts to a probability vector."""
    arr = np.asarray(counts, dtype=float)
    total = arr.sum()
    if arr.ndim != 1 or total <= 0 or np.any(arr < 0):
        raise ValidationError("counts must be non-negative with positive total")
    return arr / total


def tv_distance(p, q) -> float:
    """Total variation distance, half the l1 gap."""
    pa = np.asarray(p, dtype=float)
    qa = np.asarray(q, dtype=float)
    if pa.shape != qa.shape:
        raise ValidationError(f"dimension mismatch: {pa.shape} vs {qa.shape}")
    return 0.5 * float(np.sum(np.abs(pa - qa)))


def tv_bound(n_words: int, n_samples: int) -> float:
    """Reference deviation scale 1.5 sqrt(n_words / n_samples).

    The expected TV distance of an empirical measure is below
    sqrt(n_words / (4 n_samples)); the factor 1.5 gives comfortable
    concentration headroom for a pass/fail reference.
    """
    if n_words < 1 or n_samples < 1:
        raise ValidationError("need positive word and sample counts")
    return 1.5 * float(np.sqrt(n_words / n_samples))
