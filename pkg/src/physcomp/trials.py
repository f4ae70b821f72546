"""Seeded Monte-Carlo plumbing.

Trials are cut into fixed-size chunks and chunk ``i`` draws from
``SeedSequence(seed, spawn_key=(i,))``.  The stream a trial sees depends only on
the seed and its chunk index, never on how many workers ran the chunks, and the
per-chunk tallies are merged by integer addition.
"""
from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable

import numpy as np

CHUNK = 10_000


def chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def run_trials(fn: Callable[[np.random.Generator, int], dict], trials: int, seed: int,
               workers: int = 1) -> Counter:
    """Call ``fn(rng, n)`` once per chunk and add up the returned tallies."""
    if trials < 0:
        raise ValueError("trials must be non-negative")
    # an empty run still calls fn once so the tally carries its keys
    sizes = [min(CHUNK, trials - i) for i in range(0, trials, CHUNK)] or [0]

    def job(i):
        return fn(chunk_rng(seed, i), sizes[i])

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    else:
        parts = [job(i) for i in range(len(sizes))]
    total = Counter()
    for part in parts:
        total.update(part)
    return total


def bernoulli(rng: np.random.Generator, p: Fraction, size: int) -> np.ndarray:
    """Exact-rational coin flips: an integer draw below the numerator."""
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("probability outside [0, 1]")
    return rng.integers(0, p.denominator, size=size) < p.numerator
