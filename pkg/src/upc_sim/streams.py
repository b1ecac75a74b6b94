"""Seeded random-stream derivation and worker-independent chunked accumulation."""
from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

# Fixed chunk size: estimators accumulate per-chunk partial sums and combine
# them in chunk order, so results cannot depend on worker count or scheduling.
CHUNK_SIZE = 8192


def _tag_entropy(tag: str) -> int:
    # Stable across platforms and Python processes (unlike hash()).
    digest = hashlib.blake2s(tag.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


class Streams:
    """Family of independent random streams derived from one master seed.

    Every (tag, *indices) pair maps to its own generator, so any chunk of any
    experiment can be regenerated in isolation and distinct experiments never
    share state.
    """

    def __init__(self, master_seed: int):
        self.master_seed = int(master_seed)

    def stream(self, tag: str, *indices: int) -> np.random.Generator:
        seq = np.random.SeedSequence(
            [self.master_seed, _tag_entropy(tag), *(int(i) for i in indices)]
        )
        return np.random.default_rng(seq)


def chunk_sizes(n_total: int, chunk: int = CHUNK_SIZE) -> list[int]:
    """Split n_total trials into fixed-size chunks (last one may be short)."""
    if n_total < 0:
        raise ValueError("n_total must be nonnegative")
    full, rest = divmod(n_total, chunk)
    return [chunk] * full + ([rest] if rest else [])


def run_chunks(
    n_total: int,
    worker: Callable[[int, int], tuple],
    workers: int = 1,
    chunk: int = CHUNK_SIZE,
) -> list[tuple]:
    """Evaluate worker(chunk_index, chunk_n) for every chunk, in index order.

    The returned list is always ordered by chunk index regardless of the
    thread count, which keeps downstream float reductions bit-identical.
    """
    jobs = list(enumerate(chunk_sizes(n_total, chunk)))
    if workers <= 1 or len(jobs) <= 1:
        return [worker(i, m) for i, m in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: worker(*job), jobs))


def combine_moments(parts: Sequence[tuple[int, float, float]]) -> tuple[float, float]:
    """Combine per-chunk (n, sum, sum_sq) into (mean, stderr of the mean)."""
    n = sum(p[0] for p in parts)
    if n == 0:
        raise ValueError("no samples")
    total = math.fsum(p[1] for p in parts)
    total_sq = math.fsum(p[2] for p in parts)
    mean = total / n
    if n == 1:
        return mean, 0.0
    var = max(0.0, (total_sq - n * mean * mean) / (n - 1))
    return mean, math.sqrt(var / n)


def moments(values: np.ndarray) -> tuple[int, float, float]:
    """Per-chunk accumulator feeding combine_moments."""
    return values.size, float(np.sum(values)), float(np.sum(values * values))
