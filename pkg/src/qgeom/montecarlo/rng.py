"""Counter-based random streams and the deterministic chunk runner.

Every chunk of a Monte Carlo run owns a ``RngStream`` keyed by
``(seed, chunk_index)``. The stream is numpy's Philox-4x64 bit generator
seeded through ``SeedSequence(seed, spawn_key=(chunk_index,))``; Gaussian
variates come from ``Generator.standard_normal`` (ziggurat) and
exponentials/gammas from the corresponding ``Generator`` methods, so a given
numpy version reproduces every chunk bit-for-bit on any platform.

The chunk layout depends only on ``n`` and ``chunks`` (never on the number
of threads), and partial results are merged by a fixed pairwise tree in
chunk order, so thread count never changes the output.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import operator
import os

import numpy as np

from ..errors import DomainError, UnsupportedError

__all__ = [
    "ALGORITHM_ID",
    "DEFAULT_CHUNK_SIZE",
    "RngStream",
    "as_generator",
    "chunk_sizes",
    "default_threads",
    "run_chunks",
    "pairwise_sum",
]

ALGORITHM_ID = "numpy-philox4x64-seedsequence-v1"
DEFAULT_CHUNK_SIZE = 1 << 15
THREADS_ENV = "QGEOM_THREADS"

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """Identifies one reproducible random substream."""

    seed: int
    chunk_index: int = 0
    algorithm_id: str = ALGORITHM_ID

    def generator(self):
        """A fresh ``numpy.random.Generator`` positioned at the stream start."""
        if self.algorithm_id != ALGORITHM_ID:
            raise UnsupportedError(f"unknown RNG algorithm {self.algorithm_id!r}")
        ss = np.random.SeedSequence(operator.index(self.seed) & _MASK64, spawn_key=(operator.index(self.chunk_index),))
        return np.random.Generator(np.random.Philox(ss))


def as_generator(rng):
    """Accept an ``RngStream``, a ``Generator`` or an integer seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    return RngStream(operator.index(rng)).generator()


def chunk_sizes(n, chunks=None, chunk_size=DEFAULT_CHUNK_SIZE):
    """Split ``n`` draws into chunk sizes.

    With ``chunks`` given, ``n`` is divided into that many near-equal parts
    (the first ``n % chunks`` get one extra draw); otherwise into pieces of
    ``chunk_size`` with a shorter last piece.
    """
    n = operator.index(n)
    if n < 1:
        raise DomainError(f"need at least one draw, got n={n}")
    if chunks is not None:
        chunks = operator.index(chunks)
        if not 1 <= chunks <= n:
            raise DomainError(f"chunks must lie in [1, n], got {chunks}")
        q, r = divmod(n, chunks)
        return [q + 1] * r + [q] * (chunks - r)
    full, rest = divmod(n, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def default_threads():
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
        if value < 1:
            raise DomainError(f"{THREADS_ENV} must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1


def pairwise_sum(parts):
    """Sum a sequence by a balanced binary tree in the given order."""
    if len(parts) == 1:
        return parts[0]
    mid = len(parts) // 2
    return pairwise_sum(parts[:mid]) + pairwise_sum(parts[mid:])


def run_chunks(worker, n, seed, chunks=None, threads=None, chunk_size=DEFAULT_CHUNK_SIZE):
    """Run ``worker(stream, size)`` over the chunk layout of ``n`` draws.

    Returns the list of per-chunk results in chunk order.
    """
    sizes = chunk_sizes(n, chunks, chunk_size)
    tasks = [(RngStream(seed, k), m) for k, m in enumerate(sizes)]
    threads = default_threads() if threads is None else operator.index(threads)
    if threads < 1:
        raise DomainError(f"threads must be >= 1, got {threads}")
    if threads == 1 or len(tasks) == 1:
        return [worker(s, m) for s, m in tasks]
    with ThreadPoolExecutor(max_workers=min(threads, len(tasks))) as pool:
        return list(pool.map(lambda task: worker(*task), tasks))
