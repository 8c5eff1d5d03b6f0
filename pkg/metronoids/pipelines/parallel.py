from __future__ import annotations

import hashlib
import logging
import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import numpy as np

logger = logging.getLogger(__name__)

THREADS_ENV = "METRONOID_THREADS"
DEFAULT_MAX_WORKERS = 8

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw:
        try:
            value = int(raw)
        except ValueError:
            value = 0
        if value >= 1:
            return value
        logger.warning("ignoring invalid %s=%r", THREADS_ENV, raw)
    return max(1, min(DEFAULT_MAX_WORKERS, os.cpu_count() or 1))


def _tag_key(tag: str) -> int:
    return int.from_bytes(hashlib.sha256(tag.encode("utf-8")).digest()[:8], "big")


def rng_stream(seed: int, tag: str, block: int = 0) -> np.random.Generator:
    """Counter-based generator for one block of one operation.

    Streams depend only on (seed, tag, block), never on which worker draws them.
    """
    seq = np.random.SeedSequence(entropy=int(seed) & ((1 << 64) - 1), spawn_key=(_tag_key(tag), int(block)))
    return np.random.Generator(np.random.Philox(seq))


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """Ordered map over a thread pool; results come back in input order."""
    work = list(items)
    n_workers = min(workers or worker_count(), max(1, len(work)))
    if n_workers == 1:
        return [func(item) for item in work]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(func, work))


def split_counts(total: int, blocks: int) -> list[int]:
    base, extra = divmod(int(total), int(blocks))
    return [base + (1 if k < extra else 0) for k in range(blocks)]
