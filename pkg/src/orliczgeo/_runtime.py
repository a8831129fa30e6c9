"""Seeded random streams and the optional worker pool."""

from __future__ import annotations

import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List

import numpy as np


def stream(seed: int, *names) -> np.random.Generator:
    """Independent generator for the named sub-stream of ``seed``."""
    keys = [int(seed) & 0xFFFFFFFF] + [zlib.crc32(str(n).encode()) for n in names]
    return np.random.default_rng(np.random.SeedSequence(keys))


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("ORLICZ_THREADS", "1")))
    except ValueError:
        return 1


def ordered_map(fn: Callable, items: Iterable) -> List:
    """``[fn(x) for x in items]``, possibly on a thread pool; order preserved."""
    items = list(items)
    workers = min(thread_cap(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
