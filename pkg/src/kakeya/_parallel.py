"""Ordered fan-out over processes; results never depend on the worker count."""

import os
from concurrent.futures import ProcessPoolExecutor


def default_workers() -> int:
    return os.cpu_count() or 1


def ordered_map(fn, items, workers: int = 1) -> list:
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
