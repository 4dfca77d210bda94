"""Ordered parallel map over independent time samples."""

import logging
import os
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor

from commutclass.config import get_settings

logger = logging.getLogger(__name__)


def worker_count(n_items: int, max_workers: int | None = None) -> int:
    """Number of worker threads for a sweep over n_items samples.

    Explicit max_workers wins, then COMMUTCLASS_THREADS, then the CPU count.
    """
    cap = max_workers or get_settings().threads or os.cpu_count() or 1
    return max(1, min(cap, n_items))


def map_ordered[T, R](func: Callable[[T], R], items: Sequence[T], max_workers: int | None = None) -> list[R]:
    """Apply func to every item, returning results in input order.

    Args:
        func: Pure function of one sample.
        items: Samples (typically times).
        max_workers: Optional cap on worker threads.

    Returns:
        List of results aligned with items, independent of completion order.
    """
    workers = worker_count(len(items), max_workers)
    if workers == 1:
        return [func(item) for item in items]
    logger.debug(f"Mapping {len(items)} samples over {workers} threads")
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="commutclass") as pool:
        return list(pool.map(func, items))
