"""Deterministic work distribution.

Worker count is capped by the DIOPH_LAB_THREADS environment variable
(default 1, i.e. serial).  Results are always merged in input order, so the
output is identical for every worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .errors import ConfigError


def worker_count() -> int:
    raw = os.environ.get("DIOPH_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"DIOPH_LAB_THREADS={raw!r} is not an integer") from None


def map_ordered(fn, items):
    """Apply fn to items, in parallel when allowed, merging in input order."""
    items = list(items)
    workers = min(worker_count(), len(items)) or 1
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
