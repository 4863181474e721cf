from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor

log = logging.getLogger(__name__)


def run_batch(items, fn, limit: int = 1) -> list:
    """Apply ``fn`` to every item with up to ``limit`` in flight.

    Results come back in input order; a failing item yields its exception
    instead of aborting the batch.
    """
    def guarded(item):
        try:
            return fn(item)
        except Exception as e:  # noqa: BLE001 - per-record failures are reported, not raised
            log.error("record failed: %s: %s", type(e).__name__, e)
            return e

    items = list(items)
    if limit <= 1 or len(items) <= 1:
        return [guarded(it) for it in items]
    with ThreadPoolExecutor(max_workers=limit) as pool:
        return list(pool.map(guarded, items))
