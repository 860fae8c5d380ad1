"""Deterministic worker-pool helpers.

Results are always collected in input order, so output is identical for any
worker count; workers <= 1 short-circuits to an in-process loop.  Large
read-only payloads are shipped once per worker through the pool initializer
instead of once per task.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from multiprocessing import get_context

_SHARED = None


def effective_workers(requested: int | None) -> int:
    if requested is None or requested <= 0:
        return os.cpu_count() or 1
    return requested


def _mp_context():
    try:
        return get_context("fork")
    except ValueError:  # platforms without fork
        return get_context("spawn")


def parallel_map(fn, items, workers: int = 1, chunksize: int = 1) -> list:
    """Ordered map of a picklable top-level function over items."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(
        max_workers=min(workers, len(items)), mp_context=_mp_context()
    ) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))


def _init_shared(payload):
    global _SHARED
    _SHARED = payload


def _call_shared(args):
    fn, item = args
    return fn(_SHARED, item)


def parallel_map_shared(fn, payload, items, workers: int = 1,
                        chunksize: int = 1) -> list:
    """Ordered map of ``fn(payload, item)`` with the payload shared once per
    worker: inherited copy-on-write under fork, shipped via the pool
    initializer elsewhere."""
    global _SHARED
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(payload, item) for item in items]
    ctx = _mp_context()
    tasks = [(fn, item) for item in items]
    if ctx.get_start_method() == "fork":
        _SHARED = payload  # visible to children forked by the pool
        try:
            with ProcessPoolExecutor(
                max_workers=min(workers, len(items)), mp_context=ctx
            ) as pool:
                return list(pool.map(_call_shared, tasks, chunksize=chunksize))
        finally:
            _SHARED = None
    with ProcessPoolExecutor(
        max_workers=min(workers, len(items)),
        mp_context=ctx,
        initializer=_init_shared,
        initargs=(payload,),
    ) as pool:
        return list(pool.map(_call_shared, tasks, chunksize=chunksize))
