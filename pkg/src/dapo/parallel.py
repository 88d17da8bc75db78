"""Deterministic work-slicing across processes.

Items are cut into one contiguous slice per worker and per-slice results are
combined in slice order, so output never depends on scheduling. Worker
functions must be importable (top level) and their results picklable.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

R = TypeVar("R")
T = TypeVar("T")


def slice_bounds(n_items: int, n_slices: int) -> list[tuple[int, int]]:
    """Bounds of ``n_slices`` contiguous, near-equal slices covering ``n_items``."""
    n_slices = max(1, min(n_slices, n_items))
    base, extra = divmod(n_items, n_slices)
    bounds = []
    start = 0
    for i in range(n_slices):
        end = start + base + (1 if i < extra else 0)
        bounds.append((start, end))
        start = end
    return bounds


def run_slices(worker: Callable[..., R], items: Sequence, jobs: int,
               extra: tuple = ()) -> list[R]:
    """Apply ``worker(slice, *extra)`` per contiguous slice, in slice order."""
    if jobs <= 1 or len(items) < 2:
        return [worker(list(items), *extra)]
    slices = [list(items[a:b]) for a, b in slice_bounds(len(items), jobs)]
    extra_columns = [[e] * len(slices) for e in extra]
    with ProcessPoolExecutor(max_workers=len(slices)) as ex:
        return list(ex.map(worker, slices, *extra_columns))


def map_slices(worker: Callable[..., list[T]], items: Sequence, jobs: int,
               extra: tuple = ()) -> list[T]:
    """Like :func:`run_slices` for list-valued workers; concatenates results."""
    out: list[T] = []
    for part in run_slices(worker, items, jobs, extra):
        out.extend(part)
    return out
