"""Deterministic row-parallel helpers for grid computations."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def worker_count(requested: int | None = None) -> int:
    """Worker threads: explicit argument, else MPI_THREADS, else CPU count."""
    if requested is not None and requested > 0:
        return requested
    env = os.environ.get("MPI_THREADS", "").strip()
    if env.isdigit() and int(env) > 0:
        return int(env)
    return os.cpu_count() or 1


def map_slots(fn: Callable[[T], R], items: Sequence[T], threads: int | None = None) -> list[R]:
    """Apply fn to each item, results in input order regardless of scheduling."""
    workers = worker_count(threads)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    out: list = [None] * len(items)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for idx, result in zip(range(len(items)), pool.map(fn, items)):
            out[idx] = result
    return out
