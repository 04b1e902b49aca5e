"""Executor abstractions for the per-class series engine."""
from __future__ import annotations

import logging
import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Protocol, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class TermExecutor(Protocol):
    """Minimal executor contract: apply ``fn`` to every item, keeping input order."""

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        """Return ``[fn(item) for item in items]`` in input order."""
        ...


@dataclass(frozen=True)
class SerialExecutor:
    """Deterministic in-process executor for tests and single-threaded runs."""

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        return [fn(item) for item in items]


@dataclass(frozen=True)
class ThreadedExecutor:
    """Thread-pool executor; results are merged back in input order."""

    max_workers: int

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            return list(pool.map(fn, items))


def thread_cap() -> int:
    """Return the QTORIC_THREADS cap, falling back to 1 on bad values."""
    raw = os.getenv("QTORIC_THREADS", "1").strip() or "1"
    try:
        value = int(raw)
    except ValueError:
        logger.warning("Ignoring non-integer QTORIC_THREADS=%r; running single-threaded", raw)
        return 1
    if value < 1:
        logger.warning("Ignoring QTORIC_THREADS=%d < 1; running single-threaded", value)
        return 1
    return value


def executor_from_env() -> TermExecutor:
    """Serial executor unless QTORIC_THREADS asks for more than one worker."""
    workers = thread_cap()
    if workers == 1:
        return SerialExecutor()
    return ThreadedExecutor(max_workers=workers)
