"""
Wrapper functions for running independent work items on a thread pool.

Numpy releases the GIL inside its kernels, so estimation shards scale with
threads without the pickling cost of processes.
"""

import logging
import os
from collections.abc import Callable, Sequence
from multiprocessing.pool import ThreadPool
from typing import Any, TypeVar

from orbithull.lib.error import ValidationError

logger = logging.getLogger(__name__)

THREADS_ENV: str = "ORBITHULL_THREADS"
"""
Environment variable holding the worker thread count.
"""

_T = TypeVar("_T")


def thread_count() -> int:
    """
    Returns the configured number of worker threads.

    Reads ``ORBITHULL_THREADS`` and falls back to the CPU count.

    Returns:
        int: The thread count, at least one.

    Raises:
        ValidationError: The variable is set but not a positive integer.
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None or not raw.strip():
        return os.cpu_count() or 1

    try:
        threads = int(raw)
    except ValueError:
        raise ValidationError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if threads < 1:
        raise ValidationError(f"{THREADS_ENV}={raw!r} must be >= 1")

    return threads


def starmap(f: Callable[..., _T], arguments: Sequence[tuple[Any, ...]]) -> list[_T]:
    """
    Calls ``f(*args)`` for every tuple in ``arguments``, results in input order.

    Arguments:
        f (Callable[..., _T]): The work function.
        arguments (Sequence[tuple[Any, ...]]): One argument tuple per work item.

    Returns:
        list[_T]: The results.
    """
    threads = min(thread_count(), len(arguments))
    logger.debug("running %d work items on %d threads", len(arguments), threads)

    if threads <= 1:
        return [f(*args) for args in arguments]

    with ThreadPool(threads) as pool:
        return pool.starmap(f, arguments)
