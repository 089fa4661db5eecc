"""
Async utilities for interfem

Independent blocking computations (for example the auxiliary Neumann solves
of distinct inclusions) are dispatched to worker threads through asyncio with
a bounded number of concurrent executions.
"""

import asyncio
from typing import Any, Callable, Optional, Sequence


async def run_concurrent(
    *coros,
    max_concurrent: Optional[int] = None
) -> list:
    """
    Run multiple coroutines concurrently.

    Args:
        *coros: Coroutines to run
        max_concurrent: Maximum concurrent executions (None for unlimited)

    Returns:
        List of results in order
    """
    if max_concurrent:
        semaphore = asyncio.Semaphore(max_concurrent)

        async def limited_coro(coro):
            async with semaphore:
                return await coro

        return await asyncio.gather(*(limited_coro(c) for c in coros))
    return await asyncio.gather(*coros)


def run_blocking_concurrent(
    calls: Sequence[Callable[[], Any]],
    max_concurrent: Optional[int] = None
) -> list:
    """
    Run blocking zero-argument callables in threads and collect their results.

    Args:
        calls: Callables to execute
        max_concurrent: Maximum concurrent executions

    Returns:
        List of results in the order of ``calls``; the first exception raised
        by any callable propagates
    """
    if len(calls) <= 1 or max_concurrent == 1:
        return [call() for call in calls]

    async def _runner():
        return await run_concurrent(
            *(asyncio.to_thread(call) for call in calls),
            max_concurrent=max_concurrent,
        )

    return asyncio.run(_runner())
