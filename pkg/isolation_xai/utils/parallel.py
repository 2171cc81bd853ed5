import asyncio
import logging
from typing import Callable, Iterable, List, Optional, TypeVar
from ..config.settings import parallel_num


logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class ConcurrencyLimiter:
    """Bounds the number of jobs running in worker threads at once."""

    def __init__(self, max_concurrent: int = 1) -> None:
        """
        Args:
            max_concurrent: Maximum concurrent jobs
        """
        self.max_concurrent = max(1, int(max_concurrent))
        self.semaphore = asyncio.Semaphore(self.max_concurrent)
        self.active = 0

    async def __aenter__(self) -> 'ConcurrencyLimiter':
        await self.semaphore.acquire()
        self.active += 1
        return self

    async def __aexit__(self, *exc_info) -> None:
        self.active -= 1
        self.semaphore.release()


async def _gather_limited(func: Callable[[T], R], items: List[T], max_concurrent: int) -> List[R]:
    limiter = ConcurrencyLimiter(max_concurrent)

    async def run_one(item: T) -> R:
        async with limiter:
            return await asyncio.to_thread(func, item)

    # gather keeps submission order, whatever order the jobs finish in
    return await asyncio.gather(*(run_one(item) for item in items))


def _inside_event_loop() -> bool:
    try:
        asyncio.get_running_loop()
    except RuntimeError:
        return False
    return True


def run_parallel(func: Callable[[T], R], items: Iterable[T], max_concurrent: Optional[int] = None) -> List[R]:
    """
    Apply func to every item, possibly in worker threads, keeping item order.

    Args:
        func: Job to run; must only depend on its argument
        items: Job arguments
        max_concurrent: Worker threads (defaults to ISOXAI_PARALLEL_NUM)

    Returns:
        list: Results in the same order as items
    """
    item_list = list(items)
    workers = parallel_num if max_concurrent is None else max_concurrent

    if workers <= 1 or len(item_list) <= 1:
        return [func(item) for item in item_list]

    if _inside_event_loop():
        # asyncio.run cannot nest; the caller already owns a loop
        logger.warning("run_parallel called from a running event loop, running jobs inline")
        return [func(item) for item in item_list]

    return asyncio.run(_gather_limited(func, item_list, workers))
