from concurrent.futures import ThreadPoolExecutor
from typing import Callable
from typing import List
from typing import Sequence
from typing import TypeVar

T = TypeVar("T")
U = TypeVar("U")


def thread_map(fn: Callable[[T], U], items: Sequence[T], threads: int = 1) -> List[U]:
    """Ordered map, run on a thread pool when ``threads`` > 1"""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
