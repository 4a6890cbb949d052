import logging
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from rich.console import Console
from rich.logging import RichHandler
from rich.progress import Progress

from .config import LOG_LEVEL, thread_count

# 日志和进度条都写到 stderr，stdout 留给 CSV
console = Console(stderr=True)

logging.basicConfig(
    level=LOG_LEVEL,
    format="%(message)s",
    datefmt="[%X]",
    handlers=[RichHandler(console=console)],
)
logger = logging.getLogger("qed1d")


T = TypeVar("T")
R = TypeVar("R")


def run_scan(
    func: Callable[[T], R], items: Iterable[T], description: str
) -> list[R]:
    """在线程池中对扫描点逐个求值，并显示进度条

    Args:
        func (Callable): 单个扫描点的计算函数。
        items (Iterable): 扫描点。
        description (str): 进度条标题。

    Returns:
        list: 与输入顺序一致的结果列表。
    """
    points = list(items)
    results: list[R] = [None] * len(points)  # type: ignore[list-item]
    workers = min(thread_count(), max(len(points), 1))
    logger.info(f"{description}: 共 {len(points)} 个扫描点，{workers} 个线程")

    with Progress(console=console, transient=True) as progress:
        task = progress.add_task(f"[cyan]{description}...", total=len(points))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(func, item): i for i, item in enumerate(points)}
            for future, index in futures.items():
                results[index] = future.result()
                progress.update(task, advance=1)
    return results
