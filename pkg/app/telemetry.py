from __future__ import annotations

import threading
import time
from collections import defaultdict
from contextlib import contextmanager
from functools import wraps
from typing import Callable, Dict, Iterable, Iterator, List, TypeVar

MetricStore = Dict[str, List[float]]
_durations: MetricStore = defaultdict(list)
_lock = threading.Lock()

F = TypeVar('F', bound=Callable[..., object])


@contextmanager
def span(name: str) -> Iterator[None]:
    """Record the wall time of the enclosed block under ``name`` in milliseconds."""
    start = time.perf_counter()
    try:
        yield
    finally:
        elapsed_ms = (time.perf_counter() - start) * 1000
        with _lock:
            _durations[name].append(elapsed_ms)


def timed(name: str) -> Callable[[F], F]:
    def decorate(func: F) -> F:
        @wraps(func)
        def wrapper(*args, **kwargs):
            with span(name):
                return func(*args, **kwargs)

        return wrapper  # type: ignore[return-value]

    return decorate


def collect_metrics() -> MetricStore:
    with _lock:
        return {name: list(values) for name, values in _durations.items()}


def reset_metrics() -> None:
    with _lock:
        _durations.clear()


def p95(durations_ms: Iterable[float]) -> float:
    values = sorted(durations_ms)
    if not values:
        return 0.0
    index = max(0, int(round(0.95 * (len(values) - 1))))
    return round(values[index], 2)


def summarize(metrics: MetricStore | None = None) -> Dict[str, Dict[str, float]]:
    """Per-span call count, total and p95 milliseconds."""
    metrics = collect_metrics() if metrics is None else metrics
    return {
        name: {
            'calls': float(len(values)),
            'total_ms': round(sum(values), 2),
            'p95_ms': p95(values),
        }
        for name, values in sorted(metrics.items())
    }
