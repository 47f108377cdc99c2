"""Prometheus metrics instrumentation.

Metrics are always recorded into a private registry; they are only exported
when the CLI is given ``--metrics-out`` or ``QW_ENABLE_METRICS=true``.
"""

from collections.abc import Callable
from functools import wraps
from pathlib import Path
from typing import Any, TypeVar

from prometheus_client import Counter, Gauge, Histogram, generate_latest
from prometheus_client.core import CollectorRegistry

F = TypeVar("F", bound=Callable[..., Any])

registry = CollectorRegistry()

analysis_runs_total = Counter(
    "quantum_witness_analysis_runs_total",
    "Total number of analyses (CLI subcommands) run",
    ["command", "status"],
    registry=registry,
)

analysis_duration_seconds = Histogram(
    "quantum_witness_analysis_duration_seconds",
    "Duration of an analysis in seconds",
    ["command"],
    buckets=[0.1, 0.5, 1.0, 5.0, 10.0, 30.0, 60.0, 120.0],
    registry=registry,
)

optimizer_runs_total = Counter(
    "quantum_witness_optimizer_runs_total",
    "Total number of multi-start state-space searches",
    ["objective", "converged"],
    registry=registry,
)

optimizer_duration_seconds = Histogram(
    "quantum_witness_optimizer_duration_seconds",
    "Duration of a multi-start search in seconds",
    ["objective"],
    buckets=[0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0],
    registry=registry,
)

resample_draws_total = Counter(
    "quantum_witness_resample_draws_total",
    "Total number of Poisson resamples drawn",
    registry=registry,
)

active_analyses = Gauge(
    "quantum_witness_active_analyses",
    "Number of analyses currently in progress",
    registry=registry,
)

errors_total = Counter(
    "quantum_witness_errors_total",
    "Total errors",
    ["error_type", "component"],
    registry=registry,
)


def get_metrics() -> bytes:
    """Get metrics in Prometheus format."""
    return generate_latest(registry)


def write_metrics(path: str | Path) -> None:
    """Write the exposition text to a file."""
    Path(path).write_bytes(get_metrics())


class MetricsTimer:
    """Context manager observing the elapsed time into a (labelled) histogram."""

    def __init__(self, histogram: Histogram, labels: dict[str, str] | None = None):
        self.histogram = histogram
        self.labels = labels or {}
        self.timer: Any = None

    def __enter__(self) -> "MetricsTimer":
        if self.labels:
            self.timer = self.histogram.labels(**self.labels).time()
        else:
            self.timer = self.histogram.time()
        self.timer.__enter__()
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        if self.timer:
            self.timer.__exit__(exc_type, exc_val, exc_tb)


def track_analysis(command: str) -> Callable[[F], F]:
    """Count and time one CLI analysis.

    The run status is ``success``, ``verdict_failed`` when the returned result
    reports failed verdicts (``passed`` is false), or ``error`` when it raises.
    """

    def decorator(func: F) -> F:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            active_analyses.inc()
            try:
                with MetricsTimer(analysis_duration_seconds, {"command": command}):
                    result = func(*args, **kwargs)
            except Exception as e:
                analysis_runs_total.labels(command=command, status="error").inc()
                errors_total.labels(error_type=type(e).__name__, component=command).inc()
                raise
            finally:
                active_analyses.dec()
            status = "success" if getattr(result, "passed", True) else "verdict_failed"
            analysis_runs_total.labels(command=command, status=status).inc()
            return result

        return wrapper  # type: ignore[return-value]

    return decorator
