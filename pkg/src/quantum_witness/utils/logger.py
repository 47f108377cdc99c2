"""Structured logging for the quantumness witness toolkit.

Log lines go to stderr; stdout carries only CSV/JSON results.
"""

import logging
import sys
from typing import Any

import numpy as np
import structlog
from structlog.typing import EventDict, Processor

from quantum_witness import __version__
from quantum_witness.config import get_settings


def add_app_context(logger: Any, method_name: str, event_dict: EventDict) -> EventDict:
    event_dict["app"] = "quantum-witness"
    event_dict["version"] = __version__
    return event_dict


def numpy_to_builtin(logger: Any, method_name: str, event_dict: EventDict) -> EventDict:
    """Replace numpy scalars and small arrays so every renderer can serialize them."""
    for key, value in event_dict.items():
        if isinstance(value, np.generic):
            event_dict[key] = value.item()
        elif isinstance(value, np.ndarray):
            event_dict[key] = value.tolist() if value.size <= 16 else f"array{value.shape}"
    return event_dict


def configure_logging(level: str | None = None, json_logs: bool | None = None) -> None:
    """Install structlog over stdlib logging.

    Defaults follow the settings: console rendering in development, JSON
    everywhere else.
    """
    settings = get_settings()
    level = level or settings.log_level
    json_logs = (not settings.is_development) if json_logs is None else json_logs

    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=getattr(logging, level), force=True)

    processors: list[Processor] = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        add_app_context,
        numpy_to_builtin,
        structlog.processors.StackInfoRenderer(),
    ]
    if json_logs:
        processors += [structlog.processors.format_exc_info, structlog.processors.JSONRenderer()]
    else:
        processors += [structlog.dev.set_exc_info, structlog.dev.ConsoleRenderer(colors=False)]

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=False,
    )


def bind_run_context(**fields: Any) -> None:
    """Attach fields (command, seed, profile) to every log line of the current run."""
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(**fields)


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    return structlog.get_logger(name)
