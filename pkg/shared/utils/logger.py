"""Structured logging with JSON or console output and bound context."""
import logging
import sys
from pathlib import Path
from typing import Optional, TextIO

import structlog


def setup_logging(
    component: str,
    log_level: str = "WARNING",
    log_format: str = "text",
    log_file: Optional[str] = None,
    stream: Optional[TextIO] = None,
):
    """
    Configure structured logging for a toolkit entry point.

    Args:
        component: Name bound to every record as ``component``
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR)
        log_format: Output format ('json' or 'text')
        log_file: Optional file path; records go there instead of the stream
        stream: Text stream for records, stderr by default so stdout stays
            free for command results

    Returns:
        Logger bound to the component name
    """
    level = getattr(logging, log_level.upper(), logging.WARNING)

    shared_processors = [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
    ]

    if log_format == "json":
        processors = shared_processors + [structlog.processors.JSONRenderer()]
    else:
        processors = shared_processors + [structlog.dev.ConsoleRenderer(colors=False)]

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        logger_factory = structlog.WriteLoggerFactory(file=log_path.open("a"))
    else:
        logger_factory = structlog.PrintLoggerFactory(file=stream or sys.stderr)

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.make_filtering_bound_logger(level),
        context_class=dict,
        logger_factory=logger_factory,
        cache_logger_on_first_use=False,
    )

    return structlog.get_logger().bind(component=component)


def get_logger(name: str):
    """Get a logger instance with the given name."""
    # stays lazy so records follow setup_logging run after import
    return structlog.get_logger(logger_name=name)


class LogContext:
    """Context manager for adding structured context to logs."""

    def __init__(self, **context):
        self.context = context

    def __enter__(self):
        structlog.contextvars.bind_contextvars(**self.context)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        structlog.contextvars.unbind_contextvars(*self.context.keys())
