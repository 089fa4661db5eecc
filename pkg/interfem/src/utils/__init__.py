"""
Common utilities for interfem: logging, retries, bounded concurrency,
parameter validation and artifact serialization.
"""

from .logging import setup_logging, get_logger, log_timing, LoggerMixin
from .retry import RetryHandler
from .async_utils import run_concurrent, run_blocking_concurrent
from .serialization import csv_text, key_value_text, write_text, read_text, format_float, format_exact

__all__ = [
    "setup_logging",
    "get_logger",
    "log_timing",
    "LoggerMixin",
    "RetryHandler",
    "run_concurrent",
    "run_blocking_concurrent",
    "csv_text",
    "key_value_text",
    "write_text",
    "read_text",
    "format_float",
    "format_exact",
]
