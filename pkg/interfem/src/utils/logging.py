"""
Logging utilities for interfem

Package-level handler setup, stage timing and a mixin for classes that log
under their own qualified name.
"""

import logging
import sys
import time
from functools import wraps
from typing import Optional


def setup_logging(level: str = "INFO", format_string: Optional[str] = None) -> None:
    """
    Attach a single stderr handler to the ``interfem`` logger.

    Campaign artifacts and paths go to stdout, so log lines never mix with them.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        format_string: Record format, ``SolverConfig.log_format`` by default
    """
    if format_string is None:
        format_string = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    numeric_level = getattr(logging, level.upper(), logging.INFO)

    package_logger = logging.getLogger("interfem")
    package_logger.setLevel(numeric_level)
    for handler in package_logger.handlers[:]:
        package_logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(logging.Formatter(format_string))
    package_logger.addHandler(console_handler)

    # lark logs its grammar build at DEBUG
    logging.getLogger("lark").setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


def log_timing(label: str):
    """
    Decorator logging the wall time of a solver stage at DEBUG level.

    Failures are logged at ERROR with the stage label and re-raised.
    """
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            logger = get_logger(func.__module__)
            start = time.perf_counter()
            try:
                return func(*args, **kwargs)
            except Exception as e:
                logger.error(f"{label} failed: {e}")
                raise
            finally:
                logger.debug(f"{label} took {time.perf_counter() - start:.3f}s")
        return wrapper
    return decorator


class LoggerMixin:
    """Gives a class a logger named after its module and class."""

    @property
    def logger(self) -> logging.Logger:
        return get_logger(f"{self.__class__.__module__}.{self.__class__.__name__}")

    def log_info(self, message: str) -> None:
        self.logger.info(message)

    def log_warning(self, message: str) -> None:
        self.logger.warning(message)
