"""
Retry utilities for interfem

Fitted mesh generation can fail on an unlucky polygonalisation. The handler
reruns it and hands the attempt number to the callable, which derives a
deterministic jitter from it.
"""

import logging
from typing import Any, Callable, Tuple, Type, Union

logger = logging.getLogger(__name__)


class RetryHandler:
    """Reruns a callable up to ``max_retries`` extra times on the given exceptions."""

    def __init__(self, max_retries: int = 3):
        self.max_retries = max_retries

    def execute(
        self,
        func: Callable,
        *args,
        exceptions: Union[Type[Exception], Tuple[Type[Exception], ...]] = Exception,
        pass_attempt: bool = False,
        **kwargs
    ) -> Any:
        """
        Call ``func`` until it succeeds or the retries are used up.

        Args:
            func: Callable to run
            exceptions: Exception types that trigger another attempt
            pass_attempt: Forward the zero-based attempt number as ``attempt=``

        Raises:
            The exception of the last attempt
        """
        for attempt in range(self.max_retries + 1):
            try:
                if pass_attempt:
                    return func(*args, attempt=attempt, **kwargs)
                return func(*args, **kwargs)
            except exceptions as e:
                if attempt == self.max_retries:
                    raise
                logger.warning(f"attempt {attempt + 1} of {self.max_retries + 1} failed: {e}")
