"""
Interface sign of the weak form

The discrete transmission problem reads

    a(u, phi) = (F, grad phi) - (f, phi) + sigma * sum_j <g_j, phi>_{Gamma_j}

with the jump taken as inner minus outer conormal flux and the normal pointing
into the inclusion. Integration by parts gives sigma = -1; the value is pinned
by the manufactured self-test in ``transmission.orientation`` and read by every
interface assembler.
"""

import logging
import threading

from ..exceptions import ValidationError

logger = logging.getLogger(__name__)

DERIVED_SIGMA = -1

_lock = threading.Lock()
_sigma = DERIVED_SIGMA
_pinned = False


def get_orientation() -> int:
    """Current interface sign."""
    return _sigma


def set_orientation(sigma: int, pinned: bool = True) -> int:
    """
    Set the interface sign used by the assemblers.

    Raises:
        ValidationError: If sigma is not +1 or -1
    """
    global _sigma, _pinned
    if sigma not in (1, -1):
        raise ValidationError(f"orientation sign must be +1 or -1, got {sigma!r}")
    with _lock:
        if _pinned and pinned and sigma != _sigma:
            logger.warning(f"re-pinning interface sign from {_sigma} to {sigma}")
        _sigma = int(sigma)
        _pinned = _pinned or pinned
    return _sigma


def reset_orientation() -> None:
    """Return to the derived sign and forget the pin."""
    global _sigma, _pinned
    with _lock:
        _sigma = DERIVED_SIGMA
        _pinned = False


def is_pinned() -> bool:
    return _pinned
