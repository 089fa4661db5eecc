"""
Observed convergence orders.
"""

from typing import Sequence

import numpy as np

from ..exceptions import ValidationError


def observed_orders(h: Sequence[float], errors: Sequence[float]) -> np.ndarray:
    """Orders log(e_k / e_{k+1}) / log(h_k / h_{k+1}) between successive levels (nan where an error vanishes)."""
    h = np.asarray(h, dtype=float)
    e = np.asarray(errors, dtype=float)
    if h.shape != e.shape or h.size < 2:
        raise ValidationError("need at least two levels with one error each")
    with np.errstate(divide="ignore", invalid="ignore"):
        orders = np.log(e[:-1] / e[1:]) / np.log(h[:-1] / h[1:])
    return np.where(np.isfinite(orders), orders, np.nan)


def fitted_order(h: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log e against log h over the levels with e > 0."""
    h = np.asarray(h, dtype=float)
    e = np.asarray(errors, dtype=float)
    keep = e > 0
    if keep.sum() < 2:
        return float("nan")
    slope, _ = np.polyfit(np.log(h[keep]), np.log(e[keep]), 1)
    return float(slope)
