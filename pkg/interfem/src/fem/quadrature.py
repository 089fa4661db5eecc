"""
Quadrature rules

Triangle rules are conical (collapsed-coordinate) products of a Gauss-Jacobi
rule and a Gauss-Legendre rule on the reference triangle (0,0), (1,0), (0,1);
a rule built for ``degree`` integrates polynomials of that total degree
exactly. Line rules are Gauss-Legendre on [0, 1].
"""

from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.special import roots_jacobi

from ..exceptions import ValidationError


@lru_cache(maxsize=None)
def triangle_rule(degree: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Quadrature on the reference triangle.

    Args:
        degree: Polynomial degree to integrate exactly (>= 0)

    Returns:
        (points (Q, 2), weights (Q,)); the weights sum to 1/2
    """
    if degree < 0:
        raise ValidationError(f"quadrature degree must be nonnegative, got {degree}")
    n = max(1, (degree + 2) // 2)
    tj, wj = roots_jacobi(n, 1.0, 0.0)
    tl, wl = np.polynomial.legendre.leggauss(n)
    u = 0.5 * (1.0 + tj)
    v = 0.5 * (1.0 + tl)
    U, V = np.meshgrid(u, v, indexing="ij")
    W = np.outer(0.25 * wj, 0.5 * wl)
    points = np.column_stack([U.ravel(), (V * (1.0 - U)).ravel()])
    weights = W.ravel()
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights


@lru_cache(maxsize=None)
def line_rule(npoints: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre points and weights on [0, 1]."""
    if npoints < 1:
        raise ValidationError(f"line rule needs at least one point, got {npoints}")
    t, w = np.polynomial.legendre.leggauss(npoints)
    points, weights = 0.5 * (t + 1.0), 0.5 * w
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights
