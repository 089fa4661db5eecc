"""
Mean oscillation of gradients and Dini moduli of coefficients

phi(x, r) is the root-mean-square deviation of a gradient field from its
average over the ball B_r(x), clipped to the domain (and to one subdomain for
one-sided probes). omega(r) is the best piecewise-constant (per subdomain)
L2 mean oscillation of a coefficient over balls of radius r, maximised over
sample centers.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import trapezoid

from ..exceptions import DegenerateLadder, EmptyRegion, ValidationError
from ..fem.field import DiscreteField
from ..utils.validation import validate_ladder, validate_point, validate_positive, validate_range

logger = logging.getLogger(__name__)

APPROXIMANTS = ("constant", "linear")


def ball_quadrature(center, radius: float, partition=None, clip_tag: Optional[int] = None,
                    radial: int = 16, angular: int = 64) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Polar product rule on a ball, restricted to the domain.

    Gauss-Legendre in the radius (with the polar Jacobian) times the
    trapezoidal rule in the angle. Points outside the domain, or outside
    subdomain ``clip_tag`` when given, are dropped.

    Returns:
        (points (P, 2), weights (P,), tags (P,))

    Raises:
        EmptyRegion: If no quadrature point survives the clipping
    """
    center = validate_point(center, "center")
    radius = validate_positive(radius, "radius")
    t, w = np.polynomial.legendre.leggauss(radial)
    rho = 0.5 * radius * (t + 1.0)
    wr = 0.5 * radius * w * rho
    theta = 2.0 * np.pi * np.arange(angular) / angular
    wt = np.full(angular, 2.0 * np.pi / angular)
    R, T = np.meshgrid(rho, theta, indexing="ij")
    points = center + np.column_stack([(R * np.cos(T)).ravel(), (R * np.sin(T)).ravel()])
    weights = np.outer(wr, wt).ravel()
    if partition is None:
        tags = np.zeros(points.shape[0], dtype=int)
    else:
        tags = partition.locate(points)
        keep = tags >= 1 if clip_tag is None else tags == clip_tag
        points, weights, tags = points[keep], weights[keep], tags[keep]
    if weights.size == 0 or weights.sum() <= 0:
        raise EmptyRegion(f"ball of radius {radius} at {tuple(center)} has no support in the clipped region",
                          error_code="EMPTY_REGION")
    return points, weights, tags


def _gradient_values(gradient, points: np.ndarray) -> np.ndarray:
    if isinstance(gradient, DiscreteField):
        values = gradient.gradients_at(points)
    else:
        values = np.asarray(gradient(points), dtype=float)
    return values.reshape(points.shape[0], -1)


def mean_oscillation(gradient: Union[DiscreteField, Callable], center, radius: float, partition=None,
                     one_sided: bool = False, radial: int = 16, angular: int = 64) -> float:
    """
    phi(x, r): RMS deviation of the gradient from its mean over the clipped ball.

    Args:
        gradient: Discrete field (its gradient is used) or a callable
            (P, 2) -> (P, n, 2) / (P, 2)
        one_sided: Clip to the subdomain containing the center

    Raises:
        EmptyRegion: If the clipped ball is empty
    """
    clip = None
    if one_sided:
        if partition is None:
            raise ValidationError("one-sided probes need a partition")
        clip = int(partition.locate(np.asarray(center, dtype=float)[None, :])[0])
    points, weights, _ = ball_quadrature(center, radius, partition, clip, radial, angular)
    values = _gradient_values(gradient, points)
    total = weights.sum()
    mean = weights @ values / total
    dev = values - mean
    return float(np.sqrt(np.einsum("p,pi,pi->", weights, dev, dev) / total))


@dataclass(frozen=True)
class OscillationProbe:
    center: Tuple[float, float]
    radii: np.ndarray
    values: np.ndarray
    mu: float = 0.5
    one_sided: bool = False

    def __post_init__(self):
        if np.any(np.asarray(self.values) < 0):
            raise ValidationError("oscillation values must be nonnegative")

    @staticmethod
    def ladder(r0: float, mu: float, levels: int) -> np.ndarray:
        """Geometric radius ladder r_k = r0 * mu^k."""
        validate_positive(r0, "r0")
        validate_range(mu, "mu", 0.0, 1.0, low_inclusive=False, high_inclusive=False)
        return r0 * mu ** np.arange(int(levels))

    def rows(self):
        return list(zip(self.radii.tolist(), self.values.tolist()))


def probe_oscillation(gradient, center, r0: float, mu: float = 0.5, levels: int = 5, partition=None,
                      one_sided: bool = False) -> OscillationProbe:
    """Evaluate phi on the ladder r0 * mu^k, k < levels."""
    radii = validate_ladder(OscillationProbe.ladder(r0, mu, levels))
    values = np.array([mean_oscillation(gradient, center, r, partition, one_sided) for r in radii])
    return OscillationProbe(tuple(float(c) for c in center), radii, values, mu, one_sided)


@dataclass(frozen=True)
class DecayFit:
    beta: float
    constant: float
    residual: float
    points: int


def decay_fit(probe: OscillationProbe) -> DecayFit:
    """
    Least-squares fit log phi = log C + beta log r over the ladder points with phi > 0.

    Raises:
        DegenerateLadder: If phi vanishes at every scale (beta = inf)
        ValidationError: If fewer than four ladder points have phi > 0
    """
    radii = np.asarray(probe.radii, dtype=float)
    values = np.asarray(probe.values, dtype=float)
    positive = values > 0
    if not positive.any():
        raise DegenerateLadder("oscillation vanishes at every scale")
    if positive.sum() < 4:
        raise ValidationError(f"decay fit needs at least 4 positive ladder points, got {int(positive.sum())}")
    x, y = np.log(radii[positive]), np.log(values[positive])
    beta, log_c = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (beta * x + log_c)) ** 2)))
    return DecayFit(float(beta), float(np.exp(log_c)), residual, int(positive.sum()))


@dataclass(frozen=True)
class DiniModulus:
    radii: np.ndarray
    omega: np.ndarray
    approximant: str = "constant"
    centers: int = 0

    def rows(self):
        return list(zip(self.radii.tolist(), self.omega.tolist()))

    def dini_integral(self) -> float:
        """Trapezoidal estimate of int omega(t) / t dt over the ladder."""
        order = np.argsort(self.radii)
        r, w = self.radii[order], self.omega[order]
        return float(trapezoid(w / r, r)) if r.size > 1 else 0.0


def _best_fit_error(values: np.ndarray, weights: np.ndarray, points: np.ndarray, center: np.ndarray,
                    approximant: str) -> float:
    if approximant == "linear" and values.size >= 3:
        basis = np.column_stack([np.ones(values.size), points - center])
        sw = np.sqrt(weights)
        coef, *_ = np.linalg.lstsq(basis * sw[:, None], values * sw, rcond=None)
        dev = values - basis @ coef
    else:
        dev = values - weights @ values / weights.sum()
    return float(weights @ (dev * dev))


def dini_modulus(component: Callable[[np.ndarray], np.ndarray], partition, radii: Sequence[float],
                 centers: Sequence, approximant: str = "constant", radial: int = 16,
                 angular: int = 64) -> DiniModulus:
    """
    Mean-oscillation modulus omega(r) of a scalar coefficient component.

    For every radius, omega(r) is the sup over ``centers`` of the L2 mean
    oscillation of the component on the ball (clipped to the domain) about its
    best approximant, which is fitted independently on each subdomain part of
    the ball: the mean for ``"constant"``, a weighted least-squares affine
    function for ``"linear"``.

    Raises:
        ValidationError: If the ladder leaves (0, diam) or the approximant is unknown
    """
    if approximant not in APPROXIMANTS:
        raise ValidationError(f"approximant must be one of {APPROXIMANTS}, got {approximant!r}")
    radii = np.asarray(radii, dtype=float)
    if radii.size == 0 or np.any(radii <= 0) or np.any(radii >= partition.diameter):
        raise ValidationError("radius ladder must lie in (0, diam)")
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    omega = np.zeros(radii.size)
    for k, r in enumerate(radii):
        for c in centers:
            points, weights, tags = ball_quadrature(c, r, partition, None, radial, angular)
            values = np.asarray(component(points), dtype=float).reshape(-1)
            error = sum(_best_fit_error(values[tags == t], weights[tags == t], points[tags == t], c, approximant)
                        for t in np.unique(tags))
            omega[k] = max(omega[k], np.sqrt(error / weights.sum()))
    return DiniModulus(radii, omega, approximant, int(centers.shape[0]))
