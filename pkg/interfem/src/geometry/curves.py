"""
Parametric interface curves

Closed, counter-clockwise curves parametrised by an angle ``theta`` in
[0, 2*pi). Every curve is star-shaped with respect to its center, which is
what the radial projection used by mesh refinement relies on.

The perturbed circle has polar radius

    r(theta) = R + sum_k a_k |sin(k theta / 2)|^(1 + alpha)

whose tangent is C^{1,alpha} but not C^{1,1} at the zeros of sin(k theta / 2).
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional, Tuple

import numpy as np
from shapely.geometry import LinearRing, Polygon

from ..exceptions import ValidationError
from ..utils.validation import validate_positive, validate_range

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
CURVE_KINDS = ("circle", "ellipse", "perturbed_circle")

_TABLE_PANELS = 1024
_TABLE_GAUSS = np.polynomial.legendre.leggauss(8)


class CurveQuadrature(NamedTuple):
    """Composite Gauss rule on a curve; normals point into the enclosed region."""

    points: np.ndarray
    normals: np.ndarray
    weights: np.ndarray
    theta: np.ndarray

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Integrate sampled values (leading axis = quadrature node)."""
        return np.tensordot(self.weights, np.asarray(values, dtype=float), axes=(0, 0))


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    return arr.reshape(-1, 2)


@dataclass(frozen=True)
class InterfaceCurve:
    """A closed simple curve bounding an inclusion (or the outer domain)."""

    kind: str
    center: Tuple[float, float] = (0.0, 0.0)
    base_radius: float = 1.0
    semi_minor: Optional[float] = None
    perturbation: Tuple[Tuple[int, float], ...] = ()
    holder_exponent: float = 1.0

    def __post_init__(self):
        if self.kind not in CURVE_KINDS:
            raise ValidationError(f"unknown curve kind {self.kind!r}; expected one of {CURVE_KINDS}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        object.__setattr__(self, "base_radius", validate_positive(self.base_radius, "base_radius"))
        validate_range(self.holder_exponent, "holder_exponent", 0.0, 1.0, low_inclusive=False)
        object.__setattr__(self, "perturbation",
                           tuple((int(k), float(a)) for k, a in self.perturbation))
        if self.kind == "ellipse":
            if self.semi_minor is None:
                raise ValidationError("ellipse requires semi_minor")
            object.__setattr__(self, "semi_minor", validate_positive(self.semi_minor, "semi_minor"))
        if self.kind == "perturbed_circle":
            if any(k <= 0 for k, _ in self.perturbation):
                raise ValidationError("perturbation frequencies must be positive integers")
            if self.base_radius - sum(abs(a) for _, a in self.perturbation) <= 0:
                raise ValidationError("perturbation amplitudes exceed the base radius")

    # -- constructors -----------------------------------------------------

    @classmethod
    def circle(cls, radius: float, center=(0.0, 0.0)) -> "InterfaceCurve":
        return cls("circle", center=center, base_radius=radius)

    @classmethod
    def ellipse(cls, semi_major: float, semi_minor: float, center=(0.0, 0.0)) -> "InterfaceCurve":
        """Axis-aligned ellipse; ``semi_major`` is the x semi-axis."""
        return cls("ellipse", center=center, base_radius=semi_major, semi_minor=semi_minor)

    @classmethod
    def perturbed_circle(cls, radius: float, perturbation, holder_exponent: float,
                         center=(0.0, 0.0)) -> "InterfaceCurve":
        return cls("perturbed_circle", center=center, base_radius=radius,
                   perturbation=tuple(perturbation), holder_exponent=holder_exponent)

    # -- parametrisation --------------------------------------------------

    def _polar_radius(self, theta: np.ndarray) -> np.ndarray:
        r = np.full_like(theta, self.base_radius, dtype=float)
        p = 1.0 + self.holder_exponent
        for k, amp in self.perturbation:
            r = r + amp * np.abs(np.sin(0.5 * k * theta)) ** p
        return r

    def _polar_radius_derivative(self, theta: np.ndarray) -> np.ndarray:
        dr = np.zeros_like(theta, dtype=float)
        p = 1.0 + self.holder_exponent
        for k, amp in self.perturbation:
            s = np.sin(0.5 * k * theta)
            dr = dr + amp * p * np.abs(s) ** (p - 1.0) * np.sign(s) * np.cos(0.5 * k * theta) * 0.5 * k
        return dr

    def point(self, theta) -> np.ndarray:
        """Curve points for parameter values, shape (N, 2)."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        c, s = np.cos(theta), np.sin(theta)
        if self.kind == "ellipse":
            xy = np.stack([self.base_radius * c, self.semi_minor * s], axis=-1)
        else:
            r = self._polar_radius(theta)
            xy = np.stack([r * c, r * s], axis=-1)
        return xy + np.asarray(self.center)

    def derivative(self, theta) -> np.ndarray:
        """d(point)/d(theta), shape (N, 2)."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        c, s = np.cos(theta), np.sin(theta)
        if self.kind == "ellipse":
            return np.stack([-self.base_radius * s, self.semi_minor * c], axis=-1)
        r = self._polar_radius(theta)
        dr = self._polar_radius_derivative(theta)
        return np.stack([dr * c - r * s, dr * s + r * c], axis=-1)

    def speed(self, theta) -> np.ndarray:
        return np.linalg.norm(self.derivative(theta), axis=-1)

    def tangent(self, theta) -> np.ndarray:
        """Unit tangent in the counter-clockwise direction."""
        d = self.derivative(theta)
        return d / np.linalg.norm(d, axis=-1, keepdims=True)

    def inward_normal(self, theta) -> np.ndarray:
        """Unit normal pointing into the enclosed region (tangent rotated by +90 degrees)."""
        t = self.tangent(theta)
        return np.stack([-t[:, 1], t[:, 0]], axis=-1)

    def parameter_of(self, points) -> np.ndarray:
        """Parameter values of points lying on (or radially projected onto) the curve."""
        q = _as_points(points) - np.asarray(self.center)
        if self.kind == "ellipse":
            theta = np.arctan2(q[:, 1] / self.semi_minor, q[:, 0] / self.base_radius)
        else:
            theta = np.arctan2(q[:, 1], q[:, 0])
        return np.mod(theta, TWO_PI)

    # -- polar description ------------------------------------------------

    def radius_at(self, phi) -> np.ndarray:
        """Polar radius of the curve in direction ``phi`` about the center."""
        phi = np.atleast_1d(np.asarray(phi, dtype=float))
        if self.kind == "ellipse":
            a, b = self.base_radius, self.semi_minor
            return a * b / np.sqrt((b * np.cos(phi)) ** 2 + (a * np.sin(phi)) ** 2)
        return self._polar_radius(phi)

    def radial_point(self, points) -> np.ndarray:
        """Project points radially (from the center) onto the curve."""
        q = _as_points(points) - np.asarray(self.center)
        phi = np.arctan2(q[:, 1], q[:, 0])
        rho = self.radius_at(phi)
        return np.asarray(self.center) + np.stack([rho * np.cos(phi), rho * np.sin(phi)], axis=-1)

    def radial_gap(self, points) -> np.ndarray:
        """Signed radial offset |p - c| - r(phi); negative inside."""
        q = _as_points(points) - np.asarray(self.center)
        phi = np.arctan2(q[:, 1], q[:, 0])
        return np.hypot(q[:, 0], q[:, 1]) - self.radius_at(phi)

    def contains(self, points) -> np.ndarray:
        """Strict interior test."""
        return self.radial_gap(points) < 0.0

    def distance(self, points) -> np.ndarray:
        """Euclidean distance from points to the curve."""
        q = _as_points(points)
        if self.kind == "circle":
            return np.abs(np.linalg.norm(q - np.asarray(self.center), axis=-1) - self.base_radius)
        upper = np.abs(self.radial_gap(q))
        theta = self.parameter_of(q)
        # Newton on (p(theta) - q) . p'(theta) = 0
        eps = 1e-6
        for _ in range(20):
            d1 = self.derivative(theta)
            d2 = (self.derivative(theta + eps) - self.derivative(theta - eps)) / (2 * eps)
            diff = self.point(theta) - q
            f = np.einsum("ij,ij->i", diff, d1)
            fp = np.einsum("ij,ij->i", d1, d1) + np.einsum("ij,ij->i", diff, d2)
            step = np.where(np.abs(fp) > 0, f / np.where(fp == 0, 1.0, fp), 0.0)
            theta = theta - np.clip(step, -0.1, 0.1)
        newton = np.linalg.norm(self.point(theta) - q, axis=-1)
        return np.minimum(newton, upper)

    # -- arclength --------------------------------------------------------

    @cached_property
    def _arclength_table(self) -> Tuple[np.ndarray, np.ndarray]:
        xg, wg = _TABLE_GAUSS
        edges = np.linspace(0.0, TWO_PI, _TABLE_PANELS + 1)
        half = 0.5 * (edges[1] - edges[0])
        nodes = 0.5 * (edges[:-1] + edges[1:])[:, None] + half * xg[None, :]
        seg = (self.speed(nodes.ravel()).reshape(nodes.shape) * wg).sum(axis=1) * half
        return edges, np.concatenate([[0.0], np.cumsum(seg)])

    @cached_property
    def length(self) -> float:
        return float(self._arclength_table[1][-1])

    @cached_property
    def area(self) -> float:
        """Enclosed area by the shoelace integral."""
        quad = self.boundary_quadrature(order=8, panels=512)
        q = quad.points - np.asarray(self.center)
        t = self.tangent(quad.theta)
        return float(0.5 * np.sum(quad.weights * (q[:, 0] * t[:, 1] - q[:, 1] * t[:, 0])))

    def arclength(self, theta) -> np.ndarray:
        """Arclength from theta = 0 to theta (theta in [0, 2*pi])."""
        theta = np.clip(np.atleast_1d(np.asarray(theta, dtype=float)), 0.0, TWO_PI)
        edges, cumulative = self._arclength_table
        step = edges[1] - edges[0]
        k = np.clip(np.floor(theta / step).astype(int), 0, _TABLE_PANELS - 1)
        start = edges[k]
        half = 0.5 * (theta - start)
        xg, wg = _TABLE_GAUSS
        nodes = start[:, None] + half[:, None] * (xg[None, :] + 1.0)
        partial = (self.speed(nodes.ravel()).reshape(nodes.shape) * wg).sum(axis=1) * half
        return cumulative[k] + partial

    def theta_at(self, s) -> np.ndarray:
        """Invert the arclength map; ``s`` wraps modulo the curve length."""
        s = np.mod(np.atleast_1d(np.asarray(s, dtype=float)), self.length)
        edges, cumulative = self._arclength_table
        theta = np.interp(s, cumulative, edges)
        for _ in range(8):
            theta = np.clip(theta - (self.arclength(theta) - s) / self.speed(theta), 0.0, TWO_PI)
        return theta

    def normal_at(self, s) -> np.ndarray:
        """Inward unit normal at arclength ``s``."""
        return self.inward_normal(self.theta_at(s))

    def tangent_at(self, s) -> np.ndarray:
        return self.tangent(self.theta_at(s))

    def sample(self, count: int, offset: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
        """
        Arclength-uniform samples, counter-clockwise.

        Args:
            count: Number of samples
            offset: Fraction of one spacing by which the first sample is shifted

        Returns:
            (points, theta)
        """
        s = (np.arange(count) + offset) * (self.length / count)
        theta = self.theta_at(s)
        order = np.argsort(theta, kind="stable")
        theta = theta[order]
        return self.point(theta), theta

    def boundary_quadrature(self, order: int = 4, panels: int = 256) -> CurveQuadrature:
        """
        Composite Gauss-Legendre rule in the curve parameter.

        Args:
            order: Gauss points per panel (>= 1)
            panels: Number of equal parameter panels

        Returns:
            CurveQuadrature with points, inward normals, arclength weights and parameters
        """
        if order < 1:
            raise ValidationError(f"quadrature order must be >= 1, got {order}")
        xg, wg = np.polynomial.legendre.leggauss(order)
        edges = np.linspace(0.0, TWO_PI, panels + 1)
        half = 0.5 * (edges[1] - edges[0])
        theta = (0.5 * (edges[:-1] + edges[1:])[:, None] + half * xg[None, :]).ravel()
        weights = np.tile(wg * half, panels) * self.speed(theta)
        return CurveQuadrature(self.point(theta), self.inward_normal(theta), weights, theta)

    # -- regularity and topology checks ----------------------------------

    def holder_quotient(self, alpha: Optional[float] = None, pairs: int = 10_000,
                        seed: int = 0) -> float:
        """
        Sampled sup of |t(s1) - t(s2)| / |s1 - s2|^alpha over random arclength pairs.

        The arclength distance is periodic. Returns a lower bound of the
        Hoelder constant of the tangent.
        """
        alpha = self.holder_exponent if alpha is None else alpha
        rng = np.random.default_rng(seed)
        s = rng.uniform(0.0, self.length, size=(pairs, 2))
        gap = np.abs(s[:, 0] - s[:, 1])
        gap = np.minimum(gap, self.length - gap)
        keep = gap > 1e-9 * self.length
        t1 = self.tangent_at(s[keep, 0])
        t2 = self.tangent_at(s[keep, 1])
        quotient = np.linalg.norm(t1 - t2, axis=-1) / gap[keep] ** alpha
        return float(quotient.max()) if quotient.size else 0.0

    def ring(self, samples: int = 2048) -> LinearRing:
        theta = np.linspace(0.0, TWO_PI, samples, endpoint=False)
        return LinearRing(self.point(theta))

    def polygon(self, samples: int = 2048) -> Polygon:
        return Polygon(self.ring(samples))

    def is_simple(self, samples: int = 2048) -> bool:
        """Dense-sample self-intersection check."""
        return bool(self.ring(samples).is_simple)

    @cached_property
    def max_radius(self) -> float:
        theta = np.linspace(0.0, TWO_PI, 2048, endpoint=False)
        return float(np.max(np.linalg.norm(self.point(theta) - np.asarray(self.center), axis=-1)))


def normal_at(curve: InterfaceCurve, s) -> np.ndarray:
    """Inward unit normal of ``curve`` at arclength ``s`` (wrapping modulo the length)."""
    return curve.normal_at(s)


def boundary_quadrature(curve: InterfaceCurve, order: int = 4, panels: int = 256) -> CurveQuadrature:
    """Composite Gauss rule on ``curve``; see InterfaceCurve.boundary_quadrature."""
    return curve.boundary_quadrature(order=order, panels=panels)
