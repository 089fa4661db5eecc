"""
Domain partition

An outer domain (a closed curve or an axis-aligned box) split by
non-touching inclusion curves into subdomains. Inclusion ``j`` (1-based)
encloses subdomain ``j``; its parent is another inclusion or 0 for the outer
domain. The region between the outer boundary and the top-level inclusions is
subdomain ``M = len(inclusions) + 1``.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.distance import pdist
from shapely.geometry import Polygon, box as shapely_box

from .curves import InterfaceCurve, TWO_PI
from ..config import get_config
from ..exceptions import OutsideDomain, ValidationError
from ..utils.validation import validate_point

logger = logging.getLogger(__name__)

INTERFACE = 0
OUTSIDE = -1


@dataclass(frozen=True)
class BoxDomain:
    """Axis-aligned rectangular outer domain."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValidationError(f"degenerate box {self}")

    @property
    def center(self) -> Tuple[float, float]:
        return (0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax))

    @property
    def area(self) -> float:
        return (self.xmax - self.xmin) * (self.ymax - self.ymin)

    @property
    def length(self) -> float:
        return 2.0 * ((self.xmax - self.xmin) + (self.ymax - self.ymin))

    def contains(self, points) -> np.ndarray:
        q = np.asarray(points, dtype=float).reshape(-1, 2)
        return ((q[:, 0] > self.xmin) & (q[:, 0] < self.xmax)
                & (q[:, 1] > self.ymin) & (q[:, 1] < self.ymax))

    def distance(self, points) -> np.ndarray:
        """Distance to the boundary of the box."""
        q = np.asarray(points, dtype=float).reshape(-1, 2)
        dx = np.maximum(self.xmin - q[:, 0], q[:, 0] - self.xmax)
        dy = np.maximum(self.ymin - q[:, 1], q[:, 1] - self.ymax)
        outside = np.hypot(np.maximum(dx, 0.0), np.maximum(dy, 0.0))
        inside = -np.maximum(dx, dy)
        return np.where((dx > 0) | (dy > 0), outside, inside)

    def polygon(self, samples: int = 0) -> Polygon:
        return shapely_box(self.xmin, self.ymin, self.xmax, self.ymax)

    def ring(self, samples: int = 0):
        return self.polygon().exterior

    def boundary_polyline(self, spacing: float) -> np.ndarray:
        """Counter-clockwise boundary nodes with spacing at most ``spacing``."""
        corners = np.array([[self.xmin, self.ymin], [self.xmax, self.ymin],
                            [self.xmax, self.ymax], [self.xmin, self.ymax]])
        nodes = []
        for a, b in zip(corners, np.roll(corners, -1, axis=0)):
            count = max(1, int(np.ceil(np.linalg.norm(b - a) / spacing)))
            t = np.arange(count) / count
            nodes.append(a + t[:, None] * (b - a))
        return np.vstack(nodes)

    @property
    def diameter(self) -> float:
        return float(np.hypot(self.xmax - self.xmin, self.ymax - self.ymin))

    def interior_point(self, offset: float) -> np.ndarray:
        return np.array([self.xmin + offset, self.ymin + offset])


Outer = Union[InterfaceCurve, BoxDomain]


@dataclass(frozen=True)
class DomainPartition:
    """Outer domain plus ordered inclusions with their containment parents."""

    outer: Outer
    inclusions: Tuple[InterfaceCurve, ...] = ()
    parents: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "inclusions", tuple(self.inclusions))
        parents = tuple(int(p) for p in self.parents) if self.parents else (0,) * len(self.inclusions)
        object.__setattr__(self, "parents", parents)
        if len(parents) != len(self.inclusions):
            raise ValidationError("one parent index is required per inclusion")
        for j, p in enumerate(parents, start=1):
            if p < 0 or p > len(self.inclusions) or p == j:
                raise ValidationError(f"inclusion {j}: invalid parent {p}")
        # parents must form a forest
        for j in range(1, len(parents) + 1):
            seen, p = set(), j
            while p:
                if p in seen:
                    raise ValidationError(f"inclusion {j}: cyclic containment")
                seen.add(p)
                p = parents[p - 1]

    # -- structure ---------------------------------------------------------

    @property
    def subdomain_count(self) -> int:
        return len(self.inclusions) + 1

    @property
    def outer_tag(self) -> int:
        return self.subdomain_count

    @property
    def tags(self) -> List[int]:
        return list(range(1, self.subdomain_count + 1))

    def curve(self, j: int) -> InterfaceCurve:
        if not 1 <= j <= len(self.inclusions):
            raise ValidationError(f"no inclusion {j} (partition has {len(self.inclusions)})")
        return self.inclusions[j - 1]

    def parent_tag(self, j: int) -> int:
        """Subdomain on the outer side of inclusion curve ``j``."""
        p = self.parents[j - 1]
        return p if p else self.outer_tag

    def children(self, j: int) -> List[int]:
        """Inclusions directly inside inclusion ``j`` (``j = 0`` for the top level)."""
        return [i for i, p in enumerate(self.parents, start=1) if p == j]

    def depth(self, j: int) -> int:
        d, p = 0, j
        while p:
            d += 1
            p = self.parents[p - 1]
        return d

    def boundary_curves(self, tag: int) -> List[int]:
        """Inclusion curves forming the inner boundary of a subdomain (excluding its own curve)."""
        return self.children(0 if tag == self.outer_tag else tag)

    # -- measures ------------------------------------------------------------

    @cached_property
    def diameter(self) -> float:
        if isinstance(self.outer, BoxDomain):
            return self.outer.diameter
        theta = np.linspace(0.0, TWO_PI, 512, endpoint=False)
        return float(pdist(self.outer.point(theta)).max())

    @property
    def tol_geom(self) -> float:
        return get_config().tol_geom_factor * self.diameter

    def subdomain_area(self, tag: int) -> float:
        """Analytic area of a subdomain."""
        if tag == self.outer_tag:
            total = self.outer.area
        else:
            total = self.curve(tag).area
        return float(total - sum(self.curve(c).area for c in self.boundary_curves(tag)))

    def min_separation(self) -> float:
        """Smallest distance between any two curves (outer boundary included)."""
        rings = [self.outer.ring(2048)] + [c.ring(2048) for c in self.inclusions]
        best = np.inf
        for a in range(len(rings)):
            for b in range(a + 1, len(rings)):
                best = min(best, rings[a].distance(rings[b]))
        return float(best)

    def curve_separation(self, j: int) -> float:
        """Distance from inclusion ``j`` to every other curve."""
        ring = self.curve(j).ring(2048)
        others = [self.outer.ring(2048)] + [c.ring(2048) for i, c in enumerate(self.inclusions, 1) if i != j]
        return float(min(ring.distance(o) for o in others))

    def validate(self) -> "DomainPartition":
        """
        Check simplicity, containment and strictly positive separations.

        Raises:
            ValidationError: If a curve self-intersects, touches another curve,
                leaves its parent, or overlaps a sibling
        """
        outer_poly = self.outer.polygon(2048)
        if isinstance(self.outer, InterfaceCurve) and not self.outer.is_simple():
            raise ValidationError("outer curve is not simple")
        polys = []
        for j, curve in enumerate(self.inclusions, start=1):
            if not curve.is_simple():
                raise ValidationError(f"inclusion {j} is not simple")
            polys.append(curve.polygon(2048))
        for j, poly in enumerate(polys, start=1):
            p = self.parents[j - 1]
            container = outer_poly if p == 0 else polys[p - 1]
            if not container.contains(poly):
                raise ValidationError(f"inclusion {j} is not strictly inside its parent")
            for i in self.children(p):
                if i > j and poly.intersects(polys[i - 1]):
                    raise ValidationError(f"inclusions {j} and {i} overlap")
        separation = self.min_separation()
        if separation <= self.tol_geom:
            raise ValidationError(f"curves touch (separation {separation:.3e})")
        return self

    # -- point location -----------------------------------------------------

    def _outer_contains(self, q: np.ndarray) -> np.ndarray:
        return self.outer.contains(q)

    def locate(self, points) -> np.ndarray:
        """
        Vectorised subdomain lookup without interface tolerance.

        Returns:
            Tag per point, OUTSIDE (-1) for points exterior to the outer domain
        """
        q = np.asarray(points, dtype=float).reshape(-1, 2)
        tags = np.full(q.shape[0], self.outer_tag, dtype=int)
        best_depth = np.full(q.shape[0], -1, dtype=int)
        for j, curve in enumerate(self.inclusions, start=1):
            d = self.depth(j)
            inside = curve.contains(q) & (d > best_depth)
            tags[inside] = j
            best_depth[inside] = d
        outside = ~self._outer_contains(q) & (self.outer.distance(q) > self.tol_geom)
        tags[outside] = OUTSIDE
        return tags

    def classify_point(self, p) -> int:
        """
        Subdomain index of a point, or INTERFACE within tol_geom of an inclusion curve.

        Raises:
            OutsideDomain: If the point is exterior to the closed outer domain
        """
        q = validate_point(p)[None, :]
        if not self._outer_contains(q)[0] and self.outer.distance(q)[0] > self.tol_geom:
            raise OutsideDomain(f"point {tuple(q[0])} lies outside the outer domain",
                                error_code="OUTSIDE_DOMAIN")
        tol = self.tol_geom
        for curve in self.inclusions:
            if curve.distance(q)[0] < tol:
                return INTERFACE
        return int(self.locate(q)[0])

    def region_point(self, tag: int, offset: float) -> np.ndarray:
        """A point strictly inside subdomain ``tag``, near its own boundary curve."""
        if tag == self.outer_tag and isinstance(self.outer, BoxDomain):
            return self.outer.interior_point(offset)
        curve = self.outer if tag == self.outer_tag else self.curve(tag)
        theta = np.array([0.0])
        return (curve.point(theta) + offset * curve.inward_normal(theta))[0]
