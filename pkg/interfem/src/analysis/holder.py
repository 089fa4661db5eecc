"""
Sampled Hoelder seminorms of gradients

Gradients are sampled at element centroids. Two pair sets are drawn with a
fixed seed: uniform pairs with |x - y| in [rho, diam / 2] and near-scale
pairs with |x - y| in [rho, 2 rho] anchored partly on interface elements.
Pairs inside one subdomain give the per-subdomain estimate; pairs whose
points lie in different subdomains give the cross-interface estimate.
Both are lower bounds of the true seminorms.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np
from scipy.spatial import cKDTree

from ..config import get_config
from ..fem.field import DiscreteField
from ..utils.validation import validate_positive, validate_range

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HolderEstimate:
    alpha: float
    rho: float
    per_subdomain: Dict[int, float]
    cross: float
    pairs: int
    cross_pairs: int

    @property
    def inside(self) -> float:
        """Largest per-subdomain estimate."""
        return max(self.per_subdomain.values()) if self.per_subdomain else 0.0


def sample_pairs(points: np.ndarray, rho: float, count: int, seed: int,
                 anchors: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Index pairs (K, 2) into ``points`` with |x - y| >= rho.

    Half of the pairs are uniform with |x - y| <= diam / 2, half are near-scale
    with |x - y| in [rho, 2 rho]; near-scale anchors come alternately from
    ``anchors`` (if given) and from all points.
    """
    rng = np.random.default_rng(seed)
    total = points.shape[0]
    if total < 2:
        return np.empty((0, 2), dtype=np.int64)
    span = points.max(axis=0) - points.min(axis=0)
    half_diam = 0.5 * float(np.hypot(*span))
    uniform = rng.integers(0, total, size=(count // 2 + count % 2, 2))
    d = np.linalg.norm(points[uniform[:, 0]] - points[uniform[:, 1]], axis=1)
    uniform = uniform[(d >= rho) & (d <= max(half_diam, rho))]

    near_count = count // 2
    start = rng.integers(0, total, size=near_count)
    if anchors is not None and anchors.size:
        pick = rng.integers(0, anchors.size, size=near_count)
        start = np.where(np.arange(near_count) % 2 == 0, anchors[pick], start)
    angle = rng.uniform(0.0, 2.0 * np.pi, size=near_count)
    dist = rng.uniform(rho, 2.0 * rho, size=near_count)
    target = points[start] + dist[:, None] * np.column_stack([np.cos(angle), np.sin(angle)])
    _, partner = cKDTree(points).query(target)
    near = np.column_stack([start, partner])
    d = np.linalg.norm(points[near[:, 0]] - points[near[:, 1]], axis=1)
    near = near[d >= rho]
    return np.vstack([uniform, near]).astype(np.int64)


def holder_quotients(points: np.ndarray, tags: np.ndarray, gradients: np.ndarray, alpha: float,
                     pairs: np.ndarray) -> Tuple[Dict[int, float], float, int]:
    """
    Per-subdomain and cross-interface sup of |G(x) - G(y)| / |x - y|^alpha over the given pairs.

    Returns:
        (per-subdomain sups, cross sup, number of cross pairs)
    """
    g = gradients.reshape(gradients.shape[0], -1)
    i, k = pairs[:, 0], pairs[:, 1]
    dist = np.linalg.norm(points[i] - points[k], axis=1)
    quotient = np.linalg.norm(g[i] - g[k], axis=1) / dist ** alpha
    same = tags[i] == tags[k]
    per_subdomain = {}
    for tag in np.unique(tags):
        mask = same & (tags[i] == tag)
        per_subdomain[int(tag)] = float(quotient[mask].max()) if mask.any() else 0.0
    cross = float(quotient[~same].max()) if (~same).any() else 0.0
    return per_subdomain, cross, int((~same).sum())


def holder_seminorm(field: Union[DiscreteField, Callable], partition, alpha: float,
                    rho: Optional[float] = None, pairs: Optional[int] = None, seed: Optional[int] = None,
                    mesh=None) -> HolderEstimate:
    """
    Estimate [grad u]_{alpha} per subdomain and across interfaces.

    Args:
        field: Discrete field, or a gradient callable (P, 2) -> (P, n, 2)
            evaluated at the centroids of ``mesh``
        partition: Domain partition (used for callable fields)
        alpha: Hoelder exponent in (0, 1]
        rho: Scale floor (default 4 h); pairs closer than rho are ignored
        pairs: Number of sampled pairs (default SolverConfig.holder_pairs)
        seed: Sampling seed (default SolverConfig.seed)
        mesh: Sampling mesh when ``field`` is a callable

    Returns:
        HolderEstimate
    """
    config = get_config()
    alpha = validate_range(alpha, "alpha", 0.0, 1.0, low_inclusive=False)
    pairs = config.holder_pairs if pairs is None else int(pairs)
    seed = config.seed if seed is None else int(seed)
    if isinstance(field, DiscreteField):
        mesh = field.mesh
        gradients = field.centroid_gradients()
        tags = mesh.tags
    else:
        gradients = np.asarray(field(mesh.centroids), dtype=float)
        tags = partition.locate(mesh.centroids) if partition is not None else mesh.tags
    rho = 4.0 * mesh.h if rho is None else validate_positive(rho, "rho")
    if rho < 2.0 * mesh.h:
        logger.warning(f"scale floor {rho:.4g} is below 2h = {2.0 * mesh.h:.4g}; sub-mesh scales are sampled")
    index = sample_pairs(mesh.centroids, rho, pairs, seed, anchors=mesh.interface_elements)
    per_subdomain, cross, cross_pairs = holder_quotients(mesh.centroids, tags, gradients, alpha, index)
    return HolderEstimate(alpha, rho, per_subdomain, cross, int(index.shape[0]), cross_pairs)
