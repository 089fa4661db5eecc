"""
Interface-fitted mesh generation

Every curve is polygonalised with arclength-uniform nodes lying exactly on
the curve; the polygons enter a constrained Delaunay triangulation (the
``triangle`` package) as segments that may not be split, and one region
point per subdomain carries its tag.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np
import triangle

from .trimesh import TriMesh
from ..config import get_config
from ..exceptions import MeshFailure, ValidationError
from ..geometry.partition import BoxDomain, DomainPartition
from ..utils.retry import RetryHandler
from ..utils.validation import validate_positive

logger = logging.getLogger(__name__)


def _ring_segments(start: int, count: int) -> np.ndarray:
    idx = np.arange(count)
    return np.column_stack([idx, (idx + 1) % count]) + start


def _polygonalise(partition: DomainPartition, h_target: float, offset: float):
    """Vertices, segments and per-curve vertex ranges of the input PSLG."""
    vertices: List[np.ndarray] = []
    segments: List[np.ndarray] = []
    start = 0

    if isinstance(partition.outer, BoxDomain):
        outer = partition.outer.boundary_polyline(h_target)
    else:
        count = max(8, int(np.ceil(partition.outer.length / h_target)))
        outer, _ = partition.outer.sample(count, offset)
    vertices.append(outer)
    segments.append(_ring_segments(start, outer.shape[0]))
    start += outer.shape[0]

    ranges = {}
    for j, curve in enumerate(partition.inclusions, start=1):
        count = max(8, int(np.ceil(curve.length / h_target)))
        pts, _ = curve.sample(count, offset)
        vertices.append(pts)
        segments.append(_ring_segments(start, count))
        ranges[j] = (start, count)
        start += count
    return np.vstack(vertices), np.vstack(segments), ranges, outer.shape[0]


def _region_points(partition: DomainPartition, h_target: float) -> np.ndarray:
    regions = []
    for tag in partition.tags:
        if tag == partition.outer_tag:
            sep = partition.min_separation()
        else:
            sep = partition.curve_separation(tag)
        offset = 0.25 * min(sep, h_target)
        x, y = partition.region_point(tag, offset)
        regions.append([x, y, float(tag), 0.0])
    return np.array(regions)


def _triangulate_once(partition: DomainPartition, h_target: float, attempt: int = 0,
                      seed: int = 0) -> TriMesh:
    config = get_config()
    offset = 0.0 if attempt == 0 else float(np.random.default_rng(seed + attempt).uniform(0.0, 1.0))
    vertices, segments, ranges, outer_count = _polygonalise(partition, h_target, offset)
    max_area = np.sqrt(3.0) / 4.0 * h_target ** 2
    options = f"pq{config.mesh_quality_angle:g}a{max_area:.12f}AYYQ"
    logger.debug(f"triangulating {vertices.shape[0]} boundary vertices with options {options}")
    out = triangle.triangulate(
        {"vertices": vertices, "segments": segments, "regions": _region_points(partition, h_target)},
        options,
    )
    nodes = np.asarray(out["vertices"], dtype=float)
    tris = np.asarray(out["triangles"], dtype=np.int64)
    tags = np.rint(np.asarray(out["triangle_attributes"]).reshape(-1)).astype(np.int64)

    if nodes.shape[0] < vertices.shape[0] or not np.array_equal(nodes[:vertices.shape[0]], vertices):
        raise MeshFailure("triangulator moved boundary vertices", error_code="MESH_VERTICES")

    # counter-clockwise orientation
    p = nodes[tris]
    cross = ((p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
             - (p[:, 1, 1] - p[:, 0, 1]) * (p[:, 2, 0] - p[:, 0, 0]))
    flip = cross < 0
    tris[flip] = tris[flip][:, [0, 2, 1]]

    interface = []
    for j, (start, count) in ranges.items():
        seg = _ring_segments(start, count)
        interface.append(np.column_stack([seg, np.full(count, j), np.full(count, j)]))
    interface = np.vstack(interface) if interface else np.empty((0, 4), dtype=np.int64)
    boundary = _ring_segments(0, outer_count)

    mesh = TriMesh(nodes, tris, tags, interface, boundary)
    mesh.validate(partition)
    if mesh.h > 2.0 * h_target:
        raise MeshFailure(f"mesh size {mesh.h:.4f} exceeds twice the target {h_target}")
    return mesh


def generate_fitted_mesh(partition: DomainPartition, h_target: float,
                         seed: Optional[int] = None) -> TriMesh:
    """
    Generate an interface-fitted triangulation of a partition.

    Args:
        partition: Validated domain partition
        h_target: Target element size (must be below half the curve separation)
        seed: Seed of the jitter used on retries

    Returns:
        A mesh satisfying every TriMesh invariant with h <= 2 * h_target

    Raises:
        ValidationError: If h_target violates the separation precondition
        MeshFailure: If the quality floor cannot be met after retries
    """
    config = get_config()
    h_target = validate_positive(h_target, "h_target")
    separation = partition.min_separation()
    if h_target >= 0.5 * separation:
        raise ValidationError(
            f"h_target {h_target} must be below half the minimum curve separation ({separation:.4f})",
            error_code="MESH_PRECONDITION",
        )
    seed = config.seed if seed is None else seed
    handler = RetryHandler(max_retries=config.mesh_retries)
    mesh = handler.execute(_triangulate_once, partition, h_target, seed=seed,
                           exceptions=MeshFailure, pass_attempt=True)
    logger.info(f"generated mesh: {mesh.node_count} nodes, {mesh.triangle_count} triangles, h={mesh.h:.4f}")
    return mesh
