"""
Uniform red refinement

Each triangle is split into four by its edge midpoints. Midpoints of
interface edges (and of the outer boundary when it is a curve) are projected
radially onto the true curve. New nodes are appended in mesh edge order, so
refinement is deterministic.
"""

import logging

import numpy as np

from .trimesh import TriMesh
from ..config import get_config
from ..exceptions import MeshFailure
from ..geometry.curves import InterfaceCurve
from ..geometry.partition import DomainPartition

logger = logging.getLogger(__name__)


def refine(mesh: TriMesh, partition: DomainPartition) -> TriMesh:
    """
    Red-refine a mesh, keeping interface and curved boundary nodes on their curves.

    Args:
        mesh: Valid interface-fitted mesh
        partition: The partition the mesh is fitted to

    Returns:
        Refined mesh with four times as many triangles

    Raises:
        MeshFailure: If projection breaks positivity or the quality floor
    """
    n = mesh.node_count
    edges = mesh.edges
    midpoints = 0.5 * (mesh.nodes[edges[:, 0]] + mesh.nodes[edges[:, 1]])

    for j in mesh.curve_ids:
        ids = mesh.edge_index(mesh.interface_edges_of(j)[:, :2])
        midpoints[ids] = partition.curve(j).radial_point(midpoints[ids])
    if isinstance(partition.outer, InterfaceCurve) and mesh.boundary_edges.shape[0]:
        ids = mesh.edge_index(mesh.boundary_edges)
        midpoints[ids] = partition.outer.radial_point(midpoints[ids])

    nodes = np.vstack([mesh.nodes, midpoints])
    v = mesh.triangles
    m = mesh.element_edges + n  # m[:, k] is the midpoint opposite vertex k
    children = np.stack([
        np.column_stack([v[:, 0], m[:, 2], m[:, 1]]),
        np.column_stack([m[:, 2], v[:, 1], m[:, 0]]),
        np.column_stack([m[:, 1], m[:, 0], v[:, 2]]),
        np.column_stack([m[:, 0], m[:, 1], m[:, 2]]),
    ], axis=1).reshape(-1, 3)
    tags = np.repeat(mesh.tags, 4)

    def split(pairs: np.ndarray) -> np.ndarray:
        mid = mesh.edge_index(pairs[:, :2]) + n
        first = np.column_stack([pairs[:, 0], mid, pairs[:, 2:]])
        second = np.column_stack([mid, pairs[:, 1], pairs[:, 2:]])
        return np.stack([first, second], axis=1).reshape(-1, pairs.shape[1])

    interface = split(mesh.interface_edges) if mesh.interface_edges.shape[0] else mesh.interface_edges
    boundary = split(mesh.boundary_edges) if mesh.boundary_edges.shape[0] else mesh.boundary_edges

    fine = TriMesh(nodes, children, tags, interface, boundary)
    if np.any(fine.areas <= 0):
        raise MeshFailure("projection inverted a triangle during refinement", error_code="REFINE_INVERTED")
    floor = get_config().min_angle
    if fine.min_angle < floor:
        raise MeshFailure(f"refined mesh minimum angle {fine.min_angle:.2f} below floor {floor}",
                          error_code="REFINE_QUALITY")
    logger.debug(f"refined mesh: {fine.triangle_count} triangles, h={fine.h:.5f}")
    return fine
