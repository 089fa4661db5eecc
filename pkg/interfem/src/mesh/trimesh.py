"""
Interface-fitted triangle mesh

Triangles are stored counter-clockwise with a subdomain tag. Interface edges
are stored as ``(i, j, curve_id, inner_tag)`` and ordered so that the inner
subdomain lies to the left of ``i -> j``; the edge normal rotated by +90
degrees therefore points into the inner subdomain.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import List, NamedTuple, Optional, Sequence, Union

import numpy as np
from scipy.spatial import cKDTree

from ..config import get_config
from ..exceptions import MeshFailure, SerializationError
from ..utils.serialization import format_exact, read_text, write_text

logger = logging.getLogger(__name__)

# local edge k is opposite local vertex k
LOCAL_EDGES = np.array([[1, 2], [2, 0], [0, 1]])


def _frozen(array, dtype) -> np.ndarray:
    arr = np.array(array, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


def topological_boundary(triangles: np.ndarray) -> np.ndarray:
    """Edges belonging to exactly one triangle, oriented as in that triangle."""
    local = triangles[:, LOCAL_EDGES].reshape(-1, 2)
    keys = np.sort(local, axis=1)
    _, inverse, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
    inverse = inverse.reshape(-1)
    return local[counts[inverse] == 1]


class Submesh(NamedTuple):
    mesh: "TriMesh"
    node_map: np.ndarray
    element_map: np.ndarray


@dataclass(frozen=True, eq=False)
class TriMesh:
    """Immutable interface-fitted triangulation."""

    nodes: np.ndarray
    triangles: np.ndarray
    tags: np.ndarray
    interface_edges: np.ndarray
    boundary_edges: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nodes", _frozen(np.reshape(self.nodes, (-1, 2)), float))
        object.__setattr__(self, "triangles", _frozen(np.reshape(self.triangles, (-1, 3)), np.int64))
        object.__setattr__(self, "tags", _frozen(np.reshape(self.tags, (-1,)), np.int64))
        object.__setattr__(self, "interface_edges", _frozen(np.reshape(self.interface_edges, (-1, 4)), np.int64))
        object.__setattr__(self, "boundary_edges", _frozen(np.reshape(self.boundary_edges, (-1, 2)), np.int64))
        if self.tags.shape[0] != self.triangles.shape[0]:
            raise MeshFailure("one tag is required per triangle")

    # -- sizes ---------------------------------------------------------------

    @property
    def node_count(self) -> int:
        return int(self.nodes.shape[0])

    @property
    def triangle_count(self) -> int:
        return int(self.triangles.shape[0])

    @cached_property
    def areas(self) -> np.ndarray:
        p = self.nodes[self.triangles]
        e1 = p[:, 1] - p[:, 0]
        e2 = p[:, 2] - p[:, 0]
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    @cached_property
    def centroids(self) -> np.ndarray:
        return self.nodes[self.triangles].mean(axis=1)

    @cached_property
    def centroid_tree(self) -> cKDTree:
        return cKDTree(self.centroids)

    # -- connectivity --------------------------------------------------------

    @cached_property
    def _edge_structure(self):
        local = np.sort(self.triangles[:, LOCAL_EDGES].reshape(-1, 2), axis=1)
        edges, inverse = np.unique(local, axis=0, return_inverse=True)
        return edges, inverse.reshape(-1, 3)

    @property
    def edges(self) -> np.ndarray:
        """Unique edges as sorted node pairs, in lexicographic order."""
        return self._edge_structure[0]

    @property
    def element_edges(self) -> np.ndarray:
        """Edge id of local edge k (opposite vertex k) per triangle."""
        return self._edge_structure[1]

    @cached_property
    def edge_triangles(self) -> np.ndarray:
        """Up to two adjacent triangles per edge; -1 marks a missing neighbour."""
        inv = self.element_edges.ravel()
        tri = np.repeat(np.arange(self.triangle_count), 3)
        order = np.argsort(inv, kind="stable")
        inv_s, tri_s = inv[order], tri[order]
        first = np.ones(inv_s.shape[0], dtype=bool)
        first[1:] = inv_s[1:] != inv_s[:-1]
        result = np.full((self.edges.shape[0], 2), -1, dtype=np.int64)
        result[inv_s[first], 0] = tri_s[first]
        result[inv_s[~first], 1] = tri_s[~first]
        return result

    def edge_index(self, pairs) -> np.ndarray:
        """Edge ids of node pairs (in either orientation)."""
        pairs = np.sort(np.asarray(pairs, dtype=np.int64).reshape(-1, 2), axis=1)
        n = self.node_count
        keys = self.edges[:, 0] * n + self.edges[:, 1]
        query = pairs[:, 0] * n + pairs[:, 1]
        idx = np.searchsorted(keys, query)
        idx = np.clip(idx, 0, keys.shape[0] - 1)
        if np.any(keys[idx] != query):
            raise MeshFailure("node pair is not a mesh edge")
        return idx

    @cached_property
    def boundary_nodes(self) -> np.ndarray:
        return np.unique(self.boundary_edges)

    def interface_edges_of(self, curve_id: int) -> np.ndarray:
        return self.interface_edges[self.interface_edges[:, 2] == curve_id]

    @property
    def curve_ids(self) -> List[int]:
        return sorted(int(c) for c in np.unique(self.interface_edges[:, 2]))

    @cached_property
    def interface_nodes(self) -> np.ndarray:
        return np.unique(self.interface_edges[:, :2])

    @cached_property
    def interface_elements(self) -> np.ndarray:
        """Triangles having a vertex on an interface."""
        mask = np.isin(self.triangles, self.interface_nodes).any(axis=1)
        return np.flatnonzero(mask)

    # -- quality -------------------------------------------------------------

    @cached_property
    def h(self) -> float:
        """Largest element diameter (longest edge)."""
        e = self.nodes[self.edges[:, 1]] - self.nodes[self.edges[:, 0]]
        return float(np.max(np.linalg.norm(e, axis=1)))

    @cached_property
    def angles(self) -> np.ndarray:
        """Interior angles in degrees, shape (T, 3)."""
        p = self.nodes[self.triangles]
        result = np.empty((self.triangle_count, 3))
        for k in range(3):
            a = p[:, (k + 1) % 3] - p[:, k]
            b = p[:, (k + 2) % 3] - p[:, k]
            cos = np.einsum("ij,ij->i", a, b) / (np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1))
            result[:, k] = np.degrees(np.arccos(np.clip(cos, -1.0, 1.0)))
        return result

    @property
    def min_angle(self) -> float:
        return float(self.angles.min())

    # -- derived meshes ------------------------------------------------------

    def submesh(self, tags: Union[int, Sequence[int]]) -> Submesh:
        """
        Restrict the mesh to the triangles carrying the given tags.

        Returns:
            Submesh with the restricted mesh, the global id of each local node
            and the global id of each local triangle (in global order)
        """
        tags = np.atleast_1d(np.asarray(tags))
        element_map = np.flatnonzero(np.isin(self.tags, tags))
        node_map = np.unique(self.triangles[element_map])
        local = np.full(self.node_count, -1, dtype=np.int64)
        local[node_map] = np.arange(node_map.shape[0])
        tris = local[self.triangles[element_map]]
        ie = self.interface_edges
        keep = (local[ie[:, 0]] >= 0) & (local[ie[:, 1]] >= 0)
        sub_ie = np.column_stack([local[ie[keep, 0]], local[ie[keep, 1]], ie[keep, 2], ie[keep, 3]])
        sub = TriMesh(self.nodes[node_map], tris, self.tags[element_map], sub_ie,
                      topological_boundary(tris))
        return Submesh(sub, node_map, element_map)

    def validate(self, partition, min_angle: Optional[float] = None) -> "TriMesh":
        """
        Check every structural invariant of an interface-fitted mesh.

        Raises:
            MeshFailure: Listing every violated invariant
        """
        floor = get_config().min_angle if min_angle is None else min_angle
        problems = []
        if np.any(self.areas <= 0):
            problems.append(f"{int(np.sum(self.areas <= 0))} triangles with nonpositive area")
        located = partition.locate(self.centroids)
        if np.any(located != self.tags):
            problems.append(f"{int(np.sum(located != self.tags))} triangles outside their tagged subdomain")
        tol = partition.tol_geom
        for j in range(1, partition.subdomain_count):
            edges = self.interface_edges_of(j)
            if edges.shape[0] == 0:
                problems.append(f"interface {j} has no edges")
                continue
            gap = partition.curve(j).distance(self.nodes[np.unique(edges[:, :2])])
            if np.any(gap > tol):
                problems.append(f"interface {j} nodes off the curve by up to {gap.max():.3e}")
            if np.any(np.bincount(edges[:, :2].ravel(), minlength=self.node_count)[np.unique(edges[:, :2])] != 2):
                problems.append(f"interface {j} edges do not form a closed polyline")
        if self.interface_edges.shape[0]:
            ids = self.edge_index(self.interface_edges[:, :2])
            pair = self.edge_triangles[ids]
            if np.any(pair < 0):
                problems.append("interface edge without a triangle on both sides")
            elif np.any(self.tags[pair[:, 0]] == self.tags[pair[:, 1]]):
                problems.append("interface edge between triangles of equal tag")
        topo = topological_boundary(self.triangles)
        if topo.shape[0] != self.boundary_edges.shape[0]:
            problems.append("boundary edges do not cover the outer boundary exactly once")
        if self.triangle_count and self.min_angle < floor - 1e-9:
            problems.append(f"minimum angle {self.min_angle:.2f} below floor {floor}")
        if problems:
            raise MeshFailure("invalid mesh: " + "; ".join(problems), error_code="MESH_INVALID",
                              details={"problems": problems})
        return self


def mesh_to_text(mesh: TriMesh) -> str:
    """Plain-text mesh export with 17 significant digits."""
    lines = [f"nodes {mesh.node_count} triangles {mesh.triangle_count} "
             f"interface_edges {mesh.interface_edges.shape[0]}"]
    lines.extend(f"{format_exact(x)} {format_exact(y)}" for x, y in mesh.nodes)
    lines.extend(f"{a} {b} {c} {t}" for (a, b, c), t in zip(mesh.triangles, mesh.tags))
    lines.extend(f"{i} {j} {c} {t}" for i, j, c, t in mesh.interface_edges)
    return "\n".join(lines) + "\n"


def mesh_from_text(text: str) -> TriMesh:
    """
    Parse the plain-text mesh format.

    Raises:
        SerializationError: If the header or a record is malformed
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    try:
        head = lines[0].split()
        if head[0::2] != ["nodes", "triangles", "interface_edges"]:
            raise ValueError("bad header")
        n, t, e = (int(v) for v in head[1::2])
        body = lines[1:]
        if len(body) != n + t + e:
            raise ValueError(f"expected {n + t + e} records, found {len(body)}")
        nodes = np.array([[float(v) for v in ln.split()] for ln in body[:n]]).reshape(-1, 2)
        tri = np.array([[int(v) for v in ln.split()] for ln in body[n:n + t]], dtype=np.int64).reshape(-1, 4)
        ie = np.array([[int(v) for v in ln.split()] for ln in body[n + t:]], dtype=np.int64).reshape(-1, 4)
    except (IndexError, ValueError) as err:
        raise SerializationError(f"malformed mesh text: {err}", error_code="MESH_FORMAT")
    return TriMesh(nodes, tri[:, :3], tri[:, 3], ie, topological_boundary(tri[:, :3]))


def write_mesh(mesh: TriMesh, path: Union[str, Path]) -> Path:
    return write_text(path, mesh_to_text(mesh))


def read_mesh(path: Union[str, Path]) -> TriMesh:
    return mesh_from_text(read_text(path))
