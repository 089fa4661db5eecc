"""
Lagrange bases and degree-of-freedom maps

P1 has one dof per vertex. P2 adds one dof per edge; local dof ``3 + k``
sits on local edge ``k`` (opposite vertex ``k``) and global edge dofs are
numbered after all vertex dofs.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np

from ..exceptions import SingularElement
from ..mesh.trimesh import TriMesh, LOCAL_EDGES
from ..utils.validation import validate_order


def _barycentric(ref: np.ndarray) -> np.ndarray:
    ref = np.asarray(ref, dtype=float).reshape(-1, 2)
    return np.column_stack([1.0 - ref[:, 0] - ref[:, 1], ref[:, 0], ref[:, 1]])


_BARY_GRAD = np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])


def basis_values(order: int, ref) -> np.ndarray:
    """Basis values at reference points, shape (Q, nb)."""
    lam = _barycentric(ref)
    if order == 1:
        return lam
    vertex = lam * (2.0 * lam - 1.0)
    edge = 4.0 * lam[:, LOCAL_EDGES[:, 0]] * lam[:, LOCAL_EDGES[:, 1]]
    return np.hstack([vertex, edge])


def basis_gradients(order: int, ref) -> np.ndarray:
    """Reference gradients at reference points, shape (Q, nb, 2)."""
    lam = _barycentric(ref)
    q = lam.shape[0]
    if order == 1:
        return np.broadcast_to(_BARY_GRAD, (q, 3, 2)).copy()
    vertex = (4.0 * lam - 1.0)[:, :, None] * _BARY_GRAD[None, :, :]
    a, b = LOCAL_EDGES[:, 0], LOCAL_EDGES[:, 1]
    edge = 4.0 * (lam[:, a, None] * _BARY_GRAD[None, b, :] + lam[:, b, None] * _BARY_GRAD[None, a, :])
    return np.concatenate([vertex, edge], axis=1)


def edge_trace_values(order: int, t) -> np.ndarray:
    """Basis restricted to an edge parametrised by t in [0, 1]: (start, end[, middle])."""
    t = np.asarray(t, dtype=float)
    if order == 1:
        return np.column_stack([1.0 - t, t])
    return np.column_stack([(1.0 - t) * (1.0 - 2.0 * t), t * (2.0 * t - 1.0), 4.0 * t * (1.0 - t)])


@dataclass(frozen=True)
class ElementGeometry:
    """Affine maps x = x0 + J @ ref for every triangle."""

    origin: np.ndarray
    jacobian: np.ndarray
    det: np.ndarray
    inverse_transpose: np.ndarray

    def to_physical(self, ref: np.ndarray) -> np.ndarray:
        """Physical coordinates of reference points, shape (T, Q, 2)."""
        return self.origin[:, None, :] + np.einsum("tij,qj->tqi", self.jacobian, ref)

    def physical_gradients(self, ref_gradients: np.ndarray) -> np.ndarray:
        """Map reference gradients (Q, nb, 2) to physical ones (T, Q, nb, 2)."""
        return np.einsum("tij,qbj->tqbi", self.inverse_transpose, ref_gradients)


def element_geometry(mesh: TriMesh, elements=None) -> ElementGeometry:
    """
    Affine element maps.

    Raises:
        SingularElement: If an element has a nonpositive Jacobian
    """
    tris = mesh.triangles if elements is None else mesh.triangles[elements]
    p = mesh.nodes[tris]
    x0 = p[:, 0]
    jac = np.stack([p[:, 1] - x0, p[:, 2] - x0], axis=-1)
    det = jac[:, 0, 0] * jac[:, 1, 1] - jac[:, 0, 1] * jac[:, 1, 0]
    if np.any(det <= 0):
        bad = int(np.flatnonzero(det <= 0)[0])
        raise SingularElement(f"element {bad} has nonpositive Jacobian {det[bad]:.3e}",
                              error_code="SINGULAR_ELEMENT")
    inv_t = np.empty_like(jac)
    inv_t[:, 0, 0] = jac[:, 1, 1] / det
    inv_t[:, 0, 1] = -jac[:, 1, 0] / det
    inv_t[:, 1, 0] = -jac[:, 0, 1] / det
    inv_t[:, 1, 1] = jac[:, 0, 0] / det
    return ElementGeometry(x0, jac, det, inv_t)


class DofMap:
    """Scalar degrees of freedom of a P1 or P2 space on a mesh."""

    def __init__(self, mesh: TriMesh, order: int):
        self.mesh = mesh
        self.order = validate_order(order)

    @property
    def local_count(self) -> int:
        return 3 if self.order == 1 else 6

    @property
    def ndofs(self) -> int:
        if self.order == 1:
            return self.mesh.node_count
        return self.mesh.node_count + int(self.mesh.edges.shape[0])

    @cached_property
    def cell_dofs(self) -> np.ndarray:
        if self.order == 1:
            return self.mesh.triangles
        return np.hstack([self.mesh.triangles, self.mesh.element_edges + self.mesh.node_count])

    @cached_property
    def coordinates(self) -> np.ndarray:
        if self.order == 1:
            return self.mesh.nodes
        e = self.mesh.edges
        mid = 0.5 * (self.mesh.nodes[e[:, 0]] + self.mesh.nodes[e[:, 1]])
        return np.vstack([self.mesh.nodes, mid])

    def edge_dofs(self, pairs: np.ndarray) -> np.ndarray:
        """Dofs on edges given as node pairs: (start, end[, middle]) per edge."""
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        if self.order == 1:
            return pairs
        mid = self.mesh.edge_index(pairs) + self.mesh.node_count
        return np.column_stack([pairs, mid])

    @cached_property
    def boundary_dofs(self) -> np.ndarray:
        return np.unique(self.edge_dofs(self.mesh.boundary_edges))


def reference_coordinates(mesh: TriMesh, elements: np.ndarray, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Reference coordinates of points in given elements and their barycentric coordinates."""
    p = mesh.nodes[mesh.triangles[elements]]
    x0 = p[:, 0]
    jac = np.stack([p[:, 1] - x0, p[:, 2] - x0], axis=-1)
    ref = np.linalg.solve(jac, (points - x0)[..., None])[..., 0]
    return ref, _barycentric(ref)
