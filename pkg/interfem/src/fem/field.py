"""
Discrete finite element fields

A DiscreteField holds one value per scalar dof and component, shape
(ndofs, n), on a mesh with a P1 or P2 basis.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Dict, Optional

import numpy as np

from .basis import DofMap, basis_gradients, basis_values, element_geometry, reference_coordinates
from ..exceptions import ValidationError
from ..mesh.trimesh import TriMesh
from ..utils.validation import validate_order

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolveInfo:
    """Diagnostics of one linear solve."""

    method: str
    iterations: int
    residual: float
    converged: bool = True
    symmetric: bool = True
    multiplier: Optional[np.ndarray] = None
    elapsed: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method,
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "symmetric": self.symmetric,
        }


def locate_elements(mesh: TriMesh, points: np.ndarray, candidates: int = 12) -> np.ndarray:
    """
    Element containing each point (nearest element for points outside the mesh).

    Uses a KD-tree on element centroids and barycentric tests on the nearest candidates.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    k = min(candidates, mesh.triangle_count)
    tree = mesh.centroid_tree
    _, nearest = tree.query(points, k=k)
    nearest = nearest.reshape(points.shape[0], k)
    result = nearest[:, 0].copy()
    best = np.full(points.shape[0], -np.inf)
    for c in range(k):
        elems = nearest[:, c]
        _, lam = reference_coordinates(mesh, elems, points)
        score = lam.min(axis=1)
        better = score > best + 1e-14
        result[better] = elems[better]
        best[better] = score[better]
    return result


@dataclass(frozen=True, eq=False)
class DiscreteField:
    """Finite element function with values of shape (ndofs, n)."""

    mesh: TriMesh
    order: int
    values: np.ndarray
    solve_info: Optional[SolveInfo] = None

    def __post_init__(self):
        validate_order(self.order)
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.shape[0] != self.dofmap.ndofs:
            raise ValidationError(f"expected {self.dofmap.ndofs} dofs, got {values.shape[0]}")
        if not np.all(np.isfinite(values)):
            raise ValidationError("field values must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @cached_property
    def dofmap(self) -> DofMap:
        return DofMap(self.mesh, self.order)

    @property
    def n(self) -> int:
        return int(self.values.shape[1])

    @property
    def ndofs(self) -> int:
        return self.dofmap.ndofs

    @classmethod
    def zeros(cls, mesh: TriMesh, order: int = 1, n: int = 1) -> "DiscreteField":
        return cls(mesh, order, np.zeros((DofMap(mesh, order).ndofs, n)))

    @classmethod
    def interpolate(cls, mesh: TriMesh, func: Callable[[np.ndarray], np.ndarray], order: int = 1,
                    n: int = 1) -> "DiscreteField":
        """Nodal interpolant of ``func`` evaluated at the dof coordinates."""
        coords = DofMap(mesh, order).coordinates
        values = np.asarray(func(coords), dtype=float).reshape(coords.shape[0], n)
        return cls(mesh, order, values)

    def with_values(self, values: np.ndarray) -> "DiscreteField":
        return DiscreteField(self.mesh, self.order, values)

    def __add__(self, other: "DiscreteField") -> "DiscreteField":
        if other.mesh is not self.mesh or other.order != self.order:
            raise ValidationError("fields live on different spaces")
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "DiscreteField") -> "DiscreteField":
        if other.mesh is not self.mesh or other.order != self.order:
            raise ValidationError("fields live on different spaces")
        return self.with_values(self.values - other.values)

    def __mul__(self, factor: float) -> "DiscreteField":
        return self.with_values(float(factor) * self.values)

    __rmul__ = __mul__

    # -- evaluation on elements ------------------------------------------------

    def evaluate_reference(self, ref: np.ndarray, elements=None) -> np.ndarray:
        """Values at reference points of the given elements, shape (T, Q, n)."""
        dofs = self.dofmap.cell_dofs if elements is None else self.dofmap.cell_dofs[elements]
        phi = basis_values(self.order, ref)
        return np.einsum("qb,tbn->tqn", phi, self.values[dofs])

    def gradients_reference(self, ref: np.ndarray, elements=None) -> np.ndarray:
        """Gradients at reference points of the given elements, shape (T, Q, n, 2)."""
        dofs = self.dofmap.cell_dofs if elements is None else self.dofmap.cell_dofs[elements]
        geo = element_geometry(self.mesh, elements)
        grads = geo.physical_gradients(basis_gradients(self.order, ref))
        return np.einsum("tqbd,tbn->tqnd", grads, self.values[dofs])

    def centroid_gradients(self) -> np.ndarray:
        """Element gradients at centroids, shape (T, n, 2)."""
        return self.gradients_reference(np.array([[1.0 / 3.0, 1.0 / 3.0]]))[:, 0]

    # -- evaluation at arbitrary points ----------------------------------------

    def _pointwise(self, points: np.ndarray, elements: Optional[np.ndarray]):
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        if elements is None:
            elements = locate_elements(self.mesh, points)
        ref, _ = reference_coordinates(self.mesh, elements, points)
        return points, np.asarray(elements), ref

    def values_at(self, points, elements: Optional[np.ndarray] = None) -> np.ndarray:
        """Values at physical points, shape (P, n)."""
        points, elements, ref = self._pointwise(points, elements)
        dofs = self.dofmap.cell_dofs[elements]
        phi = basis_values(self.order, ref)
        return np.einsum("pb,pbn->pn", phi, self.values[dofs])

    def gradients_at(self, points, elements: Optional[np.ndarray] = None) -> np.ndarray:
        """Gradients at physical points, shape (P, n, 2)."""
        points, elements, ref = self._pointwise(points, elements)
        dofs = self.dofmap.cell_dofs[elements]
        geo = element_geometry(self.mesh, elements)
        ref_grads = basis_gradients(self.order, ref)  # (P, nb, 2) at each point's own reference coords
        grads = np.einsum("pij,pbj->pbi", geo.inverse_transpose, ref_grads)
        return np.einsum("pbd,pbn->pnd", grads, self.values[dofs])

    def nodal_values(self) -> np.ndarray:
        """Values at mesh vertices, shape (nodes, n)."""
        return self.values[: self.mesh.node_count]
