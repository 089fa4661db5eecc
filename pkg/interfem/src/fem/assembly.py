"""
Finite element assembly

Vector dofs are interleaved: scalar dof ``d`` and component ``i`` map to the
global index ``d * n + i``. Loads follow the weak form

    a(u, phi) = (F, grad phi) - (f, phi) + sigma * <g, phi>_Gamma

so the volume assembler returns ``(F, grad phi) - (f, phi)`` and the
interface assembler returns ``sigma * <g, phi>``.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Tuple, Union

import numpy as np
from scipy import sparse

from .basis import DofMap, basis_gradients, basis_values, edge_trace_values, element_geometry
from .coefficients import CoefficientField, DataFunction, evaluate_data
from .orientation import get_orientation
from .quadrature import line_rule, triangle_rule
from ..config import get_config
from ..exceptions import UnknownInterface
from ..geometry.curves import TWO_PI, InterfaceCurve
from ..mesh.trimesh import TriMesh
from ..utils.logging import log_timing
from ..utils.serialization import format_exact, write_text
from ..utils.validation import validate_order

logger = logging.getLogger(__name__)


def _component_index(dofs: np.ndarray, n: int) -> np.ndarray:
    """Global indices of shape dofs.shape + (n,)."""
    return dofs[..., None] * n + np.arange(n)


def _degree(order: int, quad_degree: Optional[int]) -> int:
    return get_config().quadrature_degree(order) if quad_degree is None else int(quad_degree)


def _elements_by_tag(mesh: TriMesh, tags: Optional[Iterable[int]]):
    present = sorted(int(t) for t in np.unique(mesh.tags))
    wanted = present if tags is None else [int(t) for t in tags]
    for tag in wanted:
        elements = np.flatnonzero(mesh.tags == tag)
        if elements.size:
            yield tag, elements


@dataclass(frozen=True, eq=False)
class SparseSystem:
    """Compressed matrix, right-hand side and the space they live on."""

    mesh: TriMesh
    order: int
    n: int
    matrix: sparse.csr_matrix
    rhs: np.ndarray

    @property
    def size(self) -> int:
        return int(self.matrix.shape[0])

    def symmetry_defect(self) -> float:
        """max |K - K^T| relative to max |K|."""
        scale = abs(self.matrix).max() if self.matrix.nnz else 0.0
        if scale == 0:
            return 0.0
        diff = self.matrix - self.matrix.T
        return float(abs(diff).max() / scale) if diff.nnz else 0.0

    @property
    def is_symmetric(self) -> bool:
        return self.symmetry_defect() <= 1e-12

    def with_rhs(self, rhs: np.ndarray) -> "SparseSystem":
        return SparseSystem(self.mesh, self.order, self.n, self.matrix, np.asarray(rhs, dtype=float))

    def to_triplets(self) -> str:
        """Matrix as ``row col value`` lines with 17 significant digits."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return "".join(f"{coo.row[k]} {coo.col[k]} {format_exact(coo.data[k])}\n" for k in order)

    def write_triplets(self, path: Union[str, Path]) -> Path:
        return write_text(path, self.to_triplets())


@log_timing("stiffness assembly")
def assemble_stiffness(mesh: TriMesh, coeff: CoefficientField, order: int = 1,
                       quad_degree: Optional[int] = None, tags: Optional[Iterable[int]] = None) -> sparse.csr_matrix:
    """
    Assemble the bilinear form sum_e int_e A^{kl}_{ij} D_l u^j D_k phi^i.

    Args:
        mesh: Interface-fitted mesh
        coeff: Piecewise coefficients; every assembled tag needs a tensor
        order: Basis order (1 or 2)
        quad_degree: Volume quadrature degree (default from SolverConfig)
        tags: Restrict assembly to these subdomain tags

    Returns:
        CSR matrix of size (ndofs * n) squared

    Raises:
        SingularElement: If an element has a nonpositive Jacobian
    """
    order = validate_order(order)
    dofmap = DofMap(mesh, order)
    n = coeff.n
    ref, weights = triangle_rule(_degree(order, quad_degree))
    ref_grads = basis_gradients(order, ref)
    size = dofmap.ndofs * n
    rows, cols, vals = [], [], []
    for tag, elements in _elements_by_tag(mesh, tags):
        geo = element_geometry(mesh, elements)
        xq = geo.to_physical(ref)
        A = coeff.tensor_at(tag, xq.reshape(-1, 2)).reshape(elements.size, ref.shape[0], n, 2, n, 2)
        grads = geo.physical_gradients(ref_grads)
        local = np.einsum("q,e,eqikjl,eqak,eqbl->eaibj", weights, geo.det, A, grads, grads, optimize=True)
        index = _component_index(dofmap.cell_dofs[elements], n)
        nb = index.shape[1]
        r = np.broadcast_to(index[:, :, :, None, None], (elements.size, nb, n, nb, n))
        c = np.broadcast_to(index[:, None, None, :, :], (elements.size, nb, n, nb, n))
        rows.append(r.ravel())
        cols.append(c.ravel())
        vals.append(local.ravel())
        logger.debug(f"stiffness: tag {tag}, {elements.size} elements, {ref.shape[0]} quadrature points")
    if not vals:
        return sparse.csr_matrix((size, size))
    matrix = sparse.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                               shape=(size, size)).tocsr()
    matrix.sum_duplicates()
    return matrix


def quadrature_points(mesh: TriMesh, elements: np.ndarray, order: int,
                      quad_degree: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reference points, weights and physical points (T, Q, 2) of the volume rule on ``elements``."""
    ref, weights = triangle_rule(_degree(order, quad_degree))
    geo = element_geometry(mesh, elements)
    return ref, weights, geo.to_physical(ref)


def assemble_load_from_values(mesh: TriMesh, order: int, elements: np.ndarray, flux: np.ndarray,
                              source: np.ndarray, quad_degree: Optional[int] = None,
                              out: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Assemble (F, grad phi) - (f, phi) from values at the volume quadrature points.

    Args:
        flux: (T, Q, n, 2) flux values on ``elements``
        source: (T, Q, n) source values on ``elements``
        out: Vector to accumulate into

    Returns:
        Load vector of length ndofs * n
    """
    dofmap = DofMap(mesh, order)
    ref, weights = triangle_rule(_degree(order, quad_degree))
    n = flux.shape[2]
    b = np.zeros(dofmap.ndofs * n) if out is None else out
    if elements.size == 0:
        return b
    geo = element_geometry(mesh, elements)
    grads = geo.physical_gradients(basis_gradients(order, ref))
    phi = basis_values(order, ref)
    wd = weights[None, :] * geo.det[:, None]
    local = (np.einsum("eq,eqik,eqak->eai", wd, flux, grads)
             - np.einsum("eq,eqi,qa->eai", wd, source, phi))
    index = _component_index(dofmap.cell_dofs[elements], n)
    b += np.bincount(index.ravel(), weights=local.ravel(), minlength=b.shape[0])
    return b


def assemble_volume_load(mesh: TriMesh, coeff: CoefficientField, order: int = 1,
                         quad_degree: Optional[int] = None) -> np.ndarray:
    """Load vector (F, grad phi) - (f, phi) of the per-subdomain flux and source."""
    order = validate_order(order)
    ref, _ = triangle_rule(_degree(order, quad_degree))
    b = np.zeros(DofMap(mesh, order).ndofs * coeff.n)
    for tag, elements in _elements_by_tag(mesh, None):
        if tag not in coeff.flux and tag not in coeff.source:
            continue
        geo = element_geometry(mesh, elements)
        pts = geo.to_physical(ref).reshape(-1, 2)
        shape = (elements.size, ref.shape[0])
        flux = coeff.flux_at(tag, pts).reshape(shape + (coeff.n, 2))
        source = coeff.source_at(tag, pts).reshape(shape + (coeff.n,))
        assemble_load_from_values(mesh, order, elements, flux, source, quad_degree, out=b)
    return b


def interface_quadrature(mesh: TriMesh, curve_id: int, curve: Optional[InterfaceCurve] = None,
                         npoints: Optional[int] = None):
    """
    Quadrature on the interface edges of one curve.

    With ``curve`` the rule integrates along the true arc between the two edge
    nodes (Gauss points in the curve parameter weighted by the speed);
    otherwise along the straight chord.

    Returns:
        (edges (E, 4), t (Q,), points (E, Q, 2), weights (E, Q))

    Raises:
        UnknownInterface: If the mesh has no edges on the curve
    """
    edges = mesh.interface_edges_of(curve_id)
    if edges.shape[0] == 0:
        raise UnknownInterface(f"mesh has no interface {curve_id}", error_code="UNKNOWN_INTERFACE")
    t, wt = line_rule(get_config().line_quadrature_points if npoints is None else npoints)
    a = mesh.nodes[edges[:, 0]]
    b = mesh.nodes[edges[:, 1]]
    if curve is None:
        points = a[:, None, :] + t[None, :, None] * (b - a)[:, None, :]
        weights = np.linalg.norm(b - a, axis=1)[:, None] * wt[None, :]
        return edges, t, points, weights
    start = curve.parameter_of(a)
    span = np.mod(curve.parameter_of(b) - start, TWO_PI)
    theta = start[:, None] + span[:, None] * t[None, :]
    points = curve.point(theta.ravel()).reshape(theta.shape + (2,))
    weights = span[:, None] * wt[None, :] * curve.speed(theta.ravel()).reshape(theta.shape)
    return edges, t, points, weights


def assemble_interface_load(mesh: TriMesh, curve_id: int, g: Optional[DataFunction], order: int = 1,
                            n: int = 1, sigma: Optional[float] = None,
                            curve: Optional[InterfaceCurve] = None) -> np.ndarray:
    """
    Assemble sigma * int_Gamma g phi over the interface edges of one curve.

    Args:
        g: Data callable on (P, 2) points returning (P, n); None means zero
        sigma: Sign or scale of the term; defaults to the pinned orientation
        curve: True curve for arc integration (chord integration if None)

    Returns:
        Load vector of length ndofs * n, supported on interface dofs

    Raises:
        UnknownInterface: If the mesh has no edges on the curve
    """
    order = validate_order(order)
    sigma = get_orientation() if sigma is None else sigma
    dofmap = DofMap(mesh, order)
    edges, t, points, weights = interface_quadrature(mesh, curve_id, curve)
    b = np.zeros(dofmap.ndofs * n)
    if g is None:
        return b
    values = evaluate_data(g, points.reshape(-1, 2), (n,)).reshape(points.shape[:2] + (n,))
    trace = edge_trace_values(order, t)
    local = sigma * np.einsum("eq,qa,eqi->eai", weights, trace, values)
    index = _component_index(dofmap.edge_dofs(edges[:, :2]), n)
    b += np.bincount(index.ravel(), weights=local.ravel(), minlength=b.shape[0])
    return b


def assemble_mass_vector(mesh: TriMesh, order: int = 1, quad_degree: Optional[int] = None) -> np.ndarray:
    """Integrals of the scalar basis functions, length ndofs."""
    order = validate_order(order)
    dofmap = DofMap(mesh, order)
    ref, weights = triangle_rule(_degree(order, quad_degree))
    geo = element_geometry(mesh)
    local = geo.det[:, None] * (weights @ basis_values(order, ref))[None, :]
    return np.bincount(dofmap.cell_dofs.ravel(), weights=local.ravel(), minlength=dofmap.ndofs)
