"""
Inclusion-local Neumann problems

On subdomain j the auxiliary function w_j solves

    Laplace w_j = c_j,   d w_j / d n_out = -sigma * g_j on Gamma_j,
    d w_j / d n_out = 0 on the curves of nested inclusions,   int w_j = 0,

so that F - grad w_j and f + c_j reproduce the interface term of the weak
form. Integrating the equation gives c_j |Omega_j| = -sigma int g_j, which
with sigma = -1 is c_j = int g_j / |Omega_j| (c = 2 for g = 1 on the unit
disk).
"""

import logging
from typing import Optional, Union

import numpy as np

from .problem import AuxiliarySolution
from ..analysis.holder import holder_seminorm
from ..analysis.norms import norms
from ..config import get_config
from ..fem.assembly import SparseSystem, assemble_interface_load, assemble_mass_vector, assemble_stiffness
from ..fem.coefficients import CoefficientField, DataFunction, evaluate_data
from ..fem.orientation import get_orientation
from ..fem.solvers import solve_mean_zero
from ..geometry.partition import DomainPartition
from ..mesh.trimesh import TriMesh
from ..utils.logging import log_timing

logger = logging.getLogger(__name__)


def _components(g: Optional[DataFunction], partition: DomainPartition, j: int) -> int:
    if g is None:
        return 1
    probe = partition.curve(j).point(np.array([0.0]))
    return int(np.asarray(g(probe), dtype=float).reshape(1, -1).shape[1])


def _as_result(values: np.ndarray) -> Union[float, np.ndarray]:
    return float(values[0]) if values.size == 1 else values


def curve_constants(partition: DomainPartition, j: int, g: Optional[DataFunction], n: int = 1) -> np.ndarray:
    """-sigma int_{Gamma_j} g / |Omega_j| by the curve quadrature, per component."""
    if g is None:
        return np.zeros(n)
    config = get_config()
    quad = partition.curve(j).boundary_quadrature(config.line_quadrature_points, config.curve_panels)
    total = quad.weights @ evaluate_data(g, quad.points, (n,))
    return -get_orientation() * total / partition.subdomain_area(j)


def compatibility_constant(partition: DomainPartition, j: int, g: Optional[DataFunction],
                           mesh: Optional[TriMesh] = None, order: int = 1) -> Union[float, np.ndarray]:
    """
    Constant c_j making the Neumann problem on subdomain j solvable.

    Without a mesh the value is -sigma int g / |Omega_j| on the true curve and
    the analytic area. With a mesh it is the discrete counterpart (arc
    quadrature of g over the integral of the basis on the submesh), which makes
    the discrete load exactly compatible.

    Returns:
        c_j as a float for scalar data, otherwise one value per component
    """
    n = _components(g, partition, j)
    if mesh is None:
        return _as_result(curve_constants(partition, j, g, n))
    sub = mesh.submesh(j).mesh
    if g is None:
        return _as_result(np.zeros(n))
    load = assemble_interface_load(sub, j, g, order, n, sigma=1.0, curve=partition.curve(j))
    mass = assemble_mass_vector(sub, order)
    return _as_result(-get_orientation() * load.reshape(-1, n).sum(axis=0) / mass.sum())


@log_timing("inclusion Neumann solve")
def solve_inclusion_neumann(partition: DomainPartition, mesh: TriMesh, j: int, g: Optional[DataFunction],
                            order: int = 1, n: Optional[int] = None,
                            holder_alpha: Optional[float] = None) -> AuxiliarySolution:
    """
    Solve the mean-zero Neumann problem for w_j on the submesh of subdomain j.

    Args:
        partition: Domain partition
        mesh: Mesh fitted to the boundary of subdomain j
        j: Inclusion id (1 .. M-1)
        g: Interface data of curve j (None means zero)
        order: Basis order
        n: Component count (inferred from g when omitted)
        holder_alpha: When given, also record a sampled Hoelder estimate of grad w_j

    Returns:
        AuxiliarySolution with w_j, the discrete and curve-based c_j, the
        residual and the ratio ||w_j||_{H1} / ||g_j||_{L2}

    Raises:
        IncompatibleData: If the discrete load is not compatible (orientation bug)
    """
    n = _components(g, partition, j) if n is None else n
    sigma = get_orientation()
    sub = mesh.submesh(j)
    laplacian = CoefficientField.laplacian([j], n)
    matrix = assemble_stiffness(sub.mesh, laplacian, order)
    mass = assemble_mass_vector(sub.mesh, order)
    if g is None:
        load = np.zeros(matrix.shape[0])
    else:
        load = assemble_interface_load(sub.mesh, j, g, order, n, sigma=1.0, curve=partition.curve(j))
    constant = -sigma * load.reshape(-1, n).sum(axis=0) / mass.sum()
    rhs = (-sigma * load.reshape(-1, n) - mass[:, None] * constant[None, :]).ravel()
    w = solve_mean_zero(SparseSystem(sub.mesh, order, n, matrix, rhs), mass=mass)

    config = get_config()
    quad = partition.curve(j).boundary_quadrature(config.line_quadrature_points, config.curve_panels)
    g_values = evaluate_data(g, quad.points, (n,))
    g_norm = float(np.sqrt(quad.weights @ np.sum(g_values * g_values, axis=1)))
    w_norm = norms(w).h1_total
    ratio = w_norm / g_norm if g_norm > 0 else 0.0
    holder = None
    if holder_alpha is not None and g is not None:
        holder = holder_seminorm(w, partition, holder_alpha).per_subdomain.get(j, 0.0)
    logger.info(f"inclusion {j}: c = {constant.tolist()}, |w|_H1 / |g|_L2 = {ratio:.4g}, "
                f"{w.solve_info.iterations} iterations")
    return AuxiliarySolution(
        inclusion=j,
        field=w,
        constant=constant,
        curve_constant=curve_constants(partition, j, g, n),
        node_map=sub.node_map,
        element_map=sub.element_map,
        residual=w.solve_info.residual,
        energy_ratio=ratio,
        g_norm=g_norm,
        holder=holder,
    )
