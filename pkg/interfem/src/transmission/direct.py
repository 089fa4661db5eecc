"""
Direct weak formulation

The interface terms are assembled as line integrals over the interface edges
of the fitted mesh and added to the volume load. Used as the reference the
reduction pipeline is compared against.
"""

import logging
import time
from typing import Optional

from .problem import SolveReport, TransmissionProblem
from .reduction import make_report
from ..fem.assembly import SparseSystem, assemble_interface_load, assemble_stiffness, assemble_volume_load
from ..fem.orientation import get_orientation
from ..fem.solvers import solve_dirichlet
from ..mesh.trimesh import TriMesh

logger = logging.getLogger(__name__)


def direct_system(problem: TransmissionProblem, mesh: TriMesh, order: int = 1,
                  sigma: Optional[float] = None) -> SparseSystem:
    """Stiffness matrix and load a(u, phi) = (F, grad phi) - (f, phi) + sigma sum_j <g_j, phi>."""
    sigma = get_orientation() if sigma is None else sigma
    matrix = assemble_stiffness(mesh, problem.coeff, order)
    rhs = assemble_volume_load(mesh, problem.coeff, order)
    for j in problem.interface_ids:
        g = problem.g(j)
        if g is None:
            continue
        rhs += assemble_interface_load(mesh, j, g, order, problem.n, sigma=sigma,
                                       curve=problem.partition.curve(j))
    return SparseSystem(mesh, order, problem.n, matrix, rhs)


def solve_direct(problem: TransmissionProblem, mesh: TriMesh, order: int = 1,
                 sigma: Optional[float] = None, method: Optional[str] = None) -> SolveReport:
    """
    Solve the transmission problem with the interface terms assembled directly.

    Args:
        problem: Transmission problem
        mesh: Interface-fitted mesh of the problem's partition
        order: Basis order (1 or 2)
        sigma: Interface sign override (the self-test flips it); defaults to the pinned sign
        method: Linear solver ("cg" or "direct")

    Returns:
        SolveReport without auxiliary entries

    Raises:
        UnknownInterface: If the mesh has no edges on an interface with data
        NoConvergence: If the Krylov solve fails
    """
    timings = {}
    start = time.perf_counter()
    system = direct_system(problem, mesh, order, sigma)
    timings["assembly"] = time.perf_counter() - start
    start = time.perf_counter()
    u = solve_dirichlet(system, method=method)
    timings["global_solve"] = time.perf_counter() - start
    logger.info(f"direct: {problem.name} solved with {u.solve_info.iterations} iterations")
    return make_report("direct", problem, mesh, u, timings=timings)
