"""
Reduction pipeline

The interface conditions are moved into the volume data: one Neumann solve
per inclusion gives w_j and c_j, the reduced data F~ = F - sum_j 1_j grad w_j
and f~ = f + sum_j 1_j c_j are formed at the quadrature points, and a single
Dirichlet solve of the jump-free problem follows.
"""

import logging
import time
from functools import partial
from typing import Dict, Mapping, Optional

import numpy as np

from .neumann import solve_inclusion_neumann
from .problem import AuxiliarySolution, ReducedData, SolveReport, TransmissionProblem, problem_hash
from ..analysis.norms import norms
from ..config import get_config
from ..exceptions import MissingAuxiliary, ValidationError
from ..fem.assembly import SparseSystem, assemble_stiffness, quadrature_points
from ..fem.field import DiscreteField
from ..fem.orientation import get_orientation
from ..fem.solvers import solve_dirichlet
from ..mesh.statistics import mesh_statistics
from ..mesh.trimesh import TriMesh
from ..utils.async_utils import run_blocking_concurrent
from ..utils.validation import validate_order

logger = logging.getLogger(__name__)


def gradient_bounds(field: DiscreteField) -> Dict[int, float]:
    """Largest centroid gradient norm per subdomain tag."""
    grads = field.centroid_gradients().reshape(field.mesh.triangle_count, -1)
    size = np.linalg.norm(grads, axis=1)
    return {int(t): float(size[field.mesh.tags == t].max()) for t in np.unique(field.mesh.tags)}


def make_report(method: str, problem: TransmissionProblem, mesh: TriMesh, u: DiscreteField,
                auxiliary: Optional[Dict[int, AuxiliarySolution]] = None,
                timings: Optional[Dict[str, float]] = None) -> SolveReport:
    """Collect norms, the energy ratio ||u||_{H1} / data norm and mesh statistics."""
    field_norms = norms(u)
    data_norm = problem.data_norm(mesh)
    ratio = field_norms.h1_total / data_norm if data_norm > 0 else 0.0
    return SolveReport(
        method=method,
        problem_name=problem.name,
        problem_hash=problem_hash(problem),
        field=u,
        sigma=get_orientation(),
        solve_info=u.solve_info,
        l2=field_norms.l2,
        h1=field_norms.h1,
        energy_ratio=ratio,
        data_norm=data_norm,
        gradient_bounds=gradient_bounds(u),
        mesh_stats=mesh_statistics(mesh),
        auxiliary=dict(auxiliary or {}),
        timings=dict(timings or {}),
    )


def build_reduced_data(problem: TransmissionProblem, mesh: TriMesh,
                       auxiliary: Mapping[int, AuxiliarySolution], order: int = 1,
                       quad_degree: Optional[int] = None) -> ReducedData:
    """
    Reduced flux and source at the volume quadrature points.

    grad w_j enters element by element (piecewise constant for P1) without
    smoothing.

    Raises:
        MissingAuxiliary: If an inclusion has no auxiliary solution
    """
    order = validate_order(order)
    for j in problem.interface_ids:
        if j not in auxiliary:
            raise MissingAuxiliary(f"inclusion {j} has no auxiliary Neumann solution",
                                   error_code="MISSING_AUXILIARY")
    degree = get_config().quadrature_degree(order) if quad_degree is None else quad_degree
    coeff = problem.coeff
    n = coeff.n
    elements, flux, source = {}, {}, {}
    for tag in sorted(int(t) for t in np.unique(mesh.tags)):
        els = np.flatnonzero(mesh.tags == tag)
        ref, _, xq = quadrature_points(mesh, els, order, degree)
        shape = xq.shape[:2]
        pts = xq.reshape(-1, 2)
        F = np.array(coeff.flux_at(tag, pts), dtype=float).reshape(shape + (n, 2))
        f = np.array(coeff.source_at(tag, pts), dtype=float).reshape(shape + (n,))
        aux = auxiliary.get(tag)
        if aux is not None:
            if aux.field.order != order:
                raise ValidationError(f"auxiliary solution {tag} has order {aux.field.order}, expected {order}")
            F = F - aux.field.gradients_reference(ref, aux.local_elements(els))
            f = f + aux.constant[None, None, :]
        elements[tag], flux[tag], source[tag] = els, F, f
    return ReducedData(mesh, order, n, degree, elements, flux, source, dict(auxiliary))


def solve_auxiliaries(problem: TransmissionProblem, mesh: TriMesh, order: int = 1,
                      holder_alpha: Optional[float] = None) -> Dict[int, AuxiliarySolution]:
    """Neumann solves of all inclusions, run concurrently (they are independent)."""
    calls = [partial(solve_inclusion_neumann, problem.partition, mesh, j, problem.g(j), order, problem.n,
                     holder_alpha) for j in problem.interface_ids]
    results = run_blocking_concurrent(calls, max_concurrent=get_config().max_workers)
    return {aux.inclusion: aux for aux in results}


def solve_by_reduction(problem: TransmissionProblem, mesh: TriMesh, order: int = 1,
                       method: Optional[str] = None, holder_alpha: Optional[float] = None,
                       label: str = "reduction") -> SolveReport:
    """
    Solve through auxiliary Neumann problems and one reduced Dirichlet solve.

    Returns:
        SolveReport with u_h, c_j, residuals, norms and the energy ratio

    Raises:
        IncompatibleData, NoConvergence: Propagated from the sub-solves
    """
    timings = {}
    start = time.perf_counter()
    auxiliary = solve_auxiliaries(problem, mesh, order, holder_alpha)
    timings["auxiliary"] = time.perf_counter() - start

    start = time.perf_counter()
    reduced = build_reduced_data(problem, mesh, auxiliary, order)
    matrix = assemble_stiffness(mesh, problem.coeff, order)
    system = SparseSystem(mesh, order, problem.n, matrix, reduced.load_vector())
    timings["assembly"] = time.perf_counter() - start

    start = time.perf_counter()
    u = solve_dirichlet(system, method=method)
    timings["global_solve"] = time.perf_counter() - start
    logger.info(f"{label}: {problem.name} solved with {u.solve_info.iterations} iterations")
    return make_report(label, problem, mesh, u, auxiliary, timings)


def solve_multi(problem: TransmissionProblem, mesh: TriMesh, order: int = 1, method: Optional[str] = None,
                holder_alpha: Optional[float] = None) -> SolveReport:
    """
    Reduction pipeline for M >= 3 subdomains.

    One auxiliary solve per inner subdomain, then a single reduced solve; the
    report carries the per-subdomain gradient bounds used by the gap study.

    Raises:
        ValidationError: If the partition has fewer than three subdomains
    """
    if problem.partition.subdomain_count < 3:
        raise ValidationError(f"multi-subdomain solve needs M >= 3, got {problem.partition.subdomain_count}")
    return solve_by_reduction(problem, mesh, order, method, holder_alpha, label="multi")
