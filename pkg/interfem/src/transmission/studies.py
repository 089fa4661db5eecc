"""
Refinement and gap studies

A convergence study solves one manufactured problem on a ladder of uniformly
refined meshes and records errors, flux-jump residuals, Hoelder estimates and
the energy ratio per level. The gap study solves a three-subdomain problem
for shrinking distances between two concentric interfaces.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .direct import solve_direct
from .problem import SolveReport, TransmissionProblem
from .reduction import solve_by_reduction, solve_multi
from ..analysis.convergence import fitted_order, observed_orders
from ..analysis.flux import flux_jump_residual
from ..analysis.holder import holder_seminorm
from ..analysis.norms import error_vs_exact
from ..exceptions import ValidationError
from ..fem.coefficients import CoefficientField, constant, isotropic
from ..geometry.curves import InterfaceCurve
from ..geometry.partition import DomainPartition
from ..mesh.generator import generate_fitted_mesh
from ..mesh.refine import refine
from ..mesh.trimesh import TriMesh
from ..utils.validation import validate_positive

logger = logging.getLogger(__name__)

METHODS = ("reduction", "direct", "multi")

CONVERGENCE_COLUMNS = ["level", "h", "dofs", "l2_err", "h1_err", "flux_resid", "holder_in", "holder_cross",
                       "energy_ratio"]
GAP_COLUMNS = ["delta", "h", "delta_over_h", "gap_elements", "min_angle", "max_gradient", "growth"]


def solve_with(method: str, problem: TransmissionProblem, mesh: TriMesh, order: int = 1,
               linear_solver: Optional[str] = None) -> SolveReport:
    """Dispatch to one of the solution paths by name."""
    if method == "reduction":
        return solve_by_reduction(problem, mesh, order, linear_solver)
    if method == "direct":
        return solve_direct(problem, mesh, order, method=linear_solver)
    if method == "multi":
        return solve_multi(problem, mesh, order, linear_solver)
    raise ValidationError(f"method must be one of {METHODS}, got {method!r}")


def mesh_ladder(partition: DomainPartition, h0: float, levels: int, seed: Optional[int] = None) -> List[TriMesh]:
    """Fitted mesh at h0 followed by ``levels - 1`` uniform refinements."""
    if levels < 1:
        raise ValidationError(f"levels must be at least 1, got {levels}")
    meshes = [generate_fitted_mesh(partition, h0, seed)]
    for _ in range(levels - 1):
        meshes.append(refine(meshes[-1], partition))
    return meshes


@dataclass
class ConvergenceStudy:
    rows: List[Dict[str, float]]
    orders: Dict[str, np.ndarray]
    fitted: Dict[str, float]
    reports: List[SolveReport] = field(default_factory=list, repr=False)

    def column(self, name: str) -> np.ndarray:
        return np.array([row[name] for row in self.rows], dtype=float)

    def table(self) -> List[list]:
        return [[row[c] for c in CONVERGENCE_COLUMNS] for row in self.rows]


def convergence_study(problem: TransmissionProblem, ms, levels: int = 4, h0: float = 0.1, order: int = 1,
                      method: str = "reduction", alpha: float = 0.5, rho_factor: float = 4.0,
                      meshes: Optional[Sequence[TriMesh]] = None, keep_reports: bool = False) -> ConvergenceStudy:
    """
    Solve on a refinement ladder and measure errors against a manufactured solution.

    Args:
        problem: Problem solved by ``ms``
        ms: ManufacturedSolution (exact branches per tag)
        levels: Number of mesh levels
        h0: Target size of the coarsest mesh
        order: Basis order
        method: "reduction", "direct" or "multi"
        alpha: Hoelder exponent of the gradient estimators
        rho_factor: Scale floor of the estimators in units of h
        meshes: Precomputed ladder (overrides h0 and levels)

    Returns:
        ConvergenceStudy with one row per level and observed orders of the
        L2 error, H1 error and flux residual
    """
    meshes = list(meshes) if meshes is not None else mesh_ladder(problem.partition, h0, levels)
    rows, reports = [], []
    for level, mesh in enumerate(meshes):
        report = solve_with(method, problem, mesh, order)
        error = error_vs_exact(report.field, ms)
        flux = sum(flux_jump_residual(report.field, problem, j).residual ** 2 for j in problem.interface_ids)
        holder = holder_seminorm(report.field, problem.partition, alpha, rho=rho_factor * mesh.h)
        rows.append({
            "level": level,
            "h": mesh.h,
            "dofs": report.field.ndofs * report.field.n,
            "l2_err": error.l2,
            "h1_err": error.h1,
            "flux_resid": float(np.sqrt(flux)),
            "holder_in": holder.inside,
            "holder_cross": holder.cross,
            "energy_ratio": report.energy_ratio,
        })
        if keep_reports:
            reports.append(report)
        logger.info(f"level {level}: h={mesh.h:.4g} H1 error {error.h1:.4g} L2 error {error.l2:.4g}")
    study = ConvergenceStudy(rows, {}, {}, reports)
    if len(rows) >= 2:
        h = study.column("h")
        for name in ("l2_err", "h1_err", "flux_resid"):
            study.orders[name] = observed_orders(h, study.column(name))
            study.fitted[name] = fitted_order(h, study.column(name))
    return study


def gap_problem(delta: float, inner_radius: float = 0.4, contrast: Sequence[float] = (1.0, 4.0, 1.0),
                outer_radius: float = 1.0) -> TransmissionProblem:
    """
    Three concentric subdomains with a gap ``delta`` between the two inner interfaces.

    Inclusion 1 (radius ``inner_radius``) sits inside inclusion 2 (radius
    ``inner_radius + delta``); both carry g = 1 and the isotropic coefficient
    of tag k is ``contrast[k - 1]``.
    """
    delta = validate_positive(delta, "delta")
    if inner_radius + delta >= outer_radius:
        raise ValidationError(f"gap {delta} does not fit inside the outer radius {outer_radius}")
    partition = DomainPartition(
        InterfaceCurve.circle(outer_radius),
        (InterfaceCurve.circle(inner_radius), InterfaceCurve.circle(inner_radius + delta)),
        parents=(2, 0),
    )
    coeff = CoefficientField(
        n=1,
        tensor={tag: isotropic(a) for tag, a in enumerate(contrast, start=1)},
        interface_data={1: constant([1.0]), 2: constant([1.0])},
        labels={"a": ",".join(f"{a:g}" for a in contrast), "g": "1,1"},
    )
    return TransmissionProblem(partition, coeff, name=f"gap-{delta:g}")


@dataclass
class GapStudy:
    rows: List[Dict[str, float]]
    tolerance_met: bool
    reports: List[SolveReport] = field(default_factory=list, repr=False)

    def table(self) -> List[list]:
        return [[row[c] for c in GAP_COLUMNS] for row in self.rows]


def run_gap_study(deltas: Sequence[float] = (0.2, 0.1, 0.05), h_target: Optional[float] = None, order: int = 1,
                  tolerance: float = 2.0, keep_reports: bool = False) -> GapStudy:
    """
    Per-subdomain gradient bounds of the multi-subdomain solve as the gap shrinks.

    Every gap is meshed at the same ``h_target`` (default min(delta) / 2.5) so
    that growth reflects the gap rather than the resolution. Growth beyond
    ``tolerance`` is logged with the resolution diagnostics, not raised.
    """
    deltas = [validate_positive(d, "delta") for d in deltas]
    h_target = min(deltas) / 2.5 if h_target is None else validate_positive(h_target, "h_target")
    rows, reports = [], []
    base = None
    for delta in deltas:
        problem = gap_problem(delta)
        mesh = generate_fitted_mesh(problem.partition, h_target)
        report = solve_multi(problem, mesh, order)
        bound = max(report.gradient_bounds.values())
        base = bound if base is None else base
        rows.append({
            "delta": delta,
            "h": mesh.h,
            "delta_over_h": delta / mesh.h,
            "gap_elements": int(report.mesh_stats.triangles_per_subdomain.get(2, 0)),
            "min_angle": mesh.min_angle,
            "max_gradient": bound,
            "growth": bound / base if base > 0 else 0.0,
        })
        if keep_reports:
            reports.append(report)
    met = all(row["growth"] < tolerance for row in rows)
    if not met:
        worst = max(rows, key=lambda row: row["growth"])
        logger.warning(f"gap study: gradient bound grew {worst['growth']:.3g}x at delta={worst['delta']:g} "
                       f"(delta/h = {worst['delta_over_h']:.3g}, {worst['gap_elements']} elements in the gap)")
    return GapStudy(rows, met, reports)
