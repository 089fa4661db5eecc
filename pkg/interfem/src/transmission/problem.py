"""
Transmission problem data and solve reports
"""

import hashlib
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..config import get_config
from ..exceptions import UnknownInterface, ValidationError
from ..fem.assembly import assemble_load_from_values
from ..fem.basis import DofMap, element_geometry
from ..fem.coefficients import CoefficientField, EllipticityReport, verify_ellipticity
from ..fem.field import DiscreteField, SolveInfo
from ..fem.quadrature import triangle_rule
from ..geometry.partition import DomainPartition
from ..mesh.statistics import MeshStatistics
from ..mesh.trimesh import TriMesh
from ..utils.serialization import csv_text, format_float, key_value_text

logger = logging.getLogger(__name__)


@dataclass
class TransmissionProblem:
    """
    Divergence-form problem with prescribed conormal flux jumps and homogeneous Dirichlet data.

    Interface ``j`` carries g_j = coeff.interface_data[j]; a missing entry means g_j = 0.
    """

    partition: DomainPartition
    coeff: CoefficientField
    kappa: Optional[float] = None
    name: str = "problem"
    ellipticity: Optional[EllipticityReport] = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.coeff.n

    @property
    def interface_ids(self) -> List[int]:
        return list(range(1, self.partition.subdomain_count))

    def g(self, j: int):
        if j not in self.interface_ids:
            raise UnknownInterface(f"no interface {j} (problem has {len(self.interface_ids)})",
                                   error_code="UNKNOWN_INTERFACE")
        return self.coeff.interface_data.get(j)

    def validate(self) -> "TransmissionProblem":
        """
        Check the partition, the coefficient keys and (when kappa is set) ellipticity.

        Raises:
            ValidationError: If a subdomain lacks a tensor or ellipticity fails
            UnknownInterface: If interface data refer to a missing interface
        """
        self.partition.validate()
        missing = [t for t in self.partition.tags if t not in self.coeff.tensor]
        if missing:
            raise ValidationError(f"no tensor for subdomains {missing}", error_code="MISSING_TENSOR")
        for key in list(self.coeff.flux) + list(self.coeff.source):
            if key not in self.partition.tags:
                raise ValidationError(f"data given for unknown subdomain {key}")
        for j in self.coeff.interface_data:
            if j not in self.interface_ids:
                raise UnknownInterface(f"interface data given for unknown interface {j}",
                                       error_code="UNKNOWN_INTERFACE")
        if self.kappa is not None:
            report = verify_ellipticity(self.coeff, self.kappa, self.partition, seed=get_config().seed)
            self.ellipticity = report
            if not report.passed:
                raise ValidationError(
                    f"coefficients are not elliptic with kappa={self.kappa}: worst ratio {report.worst_ratio:.4g}, "
                    f"bound {report.worst_bound:.4g}", error_code="NOT_ELLIPTIC")
        return self

    def scaled(self, factor: float) -> "TransmissionProblem":
        """Same tensor with F, f and every g multiplied by ``factor``."""
        return TransmissionProblem(self.partition, self.coeff.scaled(factor), self.kappa, f"{self.name}*{factor:g}")

    def data_norm(self, mesh: TriMesh) -> float:
        """||F||_{L2} + sum_j ||g_j||_{L2(Gamma_j)} + ||f||_{L2}."""
        config = get_config()
        ref, weights = triangle_rule(config.volume_quadrature_p2)
        flux_sq, source_sq = 0.0, 0.0
        for tag in np.unique(mesh.tags):
            tag = int(tag)
            if tag not in self.coeff.flux and tag not in self.coeff.source:
                continue
            elements = np.flatnonzero(mesh.tags == tag)
            geo = element_geometry(mesh, elements)
            pts = geo.to_physical(ref).reshape(-1, 2)
            wd = (weights[None, :] * geo.det[:, None]).ravel()
            F = self.coeff.flux_at(tag, pts).reshape(pts.shape[0], -1)
            f = self.coeff.source_at(tag, pts)
            flux_sq += float(wd @ np.sum(F * F, axis=1))
            source_sq += float(wd @ np.sum(f * f, axis=1))
        return float(np.sqrt(flux_sq) + np.sqrt(source_sq) + sum(self.interface_norm(j) for j in self.interface_ids))

    def interface_norm(self, j: int) -> float:
        """||g_j||_{L2(Gamma_j)} by the curve quadrature."""
        g = self.g(j)
        if g is None:
            return 0.0
        config = get_config()
        quad = self.partition.curve(j).boundary_quadrature(config.line_quadrature_points, config.curve_panels)
        values = self.coeff.interface_at(j, quad.points)
        return float(np.sqrt(quad.weights @ np.sum(values * values, axis=1)))


def problem_hash(problem: TransmissionProblem) -> str:
    """Stable digest of the partition and the coefficient labels."""
    text = "|".join([repr(problem.partition), str(problem.n),
                     ";".join(f"{k}={v}" for k, v in sorted(problem.coeff.labels.items())),
                     str(sorted(problem.coeff.tensor)), str(sorted(problem.coeff.flux)),
                     str(sorted(problem.coeff.source)), str(sorted(problem.coeff.interface_data))])
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class AuxiliarySolution:
    """Mean-zero Neumann solution w_j on subdomain j and its compatibility constants."""

    inclusion: int
    field: DiscreteField
    constant: np.ndarray
    curve_constant: np.ndarray
    node_map: np.ndarray
    element_map: np.ndarray
    residual: float
    energy_ratio: float
    g_norm: float
    holder: Optional[float] = None

    def local_elements(self, global_elements: np.ndarray) -> np.ndarray:
        """Positions in the submesh of global element ids belonging to subdomain j."""
        position = np.searchsorted(self.element_map, global_elements)
        position = np.clip(position, 0, self.element_map.size - 1)
        if np.any(self.element_map[position] != global_elements):
            raise ValidationError(f"elements outside subdomain {self.inclusion}")
        return position


@dataclass(frozen=True, eq=False)
class ReducedData:
    """
    Reduced flux and source at the volume quadrature points, per subdomain tag.

    On subdomain j < M: F~ = F - grad w_j and f~ = f + c_j; elsewhere F~ = F and f~ = f.
    """

    mesh: TriMesh
    order: int
    n: int
    quad_degree: int
    elements: Dict[int, np.ndarray]
    flux: Dict[int, np.ndarray]
    source: Dict[int, np.ndarray]
    auxiliary: Dict[int, AuxiliarySolution]

    @property
    def constants(self) -> Dict[int, np.ndarray]:
        return {j: aux.constant for j, aux in sorted(self.auxiliary.items())}

    def load_vector(self) -> np.ndarray:
        """(F~, grad phi) - (f~, phi) on the global space."""
        b = np.zeros(DofMap(self.mesh, self.order).ndofs * self.n)
        for tag in sorted(self.elements):
            assemble_load_from_values(self.mesh, self.order, self.elements[tag], self.flux[tag],
                                      self.source[tag], self.quad_degree, out=b)
        return b


@dataclass(frozen=True, eq=False)
class SolveReport:
    """Solution of one transmission solve with its diagnostics."""

    method: str
    problem_name: str
    problem_hash: str
    field: DiscreteField
    sigma: int
    solve_info: SolveInfo
    l2: Dict[int, float]
    h1: Dict[int, float]
    energy_ratio: float
    data_norm: float
    gradient_bounds: Dict[int, float]
    mesh_stats: MeshStatistics
    auxiliary: Dict[int, AuxiliarySolution] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def l2_total(self) -> float:
        return float(np.sqrt(sum(v ** 2 for v in self.l2.values())))

    @property
    def h1_total(self) -> float:
        return float(np.sqrt(sum(v ** 2 for v in self.h1.values())))

    @property
    def constants(self) -> Dict[int, np.ndarray]:
        return {j: aux.constant for j, aux in sorted(self.auxiliary.items())}

    def to_text(self) -> str:
        """Structured report: key-value lines followed by CSV blocks."""
        info = self.solve_info
        items = {
            "method": self.method,
            "problem": self.problem_name,
            "problem_hash": self.problem_hash,
            "sigma": self.sigma,
            "order": self.field.order,
            "components": self.field.n,
            "dofs": self.field.ndofs * self.field.n,
            "solver": info.method,
            "iterations": info.iterations,
            "residual": format_float(info.residual),
            "symmetric": info.symmetric,
            "l2_norm": format_float(self.l2_total),
            "h1_norm": format_float(self.h1_total),
            "data_norm": format_float(self.data_norm),
            "energy_ratio": format_float(self.energy_ratio),
            "mesh_h": format_float(self.mesh_stats.h),
            "mesh_min_angle": format_float(self.mesh_stats.min_angle),
            "mesh_nodes": self.mesh_stats.node_count,
            "mesh_triangles": self.mesh_stats.triangle_count,
        }
        blocks = {
            "norms": csv_text(["subdomain", "l2", "h1", "max_gradient"],
                              [(t, self.l2[t], self.h1[t], self.gradient_bounds.get(t, 0.0)) for t in sorted(self.l2)]),
        }
        if self.auxiliary:
            rows = []
            for j, aux in sorted(self.auxiliary.items()):
                for i in range(aux.constant.size):
                    rows.append((j, i, aux.constant[i], aux.curve_constant[i], aux.residual, aux.energy_ratio,
                                 aux.g_norm, "" if aux.holder is None else format_float(aux.holder)))
            blocks["auxiliary"] = csv_text(
                ["inclusion", "component", "c", "c_curve", "residual", "energy_ratio", "g_norm", "holder"], rows)
        if self.timings:
            blocks["timings"] = csv_text(["stage", "seconds"], [(k, v) for k, v in self.timings.items()])
        return key_value_text(items, blocks)
