"""
Campaign runner

One campaign per call: the configured problem is built, the interface sign is
pinned, and the solve, compare, convergence, probe, mesh-info or gap campaign
writes its artifacts into the output directory.
"""

import copy
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from .builders import ProblemAdapter
from .config import RunConfig, load_config
from .outputs import (
    write_compare,
    write_convergence,
    write_gap,
    write_mesh_info,
    write_probe,
    write_report,
)
from ..analysis.norms import error_vs_exact, norms
from ..analysis.oscillation import decay_fit, dini_modulus, probe_oscillation
from ..config import get_config, set_config
from ..exceptions import DegenerateLadder, ValidationError
from ..mesh.generator import generate_fitted_mesh
from ..mesh.statistics import mesh_statistics
from ..transmission.orientation import ensure_orientation
from ..transmission.studies import convergence_study, mesh_ladder, run_gap_study, solve_with
from ..utils.logging import LoggerMixin


@dataclass
class CampaignResult:
    kind: str
    out: Path
    artifacts: Dict[str, Path] = field(default_factory=dict)
    summary: Dict[str, Any] = field(default_factory=dict)


@contextmanager
def solver_settings(config: RunConfig):
    """Apply the seed and linear-solver settings of a run, restoring the global config afterwards."""
    previous = get_config()
    updates = {}
    if config.campaign.seed is not None:
        updates["seed"] = config.campaign.seed
    if config.solver.tol_lin is not None:
        updates["tol_lin"] = config.solver.tol_lin
    if config.solver.linear_solver is not None:
        updates["linear_solver"] = config.solver.linear_solver
    # copy.copy skips __post_init__, so INTERFEM_* variables leave these settings alone
    settings = copy.copy(previous)
    for name, value in updates.items():
        setattr(settings, name, value)
    set_config(settings)
    try:
        yield get_config()
    finally:
        set_config(previous)


class CampaignRunner(LoggerMixin):
    """Runs the campaign described by a RunConfig.

    Args:
        config: Validated run configuration (CLI overrides already applied)
        out: Output directory (defaults to the configured ``out``)
    """

    def __init__(self, config: RunConfig, out: Optional[Union[str, Path]] = None) -> None:
        self.config = config
        self.out = Path(out if out is not None else config.campaign.out)
        self.adapter = ProblemAdapter(config)

    def run(self) -> CampaignResult:
        kind = self.config.campaign.kind
        handlers = {
            "solve": self.run_solve,
            "compare": self.run_compare,
            "convergence": self.run_convergence,
            "probe": self.run_probe,
            "mesh-info": self.run_mesh_info,
            "gap": self.run_gap,
        }
        with solver_settings(self.config):
            if kind != "mesh-info":
                ensure_orientation()
            self.log_info(f"running {kind} campaign from {self.config.source_name} into {self.out}")
            result = handlers[kind]()
        self.log_info(f"{kind} campaign wrote {len(result.artifacts)} artifact(s)")
        return result

    # -- campaigns ---------------------------------------------------------

    def _mesh(self, partition):
        return generate_fitted_mesh(partition, self.config.solver.h)

    def run_solve(self) -> CampaignResult:
        problem = self.adapter.adapt_problem()
        ms = self.adapter.adapt_exact(problem)
        mesh = self._mesh(problem.partition)
        report = solve_with(self.config.solver.method, problem, mesh, self.config.solver.order)
        error = error_vs_exact(report.field, ms) if ms is not None else None
        path = write_report(self.out, report, error)
        summary = {"h1_norm": report.h1_total, "l2_norm": report.l2_total, "energy_ratio": report.energy_ratio}
        if error is not None:
            summary["h1_error"] = error.h1
        return CampaignResult("solve", self.out, {"report": path}, summary)

    def run_compare(self) -> CampaignResult:
        problem = self.adapter.adapt_problem()
        solver = self.config.solver
        rows = []
        for level, mesh in enumerate(mesh_ladder(problem.partition, solver.h, solver.levels)):
            reduced = solve_with("multi" if problem.partition.subdomain_count >= 3 else "reduction",
                                 problem, mesh, solver.order)
            direct = solve_with("direct", problem, mesh, solver.order)
            diff = norms(reduced.field - direct.field)
            scale = direct.h1_total
            relative = diff.h1_total / scale if scale > 0 else diff.h1_total
            rows.append((level, mesh.h, diff.l2_total, diff.h1_total, relative))
            self.log_info(f"compare level {level}: relative H1 difference {relative:.4g}")
        path = write_compare(self.out, rows)
        return CampaignResult("compare", self.out, {"compare": path}, {"relative_h1_diff": rows[-1][4]})

    def run_convergence(self) -> CampaignResult:
        problem = self.adapter.adapt_problem()
        ms = self.adapter.adapt_exact(problem)
        if ms is None:
            raise ValidationError("[exact]: convergence campaigns need an exact solution for every subdomain",
                                  error_code="BAD_REFERENCE")
        solver = self.config.solver
        study = convergence_study(problem, ms, solver.levels, solver.h, solver.order, solver.method,
                                  solver.alpha, solver.rho_factor)
        paths = write_convergence(self.out, study)
        return CampaignResult("convergence", self.out, paths, dict(study.fitted))

    def run_probe(self) -> CampaignResult:
        problem = self.adapter.adapt_problem()
        ms = self.adapter.adapt_exact(problem)
        partition = problem.partition
        campaign = self.config.campaign
        center = np.asarray(campaign.center if campaign.center is not None
                            else partition.region_point(partition.outer_tag, 0.5 * partition.min_separation()),
                            dtype=float)
        r0 = campaign.r0 if campaign.r0 is not None else 0.1 * partition.diameter
        mesh = self._mesh(partition)
        report = solve_with(self.config.solver.method, problem, mesh, self.config.solver.order)

        probe = probe_oscillation(report.field, center, r0, campaign.mu, campaign.probe_levels, partition,
                                  campaign.one_sided)
        fit, note = self._fit(probe)
        exact_probe = exact_fit = None
        if ms is not None:
            def gradient(points):
                return ms.gradients(points)

            exact_probe = probe_oscillation(gradient, center, r0, campaign.mu, campaign.probe_levels, partition,
                                            campaign.one_sided)
            exact_fit, _ = self._fit(exact_probe)

        coeff = problem.coeff

        def leading_entry(points):
            tags = partition.locate(points)
            values = np.zeros(points.shape[0])
            for tag in np.unique(tags):
                mask = tags == tag
                values[mask] = coeff.tensor_at(int(tag), points[mask])[:, 0, 0, 0, 0]
            return values

        modulus = dini_modulus(leading_entry, partition, probe.radii, [center])
        paths = write_probe(self.out, probe, fit, note, exact_probe, exact_fit, modulus)
        summary = {"beta": fit.beta if fit is not None else float("inf")}
        if exact_fit is not None:
            summary["beta_exact"] = exact_fit.beta
        return CampaignResult("probe", self.out, paths, summary)

    def _fit(self, probe):
        try:
            return decay_fit(probe), ""
        except DegenerateLadder as exc:
            self.log_warning(f"oscillation ladder at {probe.center} is degenerate: {exc.message}")
            return None, "degenerate"
        except ValidationError as exc:
            self.log_warning(f"decay fit skipped: {exc.message}")
            return None, "too few positive levels"

    def run_mesh_info(self) -> CampaignResult:
        partition = self.adapter.adapt_partition()
        mesh = self._mesh(partition)
        stats = mesh_statistics(mesh)
        paths = write_mesh_info(self.out, mesh, stats)
        return CampaignResult("mesh-info", self.out, paths, stats.to_dict())

    def run_gap(self) -> CampaignResult:
        study = run_gap_study(self.config.campaign.deltas, order=self.config.solver.order)
        path = write_gap(self.out, study)
        return CampaignResult("gap", self.out, {"gap": path}, {"tolerance_met": study.tolerance_met})


def run_campaign(config: Union[RunConfig, str, Path], out: Optional[Union[str, Path]] = None) -> CampaignResult:
    """
    Run one campaign.

    Args:
        config: RunConfig or path of a configuration file
        out: Output directory override

    Returns:
        CampaignResult listing the written artifacts

    Raises:
        InterfemError: Any parse, validation, numerical or I/O failure
    """
    if not isinstance(config, RunConfig):
        config = load_config(config)
    return CampaignRunner(config, out).run()
