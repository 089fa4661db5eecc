"""
Campaign artifacts

Every artifact is plain text: structured reports (key: value lines plus CSV
blocks) and CSV tables with deterministic float formatting, so that reruns
with the same configuration and seed produce identical files.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..analysis.norms import ErrorReport
from ..analysis.oscillation import DecayFit, DiniModulus, OscillationProbe
from ..mesh.statistics import MeshStatistics
from ..mesh.trimesh import TriMesh, write_mesh
from ..transmission.problem import SolveReport
from ..transmission.studies import CONVERGENCE_COLUMNS, GAP_COLUMNS, ConvergenceStudy, GapStudy
from ..utils.serialization import csv_text, format_float, key_value_text, write_text

logger = logging.getLogger(__name__)

COMPARE_COLUMNS = ["level", "h", "l2_diff", "h1_diff", "relative_h1_diff"]


def error_items(error: ErrorReport) -> Dict[str, str]:
    return {
        "l2_error": format_float(error.l2),
        "h1_error": format_float(error.h1),
        "relative_h1_error": format_float(error.relative_h1),
    }


def write_report(out: Path, report: SolveReport, error: Optional[ErrorReport] = None) -> Path:
    """report.txt; errors against the exact solution follow the report when given."""
    text = report.to_text()
    if error is not None:
        text += "\n" + key_value_text(error_items(error))
    return write_text(out / "report.txt", text)


def write_convergence(out: Path, study: ConvergenceStudy) -> Dict[str, Path]:
    """convergence.csv with one row per level and orders.txt with observed and fitted orders."""
    paths = {"convergence": write_text(out / "convergence.csv", csv_text(CONVERGENCE_COLUMNS, study.table()))}
    rows = []
    for name, orders in study.orders.items():
        for k, order in enumerate(np.atleast_1d(orders)):
            rows.append((name, k, k + 1, order))
    fitted = {f"fitted_{name}": format_float(value) for name, value in study.fitted.items()}
    paths["orders"] = write_text(out / "orders.txt", key_value_text(
        fitted, {"observed": csv_text(["quantity", "from_level", "to_level", "order"], rows)}))
    return paths


def write_compare(out: Path, rows: Sequence[Sequence[float]]) -> Path:
    return write_text(out / "compare.csv", csv_text(COMPARE_COLUMNS, rows))


def write_probe(out: Path, probe: OscillationProbe, fit: Optional[DecayFit], beta_note: str = "",
                exact_probe: Optional[OscillationProbe] = None, exact_fit: Optional[DecayFit] = None,
                modulus: Optional[DiniModulus] = None) -> Dict[str, Path]:
    """probe.csv, fit.txt and, when available, probe_exact.csv and modulus.csv."""
    paths = {"probe": write_text(out / "probe.csv", csv_text(["radius", "phi"], probe.rows()))}
    items = {
        "center": f"{format_float(probe.center[0])},{format_float(probe.center[1])}",
        "mu": format_float(probe.mu),
        "levels": len(probe.radii),
        "one_sided": probe.one_sided,
    }
    items.update(_fit_items("discrete", fit, beta_note))
    if exact_probe is not None:
        paths["probe_exact"] = write_text(out / "probe_exact.csv",
                                          csv_text(["radius", "phi"], exact_probe.rows()))
        items.update(_fit_items("exact", exact_fit, ""))
    if modulus is not None:
        paths["modulus"] = write_text(out / "modulus.csv", csv_text(["radius", "omega"], modulus.rows()))
        items["dini_integral"] = format_float(modulus.dini_integral())
    paths["fit"] = write_text(out / "fit.txt", key_value_text(items))
    return paths


def _fit_items(prefix: str, fit: Optional[DecayFit], note: str) -> Dict[str, str]:
    if fit is None:
        return {f"{prefix}_beta": "inf", f"{prefix}_note": note or "degenerate"}
    return {
        f"{prefix}_beta": format_float(fit.beta),
        f"{prefix}_constant": format_float(fit.constant),
        f"{prefix}_residual": format_float(fit.residual),
        f"{prefix}_points": fit.points,
    }


def write_mesh_info(out: Path, mesh: TriMesh, stats: MeshStatistics) -> Dict[str, Path]:
    return {
        "mesh": write_mesh(mesh, out / "mesh.txt"),
        "mesh_stats": write_text(out / "mesh_stats.txt", stats.to_text()),
    }


def write_gap(out: Path, study: GapStudy) -> Path:
    text = csv_text(GAP_COLUMNS, study.table())
    return write_text(out / "gap.csv", text)


def artifact_listing(paths: Dict[str, Path]) -> List[str]:
    return [f"{name}: {path}" for name, path in sorted(paths.items())]
