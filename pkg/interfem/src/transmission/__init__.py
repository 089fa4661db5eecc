"""
Transmission problems

Problem data, the reduction pipeline (auxiliary Neumann solves followed by a
jump-free Dirichlet solve), the direct weak formulation, the interface-sign
self-test and the refinement and gap studies.
"""

from .problem import AuxiliarySolution, ReducedData, SolveReport, TransmissionProblem, problem_hash
from .neumann import compatibility_constant, curve_constants, solve_inclusion_neumann
from .reduction import build_reduced_data, make_report, solve_auxiliaries, solve_by_reduction, solve_multi
from .direct import direct_system, solve_direct
from .orientation import OrientationResult, ensure_orientation, orientation_self_test, pin_orientation
from .studies import (
    CONVERGENCE_COLUMNS,
    GAP_COLUMNS,
    METHODS,
    ConvergenceStudy,
    GapStudy,
    convergence_study,
    gap_problem,
    mesh_ladder,
    run_gap_study,
    solve_with,
)

__all__ = [
    "TransmissionProblem",
    "AuxiliarySolution",
    "ReducedData",
    "SolveReport",
    "problem_hash",
    "compatibility_constant",
    "curve_constants",
    "solve_inclusion_neumann",
    "build_reduced_data",
    "make_report",
    "solve_auxiliaries",
    "solve_by_reduction",
    "solve_multi",
    "direct_system",
    "solve_direct",
    "OrientationResult",
    "ensure_orientation",
    "orientation_self_test",
    "pin_orientation",
    "CONVERGENCE_COLUMNS",
    "GAP_COLUMNS",
    "METHODS",
    "ConvergenceStudy",
    "GapStudy",
    "convergence_study",
    "gap_problem",
    "mesh_ladder",
    "run_gap_study",
    "solve_with",
]
