"""
interfem - finite elements for elliptic transmission problems

Solves divergence-form systems on domains split by closed interface curves,
with prescribed jumps of the conormal flux across the interfaces, either
directly or through the reduction to a jump-free problem by auxiliary
Neumann solves. Comes with manufactured solutions, convergence studies and
sampled regularity estimators.

Quick Start:
    from interfem import ManufacturedSolution, generate_fitted_mesh, solve_by_reduction, error_vs_exact

    ms = ManufacturedSolution.ms1()
    mesh = generate_fitted_mesh(ms.partition, h_target=0.1)
    report = solve_by_reduction(ms.problem(), mesh)
    print(error_vs_exact(report.field, ms).h1)

    # Campaigns from a configuration file
    from interfem import run_campaign
    run_campaign("interfem/examples/ms1_convergence.ini", out="results")
"""

# Configuration and errors
from .src.config import SolverConfig, get_config, set_config, reset_config
from .src.exceptions import InterfemError, exit_code_for

# Geometry and meshing
from .src.geometry import BoxDomain, DomainPartition, InterfaceCurve
from .src.mesh import TriMesh, generate_fitted_mesh, mesh_statistics, refine

# Finite elements
from .src.fem import CoefficientField, DiscreteField, anisotropic, constant, isotropic

# Transmission problems
from .src.transmission import (
    SolveReport,
    TransmissionProblem,
    compatibility_constant,
    convergence_study,
    pin_orientation,
    run_gap_study,
    solve_by_reduction,
    solve_direct,
    solve_inclusion_neumann,
    solve_multi,
)

# Analysis
from .src.analysis import (
    ManufacturedSolution,
    decay_fit,
    dini_modulus,
    error_vs_exact,
    flux_jump_residual,
    holder_seminorm,
    probe_oscillation,
)

# Expressions and campaigns
from .src.expressions import differentiate, evaluate, parse_expression, to_text
from .src.campaigns import RunConfig, parse_config, run_campaign

# Version info
__version__ = "0.1.0"

# Public API
__all__ = [
    "SolverConfig",
    "get_config",
    "set_config",
    "reset_config",
    "InterfemError",
    "exit_code_for",
    "BoxDomain",
    "DomainPartition",
    "InterfaceCurve",
    "TriMesh",
    "generate_fitted_mesh",
    "mesh_statistics",
    "refine",
    "CoefficientField",
    "DiscreteField",
    "anisotropic",
    "constant",
    "isotropic",
    "SolveReport",
    "TransmissionProblem",
    "compatibility_constant",
    "convergence_study",
    "pin_orientation",
    "run_gap_study",
    "solve_by_reduction",
    "solve_direct",
    "solve_inclusion_neumann",
    "solve_multi",
    "ManufacturedSolution",
    "decay_fit",
    "dini_modulus",
    "error_vs_exact",
    "flux_jump_residual",
    "holder_seminorm",
    "probe_oscillation",
    "differentiate",
    "evaluate",
    "parse_expression",
    "to_text",
    "RunConfig",
    "parse_config",
    "run_campaign",
]
