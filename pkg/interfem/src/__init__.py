"""
interfem core components

This package contains the implementation of interfem:
- geometry: interface curves and domain partitions
- mesh: interface-fitted triangulations, refinement and statistics
- fem: quadrature, P1/P2 bases, assembly and linear solvers
- transmission: problem data, reduction and direct solution paths, studies
- analysis: errors, flux jumps, Hoelder and oscillation estimators
- expressions: the coefficient expression language
- campaigns: run configurations and the campaign runner
- utils: logging, retries, concurrency, validation and serialization
"""

from .config import SolverConfig, get_config, set_config, reset_config
from .geometry import DomainPartition, InterfaceCurve
from .mesh import TriMesh, generate_fitted_mesh, refine
from .fem import CoefficientField, DiscreteField
from .transmission import TransmissionProblem, SolveReport, solve_by_reduction, solve_direct, solve_multi

# Public API for src package
__all__ = [
    # Configuration
    "SolverConfig",
    "get_config",
    "set_config",
    "reset_config",

    # Geometry and meshing
    "DomainPartition",
    "InterfaceCurve",
    "TriMesh",
    "generate_fitted_mesh",
    "refine",

    # Finite elements
    "CoefficientField",
    "DiscreteField",

    # Transmission problems
    "TransmissionProblem",
    "SolveReport",
    "solve_by_reduction",
    "solve_direct",
    "solve_multi",
]
