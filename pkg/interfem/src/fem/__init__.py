"""
Finite element core: quadrature, P1/P2 bases, piecewise coefficients,
assembly of stiffness and loads, and the Dirichlet and mean-zero solvers.
"""

from .quadrature import triangle_rule, line_rule
from .basis import DofMap, basis_values, basis_gradients, element_geometry
from .coefficients import (
    CoefficientField,
    EllipticityReport,
    verify_ellipticity,
    constant,
    isotropic,
    anisotropic,
)
from .field import DiscreteField, SolveInfo
from .assembly import (
    SparseSystem,
    assemble_stiffness,
    assemble_volume_load,
    assemble_load_from_values,
    assemble_interface_load,
    assemble_mass_vector,
)
from .solvers import solve_dirichlet, solve_mean_zero
from .orientation import DERIVED_SIGMA, get_orientation, set_orientation, reset_orientation

__all__ = [
    "triangle_rule",
    "line_rule",
    "DofMap",
    "basis_values",
    "basis_gradients",
    "element_geometry",
    "CoefficientField",
    "EllipticityReport",
    "verify_ellipticity",
    "constant",
    "isotropic",
    "anisotropic",
    "DiscreteField",
    "SolveInfo",
    "SparseSystem",
    "assemble_stiffness",
    "assemble_volume_load",
    "assemble_load_from_values",
    "assemble_interface_load",
    "assemble_mass_vector",
    "solve_dirichlet",
    "solve_mean_zero",
    "DERIVED_SIGMA",
    "get_orientation",
    "set_orientation",
    "reset_orientation",
]
