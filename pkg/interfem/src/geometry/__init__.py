"""
Geometry: parametric interface curves, the outer domain and the subdomain partition.
"""

from .curves import InterfaceCurve, CurveQuadrature, normal_at, boundary_quadrature, CURVE_KINDS
from .partition import DomainPartition, BoxDomain, INTERFACE, OUTSIDE

__all__ = [
    "InterfaceCurve",
    "CurveQuadrature",
    "normal_at",
    "boundary_quadrature",
    "CURVE_KINDS",
    "DomainPartition",
    "BoxDomain",
    "INTERFACE",
    "OUTSIDE",
]
