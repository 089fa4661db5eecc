"""
Analysis: norms and errors, manufactured solutions, flux-jump residuals,
sampled Hoelder seminorms, mean oscillation probes and Dini moduli.
"""

from .norms import FieldNorms, ErrorReport, norms, error_vs_exact, relative_difference
from .manufactured import ManufacturedSolution, disk_with_inclusion
from .flux import FluxJumpResult, flux_jump_residual, recovered_jump
from .holder import HolderEstimate, holder_seminorm, holder_quotients, sample_pairs
from .oscillation import (
    OscillationProbe,
    DecayFit,
    DiniModulus,
    ball_quadrature,
    mean_oscillation,
    probe_oscillation,
    decay_fit,
    dini_modulus,
)
from .convergence import observed_orders, fitted_order

__all__ = [
    "FieldNorms",
    "ErrorReport",
    "norms",
    "error_vs_exact",
    "relative_difference",
    "ManufacturedSolution",
    "disk_with_inclusion",
    "FluxJumpResult",
    "flux_jump_residual",
    "recovered_jump",
    "HolderEstimate",
    "holder_seminorm",
    "holder_quotients",
    "sample_pairs",
    "OscillationProbe",
    "DecayFit",
    "DiniModulus",
    "ball_quadrature",
    "mean_oscillation",
    "probe_oscillation",
    "decay_fit",
    "dini_modulus",
    "observed_orders",
    "fitted_order",
]
