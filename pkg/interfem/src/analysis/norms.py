"""
L2 and H1 norms of discrete fields and their errors, per subdomain and global.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from ..config import get_config
from ..fem.basis import element_geometry
from ..fem.field import DiscreteField
from ..fem.quadrature import triangle_rule

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FieldNorms:
    """Squared contributions are additive: global**2 == sum over subdomains of **2."""

    l2: Dict[int, float]
    h1_semi: Dict[int, float]

    @property
    def h1(self) -> Dict[int, float]:
        return {t: float(np.hypot(self.l2[t], self.h1_semi[t])) for t in self.l2}

    @property
    def l2_total(self) -> float:
        return float(np.sqrt(sum(v ** 2 for v in self.l2.values())))

    @property
    def h1_semi_total(self) -> float:
        return float(np.sqrt(sum(v ** 2 for v in self.h1_semi.values())))

    @property
    def h1_total(self) -> float:
        return float(np.hypot(self.l2_total, self.h1_semi_total))

    def rows(self):
        for tag in sorted(self.l2):
            yield tag, self.l2[tag], self.h1_semi[tag], self.h1[tag]


def _integrate_squares(field: DiscreteField, degree: int,
                       exact_values: Optional[Dict[int, Callable]] = None,
                       exact_gradients: Optional[Dict[int, Callable]] = None):
    mesh = field.mesh
    ref, weights = triangle_rule(degree)
    l2, semi, grad_max = {}, {}, {}
    for tag in sorted(int(t) for t in np.unique(mesh.tags)):
        elements = np.flatnonzero(mesh.tags == tag)
        geo = element_geometry(mesh, elements)
        wd = weights[None, :] * geo.det[:, None]
        values = field.evaluate_reference(ref, elements)
        grads = field.gradients_reference(ref, elements)
        if exact_values is not None:
            pts = geo.to_physical(ref).reshape(-1, 2)
            values = values - np.asarray(exact_values[tag](pts), dtype=float).reshape(values.shape)
            grads = grads - np.asarray(exact_gradients[tag](pts), dtype=float).reshape(grads.shape)
            centroid_err = (field.gradients_reference(np.array([[1.0 / 3.0, 1.0 / 3.0]]), elements)[:, 0]
                            - np.asarray(exact_gradients[tag](mesh.centroids[elements]), dtype=float)
                            .reshape(elements.size, field.n, 2))
            grad_max[tag] = float(np.linalg.norm(centroid_err.reshape(elements.size, -1), axis=1).max())
        l2[tag] = float(np.sqrt(np.einsum("eq,eqi,eqi->", wd, values, values)))
        semi[tag] = float(np.sqrt(np.einsum("eq,eqik,eqik->", wd, grads, grads)))
    return l2, semi, grad_max


def norms(field: DiscreteField, partition=None) -> FieldNorms:
    """
    L2 norm and H1 seminorm per subdomain tag of the mesh.

    The quadrature is exact for squares of the basis (degree 2 * order).
    """
    l2, semi, _ = _integrate_squares(field, 2 * field.order)
    return FieldNorms(l2, semi)


@dataclass(frozen=True)
class ErrorReport:
    """Errors against an exact solution."""

    norms: FieldNorms
    max_gradient_error: Dict[int, float]
    exact_h1: float

    @property
    def l2(self) -> float:
        return self.norms.l2_total

    @property
    def h1(self) -> float:
        return self.norms.h1_total

    @property
    def relative_h1(self) -> float:
        return self.h1 / self.exact_h1 if self.exact_h1 > 0 else self.h1


def error_vs_exact(field: DiscreteField, ms) -> ErrorReport:
    """
    Errors of a field against a manufactured solution, measured per subdomain.

    Each element is compared with the exact branch of its own tag, so the
    gradient jump of the exact solution is never sampled across an interface.

    Args:
        field: Discrete solution
        ms: ManufacturedSolution with ``exact`` and ``gradient`` keyed by tag

    Returns:
        ErrorReport with L2 and H1 errors, max centroid gradient errors per tag
        and the H1 norm of the exact solution on the same quadrature
    """
    degree = get_config().quadrature_degree(field.order) + 2
    l2, semi, grad_max = _integrate_squares(field, degree, ms.exact, ms.gradient)
    zero = field.with_values(np.zeros_like(field.values))
    el2, esemi, _ = _integrate_squares(zero, degree, ms.exact, ms.gradient)
    exact_h1 = float(np.sqrt(sum(v ** 2 for v in el2.values()) + sum(v ** 2 for v in esemi.values())))
    return ErrorReport(FieldNorms(l2, semi), grad_max, exact_h1)


def relative_difference(a: DiscreteField, b: DiscreteField) -> float:
    """Relative H1 difference ||a - b|| / ||b|| (absolute when b vanishes)."""
    diff = norms(a - b).h1_total
    scale = norms(b).h1_total
    return diff / scale if scale > 0 else diff
