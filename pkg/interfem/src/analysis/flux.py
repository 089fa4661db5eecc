"""
Recovered conormal flux jumps across interfaces.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..fem.assembly import interface_quadrature
from ..fem.field import DiscreteField
from ..fem.orientation import get_orientation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FluxJumpResult:
    interface: int
    residual: float
    data_norm: float
    edges: int

    @property
    def relative(self) -> float:
        return self.residual / self.data_norm if self.data_norm > 0 else self.residual


def recovered_jump(field: DiscreteField, coeff, interface: int):
    """
    Inner minus outer conormal flux (A grad u_h - F) . nu along the edges of one interface.

    Each side uses the gradient of its own adjacent element, evaluated at Gauss
    points of the edge; nu is the edge normal pointing into the inclusion.

    Returns:
        (points (E, Q, 2), weights (E, Q), jump (E, Q, n))

    Raises:
        UnknownInterface: If the mesh has no edges on the interface
    """
    mesh = field.mesh
    edges, t, points, weights = interface_quadrature(mesh, interface)
    q = t.shape[0]
    pair = mesh.edge_triangles[mesh.edge_index(edges[:, :2])]
    inner_is_first = mesh.tags[pair[:, 0]] == edges[:, 3]
    inner = np.where(inner_is_first, pair[:, 0], pair[:, 1])
    outer = np.where(inner_is_first, pair[:, 1], pair[:, 0])
    chord = mesh.nodes[edges[:, 1]] - mesh.nodes[edges[:, 0]]
    nu = np.stack([-chord[:, 1], chord[:, 0]], axis=-1) / np.linalg.norm(chord, axis=1)[:, None]
    flat = points.reshape(-1, 2)
    jump = np.zeros((edges.shape[0] * q, field.n))
    for elements, sign in ((inner, 1.0), (outer, -1.0)):
        per_point = np.repeat(elements, q)
        grads = field.gradients_at(flat, per_point)
        tags = mesh.tags[per_point]
        flux = np.empty_like(grads)
        for tag in np.unique(tags):
            m = tags == tag
            A = coeff.tensor_at(int(tag), flat[m])
            flux[m] = np.einsum("pikjl,pjl->pik", A, grads[m]) - coeff.flux_at(int(tag), flat[m])
        jump += sign * np.einsum("pik,pk->pi", flux, np.repeat(nu, q, axis=0))
    return points, weights, jump.reshape(edges.shape[0], q, field.n)


def flux_jump_residual(field: DiscreteField, problem, interface: int,
                       sigma: Optional[int] = None) -> FluxJumpResult:
    """
    L2(Gamma_j) distance between the recovered flux jump and the interface data.

    The data enter with the sign -sigma of the pinned orientation, so that for
    sigma = -1 the recovered jump is compared with g itself.

    Raises:
        UnknownInterface: If the mesh has no edges on the interface
    """
    sigma = get_orientation() if sigma is None else sigma
    points, weights, jump = recovered_jump(field, problem.coeff, interface)
    g = problem.coeff.interface_at(interface, points.reshape(-1, 2)).reshape(jump.shape)
    diff = jump + sigma * g
    residual = float(np.sqrt(np.einsum("eq,eqi,eqi->", weights, diff, diff)))
    data_norm = float(np.sqrt(np.einsum("eq,eqi,eqi->", weights, g, g)))
    logger.debug(f"flux jump on interface {interface}: residual {residual:.3e}, data norm {data_norm:.3e}")
    return FluxJumpResult(interface, residual, data_norm, int(jump.shape[0]))
