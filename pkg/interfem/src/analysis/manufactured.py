"""
Manufactured transmission solutions

A ManufacturedSolution carries the exact solution and its gradient per
subdomain tag together with coefficient data (tensor, flux, source and
interface jumps) for which it solves the transmission problem. Exact callables
take (P, 2) points and return (P, n) values and (P, n, 2) gradients.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np

from ..fem.coefficients import CoefficientField, constant, isotropic
from ..fem.orientation import get_orientation
from ..geometry.curves import InterfaceCurve
from ..geometry.partition import DomainPartition
from ..exceptions import ValidationError

logger = logging.getLogger(__name__)

ExactFunction = Callable[[np.ndarray], np.ndarray]


def _xy(points):
    p = np.asarray(points, dtype=float).reshape(-1, 2)
    return p[:, 0], p[:, 1]


def disk_with_inclusion(radius: float = 0.5, outer_radius: float = 1.0) -> DomainPartition:
    """Unit disk with one concentric circular inclusion."""
    return DomainPartition(InterfaceCurve.circle(outer_radius), (InterfaceCurve.circle(radius),))


@dataclass(frozen=True)
class ManufacturedSolution:
    name: str
    partition: DomainPartition
    exact: Dict[int, ExactFunction]
    gradient: Dict[int, ExactFunction]
    coeff: CoefficientField
    notes: Dict[str, str] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.coeff.n

    def values(self, points) -> np.ndarray:
        """Exact values at points, selecting the branch of each point's subdomain."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        tags = self.partition.locate(pts)
        out = np.zeros((pts.shape[0], self.n))
        for tag, func in self.exact.items():
            mask = tags == tag
            if mask.any():
                out[mask] = np.asarray(func(pts[mask]), dtype=float).reshape(-1, self.n)
        return out

    def gradients(self, points, tags: Optional[np.ndarray] = None) -> np.ndarray:
        """Exact gradients (P, n, 2); ``tags`` overrides point location."""
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        tags = self.partition.locate(pts) if tags is None else np.asarray(tags)
        out = np.zeros((pts.shape[0], self.n, 2))
        for tag, func in self.gradient.items():
            mask = tags == tag
            if mask.any():
                out[mask] = np.asarray(func(pts[mask]), dtype=float).reshape(-1, self.n, 2)
        return out

    def problem(self, kappa: Optional[float] = None):
        """The TransmissionProblem this solution solves."""
        from ..transmission.problem import TransmissionProblem
        return TransmissionProblem(self.partition, self.coeff, kappa=kappa, name=self.name)

    # -- consistency checks ----------------------------------------------------

    def _interface_samples(self, j: int, samples: int):
        curve = self.partition.curve(j)
        theta = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
        return curve.point(theta), curve.inward_normal(theta)

    def check_continuity(self, samples: int = 256) -> float:
        """Max |u_inner - u_outer| over sampled points of every interface."""
        worst = 0.0
        for j in range(1, self.partition.subdomain_count):
            pts, _ = self._interface_samples(j, samples)
            inner = np.asarray(self.exact[j](pts), dtype=float)
            outer = np.asarray(self.exact[self.partition.parent_tag(j)](pts), dtype=float)
            worst = max(worst, float(np.abs(inner - outer).max()))
        return worst

    def conormal_jump(self, j: int, points: np.ndarray, normals: np.ndarray) -> np.ndarray:
        """Inner minus outer of (A grad u - F) . nu at points of interface ``j``, shape (P, n)."""
        jump = 0.0
        for tag, sign in ((j, 1.0), (self.partition.parent_tag(j), -1.0)):
            A = self.coeff.tensor_at(tag, points)
            flux = np.einsum("pikjl,pjl->pik", A, np.asarray(self.gradient[tag](points), dtype=float)
                             .reshape(-1, self.n, 2)) - self.coeff.flux_at(tag, points)
            jump = jump + sign * np.einsum("pik,pk->pi", flux, normals)
        return jump

    def check_jump(self, samples: int = 256) -> float:
        """Max deviation between the interface data and the exact conormal jump."""
        expected_sign = -get_orientation()
        worst = 0.0
        for j in range(1, self.partition.subdomain_count):
            pts, nu = self._interface_samples(j, samples)
            jump = self.conormal_jump(j, pts, nu)
            data = expected_sign * self.coeff.interface_at(j, pts)
            worst = max(worst, float(np.abs(jump - data).max()))
        return worst

    # -- built-in instances ------------------------------------------------------

    @classmethod
    def ms1(cls, a_in: float = 1.0, a_out: float = 1.0) -> "ManufacturedSolution":
        """
        Harmonic solution on the unit disk with an inclusion of radius 1/2.

        u = x inside, u = b (x - x / r^2) outside with b = -1/3, so that u is
        continuous at r = 1/2 and vanishes at r = 1. With isotropic
        coefficients a_in, a_out the inner-minus-outer conormal jump under the
        inward normal is g = -(a_in + 5 a_out / 3) cos(theta).
        """
        b = -1.0 / 3.0
        lam = -(a_in + 5.0 * a_out / 3.0)

        def u_in(points):
            x, _ = _xy(points)
            return x[:, None]

        def du_in(points):
            x, _ = _xy(points)
            return np.broadcast_to(np.array([[[1.0, 0.0]]]), (x.shape[0], 1, 2)).copy()

        def u_out(points):
            x, y = _xy(points)
            return (b * (x - x / (x * x + y * y)))[:, None]

        def du_out(points):
            x, y = _xy(points)
            r2 = x * x + y * y
            r4 = r2 * r2
            return np.stack([b * (1.0 - (y * y - x * x) / r4), b * 2.0 * x * y / r4], axis=-1)[:, None, :]

        def g(points):
            x, y = _xy(points)
            return (lam * x / np.hypot(x, y))[:, None]

        coeff = CoefficientField(
            n=1,
            tensor={1: isotropic(a_in), 2: isotropic(a_out)},
            interface_data={1: g},
            labels={"tensor": f"a1={a_in};a2={a_out}", "g1": f"{lam!r}*cos(theta)"},
        )
        name = "ms1" if a_in == a_out == 1.0 else f"ms1[a_in={a_in},a_out={a_out}]"
        return cls(name, disk_with_inclusion(), {1: u_in, 2: u_out}, {1: du_in, 2: du_out}, coeff)

    @classmethod
    def ms_smooth(cls) -> "ManufacturedSolution":
        """u = 1 - r^2 on the unit disk (no flux jump): div grad u = -4 = f."""

        def u(points):
            x, y = _xy(points)
            return (1.0 - x * x - y * y)[:, None]

        def du(points):
            x, y = _xy(points)
            return np.stack([-2.0 * x, -2.0 * y], axis=-1)[:, None, :]

        coeff = CoefficientField(
            n=1,
            tensor={1: isotropic(1.0), 2: isotropic(1.0)},
            source={1: constant([-4.0]), 2: constant([-4.0])},
            labels={"tensor": "identity", "source": "-4"},
        )
        return cls("ms_smooth", disk_with_inclusion(), {1: u, 2: u}, {1: du, 2: du}, coeff)

    @classmethod
    def from_expressions(cls, name: str, partition: DomainPartition, exact: Dict[int, list],
                         coeff: CoefficientField) -> "ManufacturedSolution":
        """
        Exact solution given per subdomain as expression lists of length n.

        Gradients are obtained by symbolic differentiation of the expressions.

        Raises:
            ValidationError: If a subdomain has no expression or the arity differs from n
        """
        from ..expressions import differentiate, evaluate

        values, gradients = {}, {}
        for tag in partition.tags:
            if tag not in exact:
                raise ValidationError(f"exact solution missing for subdomain {tag}")
            exprs = list(exact[tag])
            if len(exprs) != coeff.n:
                raise ValidationError(f"exact solution of subdomain {tag} has {len(exprs)} components, "
                                      f"expected {coeff.n}")
            derivs = [(differentiate(e, "x"), differentiate(e, "y")) for e in exprs]

            def u(points, exprs=exprs):
                return np.column_stack([evaluate(e, points) for e in exprs])

            def du(points, derivs=derivs):
                return np.stack([np.column_stack([evaluate(dx, points), evaluate(dy, points)])
                                 for dx, dy in derivs], axis=1)

            values[tag], gradients[tag] = u, du
        return cls(name, partition, values, gradients, coeff)
