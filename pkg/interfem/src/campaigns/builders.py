"""
Builders turning a RunConfig into geometry, coefficients and problems.
"""

import logging
from typing import Dict, Optional

import numpy as np

from .config import InclusionSpec, OuterSpec, RunConfig, SubdomainSpec
from ..analysis.manufactured import ManufacturedSolution
from ..expressions import as_function, evaluate, to_text
from ..fem.coefficients import CoefficientField, DataFunction, anisotropic, isotropic
from ..geometry.curves import InterfaceCurve
from ..geometry.partition import BoxDomain, DomainPartition
from ..transmission.problem import TransmissionProblem

logger = logging.getLogger(__name__)


def _curve(spec, kind: str) -> InterfaceCurve:
    if kind == "ellipse":
        return InterfaceCurve.ellipse(spec.radius, spec.semi_minor or spec.radius, center=spec.center)
    if kind == "perturbed_circle":
        return InterfaceCurve.perturbed_circle(spec.radius, spec.perturbation, spec.holder_exponent,
                                               center=spec.center)
    return InterfaceCurve.circle(spec.radius, center=spec.center)


class ProblemAdapter:
    """Adapts a validated RunConfig into the numerical objects of a campaign.

    Args:
        config: Validated run configuration
    """

    def __init__(self, config: RunConfig) -> None:
        self.config = config
        self._partition: Optional[DomainPartition] = None

    def adapt_outer(self, spec: OuterSpec):
        if spec.shape == "box":
            return BoxDomain(spec.xmin, spec.xmax, spec.ymin, spec.ymax)
        return _curve(spec, spec.shape)

    def adapt_inclusion(self, spec: InclusionSpec) -> InterfaceCurve:
        return _curve(spec, spec.shape)

    def adapt_partition(self) -> DomainPartition:
        """Partition of the configured outer domain and inclusions, validated once."""
        if self._partition is None:
            inclusions = [self.config.inclusions[j] for j in sorted(self.config.inclusions)]
            partition = DomainPartition(
                self.adapt_outer(self.config.outer),
                tuple(self.adapt_inclusion(spec) for spec in inclusions),
                parents=tuple(spec.parent for spec in inclusions),
            )
            self._partition = partition.validate()
        return self._partition

    def adapt_tensor(self, spec: Optional[SubdomainSpec]) -> DataFunction:
        n = self.config.components
        if spec is None or (spec.a is None and not spec.anisotropic):
            return isotropic(1.0, n)
        if spec.anisotropic:
            entries = [spec.a11, spec.a12, spec.a21, spec.a22]

            def matrix(points):
                values = np.column_stack([evaluate(e, points) for e in entries])
                return values.reshape(-1, 2, 2)

            return anisotropic(matrix, n)
        a = spec.a
        return isotropic(lambda points: evaluate(a, points), n)

    def adapt_coefficients(self) -> CoefficientField:
        """
        Tensor, flux and source per subdomain and g per interface.

        Subdomains without a section get the identity tensor and zero data;
        interfaces without a section carry g = 0.
        """
        config = self.config
        tensor, flux, source, labels = {}, {}, {}, {}
        for tag in range(1, config.subdomain_count + 1):
            spec = config.subdomains.get(tag)
            tensor[tag] = self.adapt_tensor(spec)
            if spec is None:
                continue
            if spec.flux_x is not None:
                fx, fy = as_function(spec.flux_x), as_function(spec.flux_y)
                flux[tag] = lambda points, fx=fx, fy=fy: np.stack([fx(points), fy(points)], axis=-1)
                labels[f"flux{tag}"] = ";".join(to_text(e) for e in spec.flux_x + spec.flux_y)
            if spec.source is not None:
                source[tag] = as_function(spec.source)
                labels[f"source{tag}"] = ";".join(to_text(e) for e in spec.source)
            if spec.a is not None:
                labels[f"a{tag}"] = to_text(spec.a)
            elif spec.anisotropic:
                labels[f"a{tag}"] = ";".join(to_text(e) for e in (spec.a11, spec.a12, spec.a21, spec.a22))
        interface = {}
        for j, spec in config.interfaces.items():
            interface[j] = as_function(spec.g)
            labels[f"g{j}"] = ";".join(to_text(e) for e in spec.g)
        return CoefficientField(config.components, tensor, flux, source, interface, labels)

    def adapt_problem(self) -> TransmissionProblem:
        name = self.config.source_name
        problem = TransmissionProblem(self.adapt_partition(), self.adapt_coefficients(),
                                      kappa=self.config.coefficients.kappa, name=name)
        return problem.validate()

    def adapt_exact(self, problem: Optional[TransmissionProblem] = None) -> Optional[ManufacturedSolution]:
        """Manufactured solution from the [exact N] sections, or None when absent."""
        if not self.config.exact:
            return None
        problem = problem or self.adapt_problem()
        exact: Dict[int, list] = {tag: spec.u for tag, spec in self.config.exact.items()}
        return ManufacturedSolution.from_expressions(problem.name, problem.partition, exact, problem.coeff)
