"""
Piecewise coefficient data

All data callables take a point array of shape (P, 2). Their results are
broadcast to

    tensor A      (P, n, 2, n, 2)   A[p, i, k, j, l] = A^{kl}_{ij}
    flux F        (P, n, 2)         F[p, i, k] = F_k^i
    source f      (P, n)
    interface g   (P, n)

Tensors, fluxes and sources are keyed by subdomain tag; interface data by
inclusion curve id. Missing fluxes, sources and interface data are zero.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Union

import numpy as np

from ..exceptions import ValidationError
from ..utils.validation import validate_positive

logger = logging.getLogger(__name__)

DataFunction = Callable[[np.ndarray], np.ndarray]
Scalar = Union[float, DataFunction]


def _points(points) -> np.ndarray:
    return np.asarray(points, dtype=float).reshape(-1, 2)


def evaluate_data(func: Optional[DataFunction], points: np.ndarray, shape) -> np.ndarray:
    """Evaluate a data callable and broadcast the result to (P,) + shape; None means zero."""
    p = points.shape[0]
    if func is None:
        return np.zeros((p,) + shape)
    value = np.asarray(func(points), dtype=float)
    target = (p,) + shape
    if value.shape == target:
        return value
    if value.ndim >= 1 and value.shape[0] == p and value.size == p * int(np.prod(shape)):
        return value.reshape(target)
    try:
        return np.broadcast_to(value, target)
    except ValueError:
        raise ValidationError(f"coefficient data of shape {value.shape} does not match {target}")


def constant(value) -> DataFunction:
    """Constant data function."""
    arr = np.asarray(value, dtype=float)

    def func(points):
        return np.broadcast_to(arr, (points.shape[0],) + arr.shape)

    return func


def zero(n: int = 1) -> DataFunction:
    return constant(np.zeros(n))


def isotropic(a: Scalar, n: int = 1) -> DataFunction:
    """Tensor a(x) * delta_ij * delta_kl."""
    eye = np.einsum("ij,kl->ikjl", np.eye(n), np.eye(2))

    def func(points):
        values = a(points) if callable(a) else np.full(points.shape[0], float(a))
        return np.asarray(values, dtype=float).reshape(-1)[:, None, None, None, None] * eye

    return func


def anisotropic(matrix, n: int = 1) -> DataFunction:
    """Tensor M_kl(x) * delta_ij with a 2x2 matrix (or a callable returning (P, 2, 2))."""
    eye = np.eye(n)

    def func(points):
        m = matrix(points) if callable(matrix) else np.broadcast_to(np.asarray(matrix, float), (points.shape[0], 2, 2))
        return np.einsum("ij,pkl->pikjl", eye, np.asarray(m, dtype=float))

    return func


@dataclass
class CoefficientField:
    """Per-subdomain tensor, flux and source plus per-interface data."""

    n: int
    tensor: Dict[int, DataFunction]
    flux: Dict[int, DataFunction] = field(default_factory=dict)
    source: Dict[int, DataFunction] = field(default_factory=dict)
    interface_data: Dict[int, DataFunction] = field(default_factory=dict)
    labels: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if int(self.n) < 1:
            raise ValidationError(f"component count must be positive, got {self.n}")
        self.n = int(self.n)

    @classmethod
    def laplacian(cls, tags, n: int = 1) -> "CoefficientField":
        return cls(n=n, tensor={int(t): isotropic(1.0, n) for t in tags}, labels={"tensor": "identity"})

    def tensor_at(self, tag: int, points) -> np.ndarray:
        if tag not in self.tensor:
            raise ValidationError(f"no tensor declared for subdomain {tag}")
        return evaluate_data(self.tensor[tag], _points(points), (self.n, 2, self.n, 2))

    def flux_at(self, tag: int, points) -> np.ndarray:
        return evaluate_data(self.flux.get(tag), _points(points), (self.n, 2))

    def source_at(self, tag: int, points) -> np.ndarray:
        return evaluate_data(self.source.get(tag), _points(points), (self.n,))

    def interface_at(self, curve_id: int, points) -> np.ndarray:
        return evaluate_data(self.interface_data.get(curve_id), _points(points), (self.n,))

    def with_interface_data(self, data: Dict[int, DataFunction]) -> "CoefficientField":
        return CoefficientField(self.n, dict(self.tensor), dict(self.flux), dict(self.source), dict(data),
                                dict(self.labels))

    def scaled(self, factor: float) -> "CoefficientField":
        """Same tensor; flux, source and interface data multiplied by ``factor``."""
        def scale(func):
            return lambda points: factor * np.asarray(func(points), dtype=float)
        return CoefficientField(
            self.n,
            dict(self.tensor),
            {t: scale(f) for t, f in self.flux.items()},
            {t: scale(f) for t, f in self.source.items()},
            {j: scale(g) for j, g in self.interface_data.items()},
            dict(self.labels),
        )


def matrix_form(tensor: np.ndarray) -> np.ndarray:
    """Reshape (P, n, 2, n, 2) tensors to (P, 2n, 2n) matrices acting on flattened xi[i, k]."""
    p, n = tensor.shape[0], tensor.shape[1]
    return tensor.reshape(p, 2 * n, 2 * n)


@dataclass(frozen=True)
class EllipticityReport:
    passed: bool
    kappa: float
    worst_ratio: float
    sampled_ratio: float
    worst_bound: float
    worst_subdomain: Optional[int]
    worst_point: Optional[tuple]
    samples: int


def _sample_subdomain(partition, tag: int, count: int, rng) -> np.ndarray:
    if tag == partition.outer_tag:
        from ..geometry.partition import BoxDomain
        if isinstance(partition.outer, BoxDomain):
            box = partition.outer
            lo, hi = np.array([box.xmin, box.ymin]), np.array([box.xmax, box.ymax])
        else:
            c, r = np.asarray(partition.outer.center), partition.outer.max_radius
            lo, hi = c - r, c + r
    else:
        curve = partition.curve(tag)
        c, r = np.asarray(curve.center), curve.max_radius
        lo, hi = c - r, c + r
    found = []
    total = 0
    for _ in range(200):
        cand = rng.uniform(lo, hi, size=(4 * count, 2))
        cand = cand[partition.locate(cand) == tag]
        found.append(cand)
        total += cand.shape[0]
        if total >= count:
            break
    pts = np.vstack(found)[:count]
    if pts.shape[0] == 0:
        raise ValidationError(f"could not sample subdomain {tag}")
    return pts


def verify_ellipticity(coeff: CoefficientField, kappa: float, partition, samples: int = 1000,
                       points_per_subdomain: int = 100, seed: int = 0) -> EllipticityReport:
    """
    Check strong ellipticity and boundedness on sampled points and matrices.

    The worst ratio is the smallest eigenvalue of the symmetrised 2n x 2n
    matrix over the sampled points, which is the infimum of
    A xi . xi / |xi|^2 over all xi. The sampled ratio is the minimum over
    ``samples`` random xi. The bound is the largest spectral norm of an
    n x n block A^{kl}.

    Returns:
        EllipticityReport; ``passed`` is False iff either inequality fails
    """
    kappa = validate_positive(kappa, "kappa")
    rng = np.random.default_rng(seed)
    worst_ratio, sampled_ratio, worst_bound = np.inf, np.inf, 0.0
    worst_tag, worst_point = None, None
    for tag in sorted(coeff.tensor):
        pts = _sample_subdomain(partition, tag, points_per_subdomain, rng)
        A = coeff.tensor_at(tag, pts)
        if not np.all(np.isfinite(A)):
            raise ValidationError(f"tensor of subdomain {tag} is not finite")
        M = matrix_form(A)
        sym = 0.5 * (M + np.transpose(M, (0, 2, 1)))
        eig = np.linalg.eigvalsh(sym)[:, 0]
        xi = rng.standard_normal((samples, 2 * coeff.n))
        quad = np.einsum("sa,pab,sb->ps", xi, M, xi) / np.einsum("sa,sa->s", xi, xi)[None, :]
        blocks = np.transpose(A, (0, 2, 4, 1, 3))  # (P, k, l, i, j)
        norms = np.linalg.norm(blocks, ord=2, axis=(-2, -1)).max(axis=(1, 2))
        k = int(np.argmin(eig))
        if eig[k] < worst_ratio:
            worst_ratio, worst_tag, worst_point = float(eig[k]), tag, tuple(pts[k])
        sampled_ratio = min(sampled_ratio, float(quad.min()))
        worst_bound = max(worst_bound, float(norms.max()))
    tol = 1e-12
    passed = worst_ratio >= kappa * (1.0 - tol) and worst_bound <= (1.0 + tol) / kappa
    if not passed:
        logger.warning(f"ellipticity check failed: ratio {worst_ratio:.4g}, bound {worst_bound:.4g}, kappa {kappa}")
    return EllipticityReport(passed, kappa, worst_ratio, sampled_ratio, worst_bound, worst_tag, worst_point, samples)
