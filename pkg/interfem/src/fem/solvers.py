"""
Linear solves

Dirichlet problems are reduced to the free dofs and solved with Jacobi
preconditioned conjugate gradients (GMRES when the matrix is not symmetric,
sparse LU on request). Pure Neumann problems are solved on the complement of
the constants: the right-hand side is corrected by the Lagrange multiplier of
the mean-zero constraint and the solution is shifted to zero mean.
"""

import logging
import time
from typing import Optional, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import LinearOperator, cg, gmres, spsolve

from .assembly import SparseSystem, assemble_mass_vector
from .basis import DofMap
from .field import DiscreteField, SolveInfo
from ..config import get_config
from ..exceptions import IncompatibleData, NoConvergence, ValidationError

logger = logging.getLogger(__name__)

SOLVER_METHODS = ("cg", "direct")


def _jacobi(matrix: sparse.csr_matrix) -> LinearOperator:
    diag = matrix.diagonal()
    inv = np.where(np.abs(diag) > 0, 1.0 / np.where(diag == 0, 1.0, diag), 1.0)
    return LinearOperator(matrix.shape, matvec=lambda x: inv * x, dtype=float)


def krylov_solve(matrix: sparse.csr_matrix, rhs: np.ndarray, method: Optional[str] = None,
                 tol: Optional[float] = None, max_iter: Optional[int] = None,
                 symmetric: bool = True) -> Tuple[np.ndarray, SolveInfo]:
    """
    Solve ``matrix @ x = rhs``.

    Args:
        method: "cg" (Krylov, the default) or "direct" (sparse LU)
        tol: Relative residual tolerance (default SolverConfig.tol_lin)
        max_iter: Iteration cap (default max_iter_factor * size)
        symmetric: GMRES replaces CG when False

    Returns:
        (solution, SolveInfo)

    Raises:
        NoConvergence: If the Krylov method stops before reaching ``tol``
    """
    config = get_config()
    method = (method or config.linear_solver).lower()
    if method not in SOLVER_METHODS:
        raise ValidationError(f"unknown linear solver {method!r}; expected one of {SOLVER_METHODS}")
    tol = config.tol_lin if tol is None else tol
    size = matrix.shape[0]
    max_iter = config.max_iter_factor * max(size, 1) if max_iter is None else max_iter
    start = time.perf_counter()
    norm_b = float(np.linalg.norm(rhs))
    if norm_b == 0.0 or size == 0:
        return np.zeros(size), SolveInfo(method, 0, 0.0, True, symmetric, elapsed=0.0)

    iterations = 0

    def count(_):
        nonlocal iterations
        iterations += 1

    if method == "direct":
        x = spsolve(matrix.tocsc(), rhs)
        info, name = 0, "direct"
    elif symmetric:
        x, info = cg(matrix, rhs, rtol=tol, atol=0.0, maxiter=max_iter, M=_jacobi(matrix), callback=count)
        name = "cg"
    else:
        logger.warning("matrix is not symmetric; using GMRES")
        x, info = gmres(matrix, rhs, rtol=tol, atol=0.0, restart=min(200, size), maxiter=max_iter,
                        M=_jacobi(matrix), callback=count, callback_type="pr_norm")
        name = "gmres"
    residual = float(np.linalg.norm(matrix @ x - rhs) / norm_b)
    elapsed = time.perf_counter() - start
    if info != 0:
        raise NoConvergence(f"{name} stopped after {iterations} iterations with relative residual {residual:.3e}",
                            iterations=iterations, residual=residual)
    logger.debug(f"{name}: {size} unknowns, {iterations} iterations, residual {residual:.3e}, {elapsed:.3f}s")
    return x, SolveInfo(name, iterations, residual, True, symmetric, elapsed=elapsed)


def solve_dirichlet(system: SparseSystem, boundary_dofs: Optional[np.ndarray] = None,
                    method: Optional[str] = None, tol: Optional[float] = None,
                    max_iter: Optional[int] = None) -> DiscreteField:
    """
    Solve with homogeneous Dirichlet conditions.

    Args:
        system: Assembled matrix and load
        boundary_dofs: Scalar dofs fixed to zero (default: the outer boundary)

    Returns:
        DiscreteField with exactly zero boundary values

    Raises:
        NoConvergence: If the solve does not reach the tolerance within max_iter
    """
    n = system.n
    dofmap = DofMap(system.mesh, system.order)
    fixed_scalar = dofmap.boundary_dofs if boundary_dofs is None else np.asarray(boundary_dofs, dtype=np.int64)
    fixed = (fixed_scalar[:, None] * n + np.arange(n)).ravel()
    free = np.ones(system.size, dtype=bool)
    free[fixed] = False
    matrix = system.matrix[free][:, free]
    x_free, info = krylov_solve(matrix.tocsr(), system.rhs[free], method, tol, max_iter, system.is_symmetric)
    values = np.zeros(system.size)
    values[free] = x_free
    logger.info(f"dirichlet solve: {int(free.sum())} free unknowns, method {info.method}, "
                f"{info.iterations} iterations")
    return DiscreteField(system.mesh, system.order, values.reshape(-1, n), info)


def solve_mean_zero(system: SparseSystem, mass: Optional[np.ndarray] = None,
                    tol_compat: Optional[float] = None, method: Optional[str] = None,
                    tol: Optional[float] = None) -> DiscreteField:
    """
    Solve a pure Neumann system under the constraint int w = 0 per component.

    The multiplier of the constraint is lambda_i = (1^T b_i) / (1^T m); the
    system K w = b - lambda m is consistent and is solved on the complement
    of the constants.

    Raises:
        IncompatibleData: If |1^T b_i| > tol_compat * ||b|| for some component
    """
    config = get_config()
    tol_compat = config.tol_compat if tol_compat is None else tol_compat
    n = system.n
    mass = assemble_mass_vector(system.mesh, system.order) if mass is None else np.asarray(mass, dtype=float)
    b = system.rhs.reshape(-1, n)
    norm_b = float(np.linalg.norm(system.rhs))
    totals = b.sum(axis=0)
    if norm_b > 0 and np.any(np.abs(totals) > tol_compat * norm_b):
        raise IncompatibleData(
            f"Neumann data violate solvability: sum of load {totals.tolist()} against norm {norm_b:.3e}",
            error_code="INCOMPATIBLE_DATA",
            details={"totals": totals.tolist(), "norm": norm_b},
        )
    multiplier = totals / mass.sum()
    projected = (b - mass[:, None] * multiplier[None, :]).ravel()
    x, info = krylov_solve(system.matrix, projected, method, tol, None, system.is_symmetric)
    w = x.reshape(-1, n)
    w = w - (mass @ w)[None, :] / mass.sum()
    info = SolveInfo(info.method, info.iterations, info.residual, info.converged, info.symmetric,
                     multiplier=multiplier, elapsed=info.elapsed)
    return DiscreteField(system.mesh, system.order, w, info)
