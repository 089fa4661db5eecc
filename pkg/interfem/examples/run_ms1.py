"""
Solve MS-1 by both solution paths on a small refinement ladder and print the
errors, the relative difference of the two paths and the observed orders.

Usage:
    python -m interfem.examples.run_ms1
"""

from interfem import ManufacturedSolution, error_vs_exact, generate_fitted_mesh, refine, solve_by_reduction, solve_direct
from interfem.src.analysis import observed_orders, relative_difference
from interfem.src.utils.logging import setup_logging


def main(levels: int = 3, h0: float = 0.1):
    setup_logging("INFO")
    ms = ManufacturedSolution.ms1()
    problem = ms.problem()
    mesh = generate_fitted_mesh(ms.partition, h0)
    h, errors = [], []
    for level in range(levels):
        reduced = solve_by_reduction(problem, mesh)
        direct = solve_direct(problem, mesh)
        error = error_vs_exact(reduced.field, ms)
        h.append(mesh.h)
        errors.append(error.h1)
        print(f"level {level}: h={mesh.h:.4f} H1 error={error.h1:.4e} "
              f"reduction vs direct={relative_difference(reduced.field, direct.field):.2e}")
        mesh = refine(mesh, ms.partition)
    print("observed H1 orders:", observed_orders(h, errors))


if __name__ == "__main__":
    main()
