"""
Tests for quadrature, basis functions, assembly and the linear solvers.
"""

from math import factorial

import numpy as np
import pytest
from scipy import sparse

from interfem.src.analysis import ManufacturedSolution
from interfem.src.exceptions import IncompatibleData, ValidationError
from interfem.src.fem import (
    CoefficientField,
    DiscreteField,
    DofMap,
    SparseSystem,
    anisotropic,
    assemble_interface_load,
    assemble_mass_vector,
    assemble_stiffness,
    assemble_volume_load,
    basis_gradients,
    basis_values,
    constant,
    isotropic,
    line_rule,
    solve_dirichlet,
    solve_mean_zero,
    triangle_rule,
    verify_ellipticity,
)
from interfem.src.mesh import generate_fitted_mesh


@pytest.mark.parametrize("degree", [1, 2, 4, 6])
def test_triangle_rule_exactness(degree):
    """Test that the triangle rule integrates x^a y^b exactly up to its degree."""
    points, weights = triangle_rule(degree)
    assert weights.sum() == pytest.approx(0.5)
    for a in range(degree + 1):
        b = degree - a
        exact = factorial(a) * factorial(b) / factorial(a + b + 2)
        assert weights @ (points[:, 0] ** a * points[:, 1] ** b) == pytest.approx(exact, rel=1e-12)


def test_line_rule():
    """Test the Gauss rule on [0, 1]."""
    t, w = line_rule(4)
    assert w.sum() == pytest.approx(1.0)
    assert w @ t ** 7 == pytest.approx(1.0 / 8.0)
    with pytest.raises(ValidationError):
        line_rule(0)


@pytest.mark.parametrize("order", [1, 2])
def test_basis_partition_of_unity(order):
    """Test that basis values sum to one and gradients to zero."""
    ref, _ = triangle_rule(4)
    np.testing.assert_allclose(basis_values(order, ref).sum(axis=1), 1.0, atol=1e-14)
    np.testing.assert_allclose(basis_gradients(order, ref).sum(axis=1), 0.0, atol=1e-13)


@pytest.fixture(scope="module")
def disk():
    ms = ManufacturedSolution.ms_smooth()
    return ms, generate_fitted_mesh(ms.partition, 0.1, seed=3)


@pytest.mark.parametrize("order", [1, 2])
def test_mass_vector_sums_to_area(disk, order):
    """Test that the basis integrals sum to the mesh area."""
    _, mesh = disk
    assert assemble_mass_vector(mesh, order).sum() == pytest.approx(mesh.areas.sum(), rel=1e-12)


@pytest.mark.parametrize("order", [1, 2])
def test_stiffness_symmetric_with_constant_kernel(disk, order):
    """Test symmetry and that constants lie in the kernel."""
    ms, mesh = disk
    matrix = assemble_stiffness(mesh, ms.coeff, order)
    system = SparseSystem(mesh, order, 1, matrix, np.zeros(matrix.shape[0]))
    assert system.is_symmetric
    np.testing.assert_allclose(matrix @ np.ones(matrix.shape[0]), 0.0, atol=1e-10)


def test_stiffness_triplet_export(disk, tmp_path):
    """Test that the triplet file rebuilds the stiffness matrix bit for bit."""
    ms, mesh = disk
    matrix = assemble_stiffness(mesh, ms.coeff, 1)
    system = SparseSystem(mesh, 1, 1, matrix, np.zeros(matrix.shape[0]))
    path = system.write_triplets(tmp_path / "stiffness.txt")

    lines = path.read_text().splitlines()
    assert len(lines) == matrix.tocoo().nnz
    rows, cols = zip(*((int(r), int(c)) for r, c, _ in (line.split() for line in lines)))
    assert list(zip(rows, cols)) == sorted(zip(rows, cols))
    values = [float(line.split()[2]) for line in lines]
    rebuilt = sparse.csr_matrix((values, (rows, cols)), shape=matrix.shape)
    assert (rebuilt != matrix).nnz == 0


def test_stiffness_energy_of_linear_function(disk):
    """Test that x has Dirichlet energy equal to the area for the identity tensor."""
    ms, mesh = disk
    matrix = assemble_stiffness(mesh, ms.coeff, 1)
    x = mesh.nodes[:, 0]
    assert x @ matrix @ x == pytest.approx(mesh.areas.sum(), rel=1e-12)


def test_anisotropic_tensor_energy(disk):
    """Test the energy of y under an anisotropic tensor."""
    _, mesh = disk
    coeff = CoefficientField(n=1, tensor={1: anisotropic([[1.0, 0.0], [0.0, 3.0]]),
                                          2: anisotropic([[1.0, 0.0], [0.0, 3.0]])})
    matrix = assemble_stiffness(mesh, coeff, 1)
    y = mesh.nodes[:, 1]
    assert y @ matrix @ y == pytest.approx(3.0 * mesh.areas.sum(), rel=1e-12)


def test_interface_load_integrates_arc(disk):
    """Test that the interface load of g = 1 sums to sigma times the arc length."""
    _, mesh = disk
    curve = disk[0].partition.curve(1)
    load = assemble_interface_load(mesh, 1, constant([1.0]), order=1, sigma=1.0, curve=curve)
    assert load.sum() == pytest.approx(np.pi, rel=1e-10)
    chord = assemble_interface_load(mesh, 1, constant([1.0]), order=2, sigma=-1.0)
    assert -chord.sum() == pytest.approx(np.pi, rel=1e-2)
    assert -chord.sum() < np.pi


def test_volume_load_of_constant_source(disk):
    """Test that a constant source f gives a load summing to -f |Omega|."""
    ms, mesh = disk
    load = assemble_volume_load(mesh, ms.coeff, 1)
    assert load.sum() == pytest.approx(4.0 * mesh.areas.sum(), rel=1e-12)


@pytest.mark.parametrize("order,tolerance", [(1, 0.03), (2, 0.01)])
def test_dirichlet_poisson(disk, order, tolerance):
    """Test the Dirichlet solve of div grad u = -4 against u = 1 - r^2."""
    ms, mesh = disk
    system = SparseSystem(mesh, order, 1, assemble_stiffness(mesh, ms.coeff, order),
                          assemble_volume_load(mesh, ms.coeff, order))
    u = solve_dirichlet(system)
    assert u.solve_info.converged
    coords = DofMap(mesh, order).coordinates
    assert np.abs(u.values[:, 0] - ms.values(coords)[:, 0]).max() < tolerance
    assert np.all(u.values[DofMap(mesh, order).boundary_dofs] == 0.0)


def test_direct_and_cg_agree(disk):
    """Test that sparse LU and CG give the same field."""
    ms, mesh = disk
    system = SparseSystem(mesh, 1, 1, assemble_stiffness(mesh, ms.coeff, 1),
                          assemble_volume_load(mesh, ms.coeff, 1))
    a = solve_dirichlet(system, method="cg")
    b = solve_dirichlet(system, method="direct")
    np.testing.assert_allclose(a.values, b.values, atol=1e-8)


def test_mean_zero_rejects_incompatible_load(disk):
    """Test the solvability check of pure Neumann systems."""
    ms, mesh = disk
    matrix = assemble_stiffness(mesh, ms.coeff, 1)
    with pytest.raises(IncompatibleData):
        solve_mean_zero(SparseSystem(mesh, 1, 1, matrix, np.ones(matrix.shape[0])))


def test_mean_zero_solution_has_zero_mean(disk):
    """Test a compatible Neumann solve."""
    ms, mesh = disk
    matrix = assemble_stiffness(mesh, ms.coeff, 1)
    mass = assemble_mass_vector(mesh, 1)
    rhs = mass * mesh.nodes[:, 0]
    rhs -= mass * rhs.sum() / mass.sum()
    w = solve_mean_zero(SparseSystem(mesh, 1, 1, matrix, rhs), mass=mass)
    assert mass @ w.values[:, 0] == pytest.approx(0.0, abs=1e-10)


def test_field_interpolation_and_evaluation(disk):
    """Test interpolation of a linear function and pointwise evaluation."""
    _, mesh = disk
    field = DiscreteField.interpolate(mesh, lambda p: 2.0 * p[:, 0] - p[:, 1], order=2)
    points = np.array([[0.1, 0.2], [-0.6, 0.3]])
    np.testing.assert_allclose(field.values_at(points)[:, 0], [0.0, -1.5], atol=1e-12)
    np.testing.assert_allclose(field.gradients_at(points)[:, 0], [[2.0, -1.0], [2.0, -1.0]], atol=1e-10)


def test_field_rejects_wrong_size(disk):
    """Test DiscreteField shape validation."""
    _, mesh = disk
    with pytest.raises(ValidationError):
        DiscreteField(mesh, 1, np.zeros(mesh.node_count + 1))


def test_verify_ellipticity(disk):
    """Test the sampled ellipticity check."""
    ms, _ = disk
    coeff = CoefficientField(n=1, tensor={1: isotropic(0.5), 2: isotropic(2.0)})
    assert verify_ellipticity(coeff, 0.5, ms.partition, samples=200, points_per_subdomain=20).passed
    assert not verify_ellipticity(coeff, 0.9, ms.partition, samples=200, points_per_subdomain=20).passed


if __name__ == "__main__":
    pytest.main([__file__])
