"""
Tests for the auxiliary Neumann solves, the reduction pipeline, the direct
formulation and the interface-sign self-test.
"""

import numpy as np
import pytest

from interfem.src.analysis import disk_with_inclusion, error_vs_exact, flux_jump_residual, relative_difference
from interfem.src.config import SolverConfig, set_config
from interfem.src.exceptions import MissingAuxiliary, ValidationError
from interfem.src.fem import DiscreteField
from interfem.src.fem.assembly import assemble_mass_vector
from interfem.src.fem.coefficients import CoefficientField, constant, isotropic
from interfem.src.fem.orientation import get_orientation, is_pinned, set_orientation
from interfem.src.mesh import generate_fitted_mesh
from interfem.src.transmission import (
    TransmissionProblem,
    build_reduced_data,
    compatibility_constant,
    ensure_orientation,
    gap_problem,
    pin_orientation,
    solve_by_reduction,
    solve_direct,
    solve_inclusion_neumann,
    solve_multi,
    solve_with,
)


@pytest.fixture(scope="module")
def unit_inclusion():
    """Unit disk inclusion inside a disk of radius 2."""
    partition = disk_with_inclusion(1.0, 2.0)
    return partition, generate_fitted_mesh(partition, 0.15, seed=3)


def test_compatibility_constant_on_unit_disk(unit_inclusion):
    """Test c = 2 for g = 1 on the unit disk, on the curve and on the mesh."""
    partition, mesh = unit_inclusion
    g = constant([1.0])
    assert compatibility_constant(partition, 1, g) == pytest.approx(2.0, abs=1e-8)
    assert compatibility_constant(partition, 1, g, mesh) == pytest.approx(2.0, rel=1e-2)
    assert compatibility_constant(partition, 1, None) == 0.0


def test_compatibility_constant_follows_the_sign(unit_inclusion):
    """Test that flipping the interface sign flips c."""
    partition, _ = unit_inclusion
    set_orientation(1)
    assert compatibility_constant(partition, 1, constant([1.0])) == pytest.approx(-2.0, abs=1e-8)


def test_neumann_solution_matches_quadratic(unit_inclusion):
    """Test that g = 1 on the unit circle gives w = r^2 / 2 minus its mean."""
    partition, mesh = unit_inclusion
    aux = solve_inclusion_neumann(partition, mesh, 1, constant([1.0]))
    sub = aux.field.mesh
    mass = assemble_mass_vector(sub, 1)

    assert aux.constant[0] == pytest.approx(2.0, rel=1e-2)
    assert aux.curve_constant[0] == pytest.approx(2.0, abs=1e-8)
    assert abs(mass @ aux.field.values[:, 0]) < 1e-8
    assert aux.g_norm == pytest.approx(np.sqrt(2.0 * np.pi), rel=1e-8)
    assert aux.energy_ratio > 0

    exact = DiscreteField.interpolate(sub, lambda p: 0.5 * np.sum(p * p, axis=1), 1)
    exact = exact.with_values(exact.values - (mass @ exact.values) / mass.sum())
    assert relative_difference(aux.field, exact) < 0.05
    assert np.all(np.isin(aux.element_map, np.flatnonzero(mesh.tags == 1)))


def test_neumann_zero_data(unit_inclusion):
    """Test that missing interface data give w = 0 and c = 0."""
    partition, mesh = unit_inclusion
    aux = solve_inclusion_neumann(partition, mesh, 1, None)
    assert np.allclose(aux.field.values, 0.0)
    assert np.allclose(aux.constant, 0.0)
    assert aux.energy_ratio == 0.0


def test_reduced_data_needs_every_auxiliary(ms1, ms1_mesh):
    """Test MissingAuxiliary when an inclusion has no Neumann solution."""
    with pytest.raises(MissingAuxiliary) as exc:
        build_reduced_data(ms1.problem(), ms1_mesh, {})
    assert exc.value.error_code == "MISSING_AUXILIARY"


def test_reduction_agrees_with_direct(ms1, ms1_mesh):
    """Test that both solution paths reproduce MS-1 and agree with each other."""
    problem = ms1.problem()
    reduced = solve_by_reduction(problem, ms1_mesh)
    direct = solve_direct(problem, ms1_mesh)

    assert error_vs_exact(reduced.field, ms1).relative_h1 < 0.15
    assert error_vs_exact(direct.field, ms1).relative_h1 < 0.15
    assert relative_difference(reduced.field, direct.field) < 1e-3

    # int g = 0 for the cosine data
    assert abs(reduced.constants[1][0]) < 1e-8
    assert reduced.sigma == -1
    assert reduced.method == "reduction"
    assert set(reduced.timings) == {"auxiliary", "assembly", "global_solve"}
    assert reduced.energy_ratio > 0
    assert reduced.data_norm > problem.interface_norm(1) > 0
    assert flux_jump_residual(reduced.field, problem, 1).relative < 0.5
    assert "method: reduction" in reduced.to_text()


def test_reduction_is_linear_in_the_data(ms1, ms1_mesh):
    """Test that doubling F, f and g doubles the solution."""
    problem = ms1.problem()
    base = solve_by_reduction(problem, ms1_mesh)
    doubled = solve_by_reduction(problem.scaled(2.0), ms1_mesh)
    assert relative_difference(doubled.field, base.field * 2.0) < 1e-6


def test_reduction_order_two(ms1, ms1_mesh):
    """Test that the quadratic basis improves on the linear one."""
    problem = ms1.problem()
    p1 = error_vs_exact(solve_by_reduction(problem, ms1_mesh, order=1).field, ms1).h1
    p2 = error_vs_exact(solve_by_reduction(problem, ms1_mesh, order=2).field, ms1).h1
    assert p2 < p1


def test_solve_with_dispatch(ms1, ms1_mesh):
    """Test method dispatch and the unknown-method error."""
    report = solve_with("direct", ms1.problem(), ms1_mesh)
    assert report.method == "direct"
    assert report.auxiliary == {}
    with pytest.raises(ValidationError):
        solve_with("galerkin", ms1.problem(), ms1_mesh)


def test_multi_needs_three_subdomains(ms1, ms1_mesh):
    """Test that the multi-subdomain path rejects M = 2."""
    with pytest.raises(ValidationError):
        solve_multi(ms1.problem(), ms1_mesh)


def test_multi_on_nested_gap():
    """Test the multi-subdomain solve on two concentric interfaces."""
    problem = gap_problem(0.2)
    problem.validate()
    assert problem.interface_ids == [1, 2]
    mesh = generate_fitted_mesh(problem.partition, 0.08, seed=5)

    report = solve_multi(problem, mesh)
    direct = solve_direct(problem, mesh)
    assert report.method == "multi"
    assert set(report.gradient_bounds) == {1, 2, 3}
    assert set(report.constants) == {1, 2}
    assert relative_difference(report.field, direct.field) < 1e-3


def test_gap_problem_rejects_oversized_gap():
    """Test that the gap must fit inside the outer circle."""
    with pytest.raises(ValidationError):
        gap_problem(0.7)
    with pytest.raises(ValidationError):
        gap_problem(-0.1)


def test_problem_validation_flags_missing_tensor(ms1):
    """Test that every subdomain needs a tensor."""
    coeff = CoefficientField(n=1, tensor={1: isotropic(1.0)})
    with pytest.raises(ValidationError) as exc:
        TransmissionProblem(ms1.partition, coeff).validate()
    assert exc.value.error_code == "MISSING_TENSOR"


def test_pin_orientation_selects_derived_sign():
    """Test that the self-test pins sigma = -1 with well separated errors."""
    result = pin_orientation(0.1)
    assert result.sigma == -1
    assert result.errors[-1] < 0.3
    assert result.errors[1] > 2.0 * result.errors[-1]
    assert is_pinned()
    assert get_orientation() == -1


def test_ensure_orientation_respects_config():
    """Test that disabling the self-test keeps the derived sign unpinned."""
    set_config(SolverConfig(orientation_self_test=False))
    assert ensure_orientation() == -1
    assert not is_pinned()


if __name__ == "__main__":
    pytest.main([__file__])
