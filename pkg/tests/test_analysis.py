"""
Tests for norms, flux residuals, Hoelder estimates, oscillation probes and
convergence rates.
"""

import numpy as np
import pytest

from interfem.src.analysis import (
    ManufacturedSolution,
    ball_quadrature,
    decay_fit,
    dini_modulus,
    error_vs_exact,
    fitted_order,
    flux_jump_residual,
    holder_seminorm,
    mean_oscillation,
    norms,
    observed_orders,
    probe_oscillation,
    relative_difference,
)
from interfem.src.exceptions import DegenerateLadder, EmptyRegion, ValidationError
from interfem.src.expressions import parse_expression
from interfem.src.fem import DiscreteField


def test_observed_and_fitted_orders():
    """Test rates on errors e = 3 h^2."""
    h = np.array([0.1, 0.05, 0.025, 0.0125])
    errors = 3.0 * h ** 2
    np.testing.assert_allclose(observed_orders(h, errors), 2.0, rtol=1e-12)
    assert fitted_order(h, errors) == pytest.approx(2.0, rel=1e-12)
    assert np.isnan(observed_orders([0.1, 0.05], [0.0, 0.0])[0])
    with pytest.raises(ValidationError):
        observed_orders([0.1], [1.0])


def test_ms1_is_consistent(ms1):
    """Test continuity and the conormal jump of the built-in solution."""
    assert ms1.check_continuity() < 1e-12
    assert ms1.check_jump() < 1e-12


def test_ms1_interface_data_value(ms1):
    """Test g = -(8/3) cos(theta) for unit coefficients."""
    theta = np.array([0.0, 1.0, 2.5])
    points = 0.5 * np.column_stack([np.cos(theta), np.sin(theta)])
    np.testing.assert_allclose(ms1.coeff.interface_at(1, points)[:, 0], -8.0 / 3.0 * np.cos(theta), rtol=1e-12)


def test_from_expressions_matches_builtin(ms1):
    """Test exact solutions given as expressions."""
    exact = {1: [parse_expression("x")], 2: [parse_expression("-(1/3)*(x - x/r^2)")]}
    parsed = ManufacturedSolution.from_expressions("ms1-text", ms1.partition, exact, ms1.coeff)
    points = np.array([[0.1, 0.2], [0.7, -0.3], [-0.2, 0.8]])
    np.testing.assert_allclose(parsed.values(points), ms1.values(points), atol=1e-13)
    np.testing.assert_allclose(parsed.gradients(points), ms1.gradients(points), atol=1e-12)


def test_from_expressions_requires_every_subdomain(ms1):
    """Test missing exact branches."""
    with pytest.raises(ValidationError):
        ManufacturedSolution.from_expressions("partial", ms1.partition, {1: [parse_expression("x")]}, ms1.coeff)


def test_norms_are_additive(ms1_mesh):
    """Test that per-subdomain squares add up to the global norms."""
    field = DiscreteField.interpolate(ms1_mesh, lambda p: p[:, 0] + 2.0 * p[:, 1], order=1)
    result = norms(field)
    assert result.l2_total ** 2 == pytest.approx(sum(v ** 2 for v in result.l2.values()))
    # |grad u|^2 = 5 on the polygonal domain
    assert result.h1_semi_total ** 2 == pytest.approx(5.0 * ms1_mesh.areas.sum(), rel=1e-12)


def test_interpolant_error_is_small(ms1, ms1_mesh):
    """Test error_vs_exact on the interpolant of the exact solution."""
    field = DiscreteField.interpolate(ms1_mesh, ms1.values, order=1)
    report = error_vs_exact(field, ms1)
    assert report.relative_h1 < 0.2
    assert report.norms.h1_semi[1] < 1e-10


def test_relative_difference(ms1_mesh):
    """Test the relative H1 difference of two fields."""
    a = DiscreteField.interpolate(ms1_mesh, lambda p: p[:, 0], order=1)
    assert relative_difference(a, a) == 0.0
    assert relative_difference(a * 1.1, a) == pytest.approx(0.1, rel=1e-10)


def test_flux_residual_of_interpolant(ms1, ms1_mesh):
    """Test that the recovered jump of the interpolant matches g only with the derived sign."""
    problem = ms1.problem()
    field = DiscreteField.interpolate(ms1_mesh, ms1.values, order=1)
    good = flux_jump_residual(field, problem, 1, sigma=-1)
    bad = flux_jump_residual(field, problem, 1, sigma=1)
    assert good.relative < 0.5
    assert bad.relative > 1.5
    assert good.data_norm == pytest.approx(8.0 / 3.0 * np.sqrt(np.pi / 2.0), rel=1e-2)


def test_holder_of_exact_gradient(ms1, ms1_mesh):
    """Test that the inner gradient is constant while the cross quotient is not."""
    estimate = holder_seminorm(ms1.gradients, ms1.partition, 1.0, mesh=ms1_mesh, pairs=2000, seed=4)
    assert estimate.per_subdomain[1] == pytest.approx(0.0, abs=1e-12)
    assert estimate.cross > 0.5
    assert estimate.cross_pairs > 0
    with pytest.raises(ValidationError):
        holder_seminorm(ms1.gradients, ms1.partition, 1.5, mesh=ms1_mesh)


def test_ball_quadrature_area():
    """Test the polar rule on an unclipped ball."""
    _, weights, _ = ball_quadrature([0.0, 0.0], 0.3)
    assert weights.sum() == pytest.approx(np.pi * 0.09, rel=1e-12)


def test_ball_quadrature_empty(ms1):
    """Test that a ball outside the domain is reported as empty."""
    with pytest.raises(EmptyRegion):
        ball_quadrature([3.0, 0.0], 0.1, ms1.partition)


def test_mean_oscillation_of_linear_gradient():
    """Test phi(x, r) = r / 2 for the gradient (x, 0)."""
    def gradient(points):
        return np.column_stack([points[:, 0], np.zeros(points.shape[0])])

    assert mean_oscillation(gradient, [0.2, -0.1], 0.4) == pytest.approx(0.2, rel=1e-10)


def test_probe_and_decay_fit():
    """Test the oscillation ladder and its log-log slope."""
    def gradient(points):
        return np.column_stack([points[:, 0], np.zeros(points.shape[0])])

    probe = probe_oscillation(gradient, [0.0, 0.0], r0=0.2, mu=0.5, levels=5)
    np.testing.assert_allclose(probe.radii, 0.2 * 0.5 ** np.arange(5))
    fit = decay_fit(probe)
    assert fit.beta == pytest.approx(1.0, abs=1e-8)
    assert fit.constant == pytest.approx(0.5, rel=1e-8)
    assert fit.points == 5


def test_decay_fit_degenerate():
    """Test that a vanishing gradient gives a degenerate ladder."""
    probe = probe_oscillation(lambda p: np.zeros((p.shape[0], 2)), [0.0, 0.0], r0=0.2, levels=5)
    with pytest.raises(DegenerateLadder):
        decay_fit(probe)


def test_one_sided_probe_needs_partition():
    """Test one-sided probe validation."""
    with pytest.raises(ValidationError):
        mean_oscillation(lambda p: p, [0.0, 0.0], 0.1, one_sided=True)


def test_dini_modulus(ms1):
    """Test the modulus of piecewise-constant and linear coefficients."""
    radii = [0.2, 0.1, 0.05]
    jump = dini_modulus(lambda p: np.where(ms1.partition.locate(p) == 1, 1.0, 4.0), ms1.partition, radii,
                        [[0.5, 0.0]])
    np.testing.assert_allclose(jump.omega, 0.0, atol=1e-12)
    slope = dini_modulus(lambda p: p[:, 0], ms1.partition, radii, [[0.0, 0.0]])
    np.testing.assert_allclose(slope.omega, 0.5 * np.array(radii), rtol=1e-10)
    assert slope.dini_integral() == pytest.approx(0.5 * (0.2 - 0.05), rel=1e-10)
    linear = dini_modulus(lambda p: p[:, 0], ms1.partition, radii, [[0.0, 0.0]], approximant="linear")
    np.testing.assert_allclose(linear.omega, 0.0, atol=1e-10)
    with pytest.raises(ValidationError):
        dini_modulus(lambda p: p[:, 0], ms1.partition, [3.0], [[0.0, 0.0]])


if __name__ == "__main__":
    pytest.main([__file__])
