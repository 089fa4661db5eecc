"""
Tests for interface curves and domain partitions.
"""

import numpy as np
import pytest

from interfem.src.exceptions import OutsideDomain, ValidationError
from interfem.src.geometry import INTERFACE, OUTSIDE, BoxDomain, DomainPartition, InterfaceCurve


def test_circle_measures():
    """Test length, area and normals of a circle."""
    curve = InterfaceCurve.circle(0.5)
    assert curve.length == pytest.approx(np.pi, rel=1e-10)
    assert curve.area == pytest.approx(0.25 * np.pi, rel=1e-10)
    normal = curve.inward_normal(np.array([0.0]))[0]
    np.testing.assert_allclose(normal, [-1.0, 0.0], atol=1e-12)


def test_ellipse_area_and_parameter():
    """Test ellipse area and the parameter inverse."""
    curve = InterfaceCurve.ellipse(0.6, 0.3, center=(0.1, -0.2))
    assert curve.area == pytest.approx(np.pi * 0.6 * 0.3, rel=1e-9)
    theta = np.array([0.3, 1.7, 4.0])
    np.testing.assert_allclose(curve.parameter_of(curve.point(theta)), theta, atol=1e-12)


def test_arclength_inverse():
    """Test that theta_at inverts arclength."""
    curve = InterfaceCurve.ellipse(0.6, 0.3)
    theta = np.array([0.5, 2.0, 5.5])
    np.testing.assert_allclose(curve.theta_at(curve.arclength(theta)), theta, atol=1e-9)


def test_boundary_quadrature_integrates_length():
    """Test the curve quadrature on constants and on x^2."""
    curve = InterfaceCurve.circle(0.5)
    quad = curve.boundary_quadrature(order=4, panels=64)
    assert quad.weights.sum() == pytest.approx(np.pi, rel=1e-12)
    # int x^2 ds on a circle of radius r is pi r^3
    assert quad.weights @ quad.points[:, 0] ** 2 == pytest.approx(np.pi * 0.125, rel=1e-10)


def test_boundary_quadrature_rejects_zero_order():
    """Test argument validation of the curve quadrature."""
    with pytest.raises(ValidationError):
        InterfaceCurve.circle(1.0).boundary_quadrature(order=0)


def test_perturbed_circle():
    """Test the perturbed circle stays simple and validates its amplitudes."""
    curve = InterfaceCurve.perturbed_circle(0.4, [(3, 0.05)], holder_exponent=0.5)
    assert curve.is_simple()
    assert curve.max_radius == pytest.approx(0.45, abs=1e-3)
    with pytest.raises(ValidationError):
        InterfaceCurve.perturbed_circle(0.1, [(2, 0.2)], holder_exponent=0.5)


def test_holder_quotient_smooth_curve_is_bounded():
    """Test that a circle's tangent quotient at alpha=1 is bounded by the curvature."""
    curve = InterfaceCurve.circle(0.5)
    assert curve.holder_quotient(alpha=1.0, pairs=2000) <= 2.0 + 1e-6


def test_invalid_curve_kind():
    """Test rejection of unknown curve kinds."""
    with pytest.raises(ValidationError):
        InterfaceCurve("square", base_radius=1.0)


def test_partition_locate_and_classify():
    """Test point location in the single-inclusion disk."""
    partition = DomainPartition(InterfaceCurve.circle(1.0), (InterfaceCurve.circle(0.5),)).validate()
    tags = partition.locate([[0.0, 0.0], [0.75, 0.0], [2.0, 0.0]])
    assert tags.tolist() == [1, 2, OUTSIDE]
    assert partition.classify_point([0.5, 0.0]) == INTERFACE
    assert partition.classify_point([0.2, 0.1]) == 1
    with pytest.raises(OutsideDomain):
        partition.classify_point([1.5, 0.0])


def test_partition_nested_structure():
    """Test parents, children, depth and subdomain areas of nested inclusions."""
    partition = DomainPartition(
        InterfaceCurve.circle(1.0),
        (InterfaceCurve.circle(0.3), InterfaceCurve.circle(0.6)),
        parents=(2, 0),
    ).validate()
    assert partition.subdomain_count == 3
    assert partition.outer_tag == 3
    assert partition.parent_tag(1) == 2
    assert partition.parent_tag(2) == 3
    assert partition.children(2) == [1]
    assert partition.depth(1) == 2
    assert partition.subdomain_area(2) == pytest.approx(np.pi * (0.36 - 0.09), rel=1e-8)
    assert partition.min_separation() == pytest.approx(0.3, abs=1e-3)
    assert partition.locate([[0.45, 0.0]])[0] == 2


def test_partition_rejects_overlap():
    """Test validation of touching or escaping inclusions."""
    escaping = DomainPartition(InterfaceCurve.circle(1.0), (InterfaceCurve.circle(0.5, center=(0.7, 0.0)),))
    with pytest.raises(ValidationError):
        escaping.validate()
    overlapping = DomainPartition(
        InterfaceCurve.circle(1.0),
        (InterfaceCurve.circle(0.3, center=(-0.2, 0.0)), InterfaceCurve.circle(0.3, center=(0.2, 0.0))),
    )
    with pytest.raises(ValidationError):
        overlapping.validate()


def test_partition_rejects_cycles():
    """Test cyclic containment detection."""
    with pytest.raises(ValidationError):
        DomainPartition(InterfaceCurve.circle(1.0),
                        (InterfaceCurve.circle(0.2), InterfaceCurve.circle(0.4)), parents=(2, 1))


def test_box_domain():
    """Test the rectangular outer domain."""
    box = BoxDomain(-1.0, 1.0, -0.5, 0.5)
    assert box.area == pytest.approx(2.0)
    partition = DomainPartition(box, (InterfaceCurve.ellipse(0.4, 0.2),)).validate()
    assert partition.locate([[0.9, 0.4]])[0] == partition.outer_tag
    assert partition.diameter == pytest.approx(np.sqrt(5.0))


def test_region_point_inside_subdomain():
    """Test that region_point lands in the requested subdomain."""
    partition = DomainPartition(InterfaceCurve.circle(1.0), (InterfaceCurve.circle(0.5),))
    for tag in partition.tags:
        assert partition.locate(partition.region_point(tag, 0.1)[None, :])[0] == tag


if __name__ == "__main__":
    pytest.main([__file__])
