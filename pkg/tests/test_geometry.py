import math

import numpy as np
import pytest

from hmsurf.geometry import (AsymptoticPointError, DiskPoint, DomainSpec, EAdmissibilityError,
                             EquidistantCurve, Geodesic, HalfPlanePoint, Isometry, RHO_MAX,
                             apply_isometry, disk_halfplane_convert, exterior_circle_radius,
                             exterior_equidistant_curvature, hyperbolic_distance,
                             signed_distance_to_geodesic)

O = DiskPoint(0.0, 0.0)
DIAMETER = Geodesic(0.0, math.pi)


def test_distance_examples():
    assert hyperbolic_distance(O, O) == 0.0
    assert hyperbolic_distance(O, DiskPoint(0.5, 0.0)) == pytest.approx(2 * math.atanh(0.5), abs=1e-15)
    assert hyperbolic_distance(O, DiskPoint(math.tanh(1.0), 0.0)) == pytest.approx(2.0, abs=1e-14)
    assert hyperbolic_distance(O, DiskPoint(0.5, 0.0)) == pytest.approx(1.0986122886681098, abs=1e-15)


def test_distance_rejects_ideal_points():
    with pytest.raises(AsymptoticPointError):
        hyperbolic_distance(O, DiskPoint.at_angle(0.3))


def test_point_validation():
    with pytest.raises(ValueError):
        DiskPoint(0.8, 0.8)
    with pytest.raises(ValueError):
        DiskPoint(0.5, 0.0, asymptotic=True)
    with pytest.raises(ValueError):
        HalfPlanePoint(0.0, -1.0)


def test_signed_distance_examples():
    p = DiskPoint(0.3, 0.0)
    assert signed_distance_to_geodesic(p, DIAMETER) == pytest.approx(0.0, abs=1e-15)
    q = DiskPoint(0.0, 0.5)
    assert signed_distance_to_geodesic(q, DIAMETER) == pytest.approx(2 * math.atanh(0.5), abs=1e-14)
    refl = apply_isometry(q, Isometry.reflection(DIAMETER))
    assert signed_distance_to_geodesic(refl, DIAMETER) == pytest.approx(-2 * math.atanh(0.5), abs=1e-14)


def test_positive_side_is_c1():
    g = Geodesic(1.0, 2.5)
    mid = DiskPoint.from_complex(0.95 * np.exp(1.75j))
    assert signed_distance_to_geodesic(mid, g) > 0


def test_translation_examples():
    p = DiskPoint(0.2, -0.4)
    same = apply_isometry(p, Isometry.translation(DIAMETER, 0.0))
    assert abs(same.z - p.z) < 1e-15
    for ell in (0.3, 1.0, 2.5):
        w = apply_isometry(O, Isometry.translation(DIAMETER, ell))
        assert w.x == pytest.approx(math.tanh(0.5 * ell), abs=1e-15)
        assert abs(w.y) < 1e-15


def test_isometry_maps_circle_to_circle():
    iso = Isometry.rotation(DiskPoint(0.3, 0.2), 1.1) @ Isometry.translation(Geodesic(0.4, 2.0), 0.7)
    th = np.linspace(0, 2 * math.pi, 50)
    assert np.allclose(np.abs(iso(np.exp(1j * th))), 1.0, atol=1e-14)


def test_conversion_examples():
    h = disk_halfplane_convert(O, "toHalfPlane")
    assert (h.x, h.y) == pytest.approx((0.0, 1.0), abs=1e-15)
    b = disk_halfplane_convert(DiskPoint(1.0, 0.0, asymptotic=True), "toHalfPlane")
    assert b.on_boundary and b.x == pytest.approx(1.0, abs=1e-15)
    pole = disk_halfplane_convert(DiskPoint(0.0, 1.0, asymptotic=True), "toHalfPlane")
    assert pole.at_infinity
    back = disk_halfplane_convert(pole, "toDisk")
    assert back.asymptotic and abs(back.z - 1j) < 1e-15
    p = DiskPoint(-0.3, 0.6)
    rt = disk_halfplane_convert(disk_halfplane_convert(p, "toHalfPlane"), "toDisk")
    assert abs(rt.z - p.z) < 1e-14
    with pytest.raises(ValueError):
        disk_halfplane_convert(p, "sideways")


def test_equidistant_curvature_is_tanh():
    e = EquidistantCurve(DIAMETER, 0.7)
    assert e.curvature == pytest.approx(math.tanh(0.7))
    with pytest.raises(ValueError):
        EquidistantCurve(DIAMETER, -1.0)


def test_exterior_circle_radius_examples():
    ext = DomainSpec.exterior_of_circle(O, 1.0)
    assert exterior_circle_radius(ext) >= 1.0 - 1e-6
    half = DomainSpec.half_plane(DIAMETER)
    assert exterior_circle_radius(half) == pytest.approx(RHO_MAX)
    # L-shaped geodesic polygon has a reflex corner
    verts = [DiskPoint(*v) for v in ((-0.4, -0.4), (0.4, -0.4), (0.4, 0.0), (0.0, 0.0),
                                     (0.0, 0.4), (-0.4, 0.4))]
    assert exterior_circle_radius(DomainSpec.geodesic_polygon(verts)) == 0.0


def test_exterior_circle_radius_needs_samples():
    with pytest.raises(ValueError):
        exterior_circle_radius(DomainSpec.whole_plane(), samples=8)


def test_exterior_equidistant_curvature_examples():
    assert exterior_equidistant_curvature(DomainSpec.half_plane(DIAMETER)) == pytest.approx(0.0, abs=1e-6)
    for r0 in (0.3, 0.8):
        dom = DomainSpec.equidistant_side(EquidistantCurve(DIAMETER, r0))
        assert exterior_equidistant_curvature(dom) == pytest.approx(r0, abs=1e-4)
    with pytest.raises(EAdmissibilityError):
        exterior_equidistant_curvature(DomainSpec.exterior_of_circle(O, 1.0))


def test_exterior_circle_monotone_under_shrinking():
    # exteriors of nested circles tangent at the same point
    big = DomainSpec.exterior_of_circle(O, 0.5)
    c = DiskPoint(math.tanh(0.5 * (1.5 - 0.5)), 0.0)
    small = DomainSpec.exterior_of_circle(c, 1.5)
    assert exterior_circle_radius(small) >= exterior_circle_radius(big) - 1e-6


def test_domain_json_round_trip():
    dom = DomainSpec.half_plane(Geodesic(0.5, 2.0))
    again = DomainSpec.from_json(dom.to_json())
    z = np.array([0.0, 0.9 * np.exp(1.2j), -0.5])
    assert np.array_equal(dom.contains(z), again.contains(z))
