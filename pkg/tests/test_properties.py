import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from hmsurf.classifier import classify, model_curve
from hmsurf.families import (catenoid_height, entire_family_field, height_G, height_H, invert_H,
                             profile_lambda)
from hmsurf.geometry import (DiskPoint, Geodesic, Isometry, apply_isometry, disk_halfplane_convert,
                             hyperbolic_distance, signed_distance_to_geodesic)
from hmsurf.operator import residual_disk

from curves import random_degree_zero
from oracles import elliptic_G, oracle_f_elliptic

FAST = settings(max_examples=60, deadline=None)

radius = st.floats(0.0, 0.97)
angle = st.floats(-math.pi, math.pi)


def point(r, t):
    return DiskPoint.from_complex(r * complex(math.cos(t), math.sin(t)))


@st.composite
def isometries(draw):
    kind = draw(st.sampled_from(["rotation", "translation", "reflection", "moving"]))
    t1 = draw(angle)
    t2 = t1 + draw(st.floats(0.1, 2 * math.pi - 0.1))
    geo = Geodesic(t1, t2)
    if kind == "rotation":
        return Isometry.rotation(point(draw(st.floats(0, 0.9)), draw(angle)), draw(angle))
    if kind == "translation":
        return Isometry.translation(geo, draw(st.floats(-3, 3)))
    if kind == "reflection":
        return Isometry.reflection(geo)
    return Isometry.moving_to_origin(point(draw(st.floats(0, 0.9)), draw(angle)).z)


@FAST
@given(radius, angle, radius, angle, isometries())
def test_distance_invariant_under_isometries(r1, t1, r2, t2, iso):
    p, q = point(r1, t1), point(r2, t2)
    d0 = hyperbolic_distance(p, q)
    d1 = hyperbolic_distance(apply_isometry(p, iso), apply_isometry(q, iso))
    assert abs(d0 - d1) < 1e-10 * max(1.0, d0)


def test_distance_invariance_bulk():
    rng = np.random.default_rng(1)
    n = 10_000
    z = 0.95 * np.sqrt(rng.random((2, n))) * np.exp(2j * np.pi * rng.random((2, n)))
    c = 0.9 * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
    a = rng.uniform(-np.pi, np.pi, n)

    def dist(p, q):
        return 2 * np.arctanh(np.abs(p - q) / np.abs(1 - np.conj(p) * q))
    iso = [Isometry.moving_to_origin(ci) @ Isometry.rotation_about_origin(ai) for ci, ai in zip(c, a)]
    w = np.array([[f(zz) for f, zz in zip(iso, row)] for row in z])
    d0 = dist(z[0], z[1])
    assert np.all(np.abs(d0 - dist(w[0], w[1])) < 1e-10 * np.maximum(1.0, d0))


@FAST
@given(radius, angle, angle, st.floats(0.1, 6.0), st.floats(-3, 3))
def test_signed_distance_invariant_along_geodesic(r, t, t1, span, ell):
    g = Geodesic(t1, t1 + span)
    p = point(r, t)
    moved = apply_isometry(p, Isometry.translation(g, ell))
    s0 = signed_distance_to_geodesic(p, g)
    assert abs(signed_distance_to_geodesic(moved, g) - s0) < 1e-10 * max(1.0, abs(s0))


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 0.999), angle)
def test_conversion_round_trip(r, t):
    p = point(r, t)
    back = disk_halfplane_convert(disk_halfplane_convert(p, "toHalfPlane"), "toDisk")
    assert abs(back.z - p.z) < 1e-13


def test_conversion_round_trip_bulk():
    rng = np.random.default_rng(2)
    for z in 0.999 * np.sqrt(rng.random(10_000)) * np.exp(2j * np.pi * rng.random(10_000)):
        p = DiskPoint.from_complex(z)
        assert abs(disk_halfplane_convert(disk_halfplane_convert(p, "toHalfPlane"), "toDisk").z - z) < 1e-13


@FAST
@given(st.floats(1.01, 1e4), st.floats(1.01, 1e4))
def test_H_nonincreasing_and_above_pi(a, b):
    lo, hi = sorted((a, b))
    assert float(height_H(lo)) >= float(height_H(hi))
    assert 2 * float(height_H(hi)) > math.pi


@FAST
@given(st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_G_nondecreasing(a, b):
    lo, hi = sorted((a, b))
    assert float(height_G(lo)) <= float(height_G(hi))


@FAST
@given(st.floats(0.01, 10.0), st.floats(0.01, 10.0))
def test_f_monotone_below_half_pi(a, b):
    lo, hi = sorted((a, b))
    flo, fhi = float(catenoid_height(lo)), float(catenoid_height(hi))
    assert flo <= fhi < 0.5 * math.pi


@FAST
@given(st.floats(0.02, 0.98), st.floats(1e-12, 1e-6))
def test_G_error_bound_honest(d, tol):
    est = height_G(d, tol)
    assert abs(float(est) - elliptic_G(d)) <= est.error


@FAST
@given(st.floats(0.02, 8.0), st.floats(1e-12, 1e-6))
def test_f_error_bound_honest(rho, tol):
    est = catenoid_height(rho, tol)
    assert abs(float(est) - oracle_f_elliptic(rho)) <= est.error


@FAST
@given(st.floats(0.01, 0.99), st.floats(0.0, 8.0))
def test_profile_odd(d, rho):
    assert float(profile_lambda(-rho, d)) == -float(profile_lambda(rho, d))


@settings(max_examples=30, deadline=None)
@given(st.floats(1.1, 50.0))
def test_inversion_round_trip(d):
    assert abs(invert_H(float(height_H(d))) - d) < 1e-6


@FAST
@given(st.floats(-3, 3), st.floats(-5, 5), st.floats(0.0, 0.9), angle)
def test_residual_translation_invariant(ell, c, r, t):
    f = entire_family_field("logarithmic", ell).to_disk()
    p = (np.array([r * math.cos(t)]), np.array([r * math.sin(t)]))
    a = residual_disk(f, p).residual
    b = residual_disk(f.shifted(c), p).residual
    m = residual_disk(f.negated(), p).residual
    assert np.array_equal(a, b)
    assert np.allclose(np.abs(m), np.abs(a), atol=1e-13)


@FAST
@given(st.integers(0, 2 ** 32 - 1), st.floats(-10, 10), st.floats(-5, 5))
def test_classifier_invariance(seed, rot, shift):
    rng = np.random.default_rng(seed)
    c = random_degree_zero(rng, math.pi - 0.01)
    base = classify(c)
    moved = classify(c.rotated(rot).translated(shift))
    assert base.decision == moved.decision == "NonexistentProper"


@settings(max_examples=15, deadline=None)
@given(st.floats(1.2, 30.0), angle, st.floats(0.3, 5.5), st.floats(-4, 4))
def test_model_curves_never_nonexistent(d, t1, span, m):
    v = classify(model_curve(d, t1, t1 + span, m))
    assert v.decision == "ExistsConstructive"
