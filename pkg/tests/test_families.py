import math

import numpy as np
import pytest

from hmsurf.families import (DivergenceError, FamilyDomainError, catenoid_field, catenoid_height,
                             catenoid_profile, catenoid_profile_array, entire_family_field,
                             eval_entire_family, exterior_catenoid_field, exterior_catenoid_neck,
                             height_G, height_H, hyperbolic_family_field, invert_G, invert_H,
                             principal_curvatures_profile, profile_lambda, profile_lambda_array,
                             profile_second_derivative, profile_slope, sample_catenoid_profile,
                             sample_profile)
from hmsurf.geometry import DiskPoint, Geodesic, HalfPlanePoint
from hmsurf.operator import residual_disk

from oracles import elliptic_G, oracle_f, oracle_f_elliptic, oracle_profile

F1 = 1.3644961913128757
F001 = 0.05991422952808
G05 = 0.8428751774062804
RNG = np.random.default_rng(11)


def test_frozen_f_values():
    assert abs(oracle_f(1.0) - F1) < 1e-13
    assert abs(oracle_f_elliptic(1.0) - F1) < 1e-14
    assert abs(catenoid_height(1.0) - F1) <= catenoid_height(1.0).error
    assert abs(catenoid_height(0.01) - F001) < 1e-10
    assert abs(oracle_f_elliptic(0.01) - F001) < 1e-15


@pytest.mark.parametrize("rho", [0.05, 0.3, 2.0, 6.0])
def test_f_matches_closed_form(rho):
    est = catenoid_height(rho)
    assert abs(est - oracle_f_elliptic(rho)) <= est.error


@pytest.mark.parametrize("d", [0.05, 0.5, 0.9, 0.99])
def test_G_matches_closed_form(d):
    est = height_G(d)
    assert abs(est - elliptic_G(d)) <= est.error


def test_H_limits():
    assert abs(height_H(1e6) - 0.5 * math.pi) < 1e-5
    assert abs(catenoid_height(20.0) - 0.5 * math.pi) < 1e-6


def test_G_limits():
    assert height_G(1e-6) < 1e-4
    assert height_G(0.999999) > 5.0
    assert abs(height_G(0.5) - G05) < 1e-9


def test_H_refuses_near_one():
    with pytest.raises(DivergenceError):
        height_H(1.0 + 1e-7)
    with pytest.raises(FamilyDomainError):
        height_G(1.0)


def test_H_nonincreasing():
    vals = [height_H(d) for d in (1.5, 2.0, 5.0, 20.0)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_profile_d_equal_one():
    assert profile_lambda(1.0, 1.0) == pytest.approx(math.log((math.e - 1) / (math.e + 1)), abs=1e-15)
    assert profile_lambda(1.0, 1.0) == pytest.approx(-0.77194, abs=1e-5)


def test_profile_odd_for_small_d():
    assert profile_lambda(0.0, 0.5) == 0.0
    rho = RNG.uniform(0.0, 6.0, 50)
    for r in rho:
        assert profile_lambda(-r, 0.5) == -profile_lambda(r, 0.5)


def test_profile_normalization_and_limit():
    for d in (1.2, 2.0, 9.0):
        assert profile_lambda(math.acosh(d), d) == 0.0
    diff = float(height_H(2.0)) - float(profile_lambda(30.0, 2.0))
    assert 0 < diff < 1e-8


def test_profile_against_oracle():
    for rho, d in ((1.5, 1.2), (3.0, 2.0), (4.0, 10.0)):
        assert abs(profile_lambda(rho, d) - oracle_profile(rho, d)) < 1e-10


def test_profile_array_matches_scalar():
    rho = np.array([1.4, 2.0, 3.5, 1.32])
    arr = profile_lambda_array(rho, 2.0)
    ref = np.array([float(profile_lambda(r, 2.0)) for r in rho])
    assert np.max(np.abs(arr - ref)) < 1e-11
    arr = profile_lambda_array(np.array([-2.0, 0.3, 1.0]), 0.4)
    ref = np.array([float(profile_lambda(r, 0.4)) for r in (-2.0, 0.3, 1.0)])
    assert np.max(np.abs(arr - ref)) < 1e-11


def test_profile_domain_error():
    with pytest.raises(FamilyDomainError):
        profile_lambda(0.5, 2.0)


def test_slope_finite_differences():
    for _ in range(200):
        d = RNG.uniform(0.05, 5.0)
        lo = math.acosh(d) + 0.05 if d > 1 else -3.0
        rho = RNG.uniform(lo, lo + 3.0)
        h = 1e-4
        fd = (float(profile_lambda(rho + h, d, 1e-13)) - float(profile_lambda(rho - h, d, 1e-13))) / (2 * h)
        ex = float(profile_slope(rho, d))
        assert abs(fd - ex) / abs(ex) < 1e-6


def test_second_derivative_formula():
    for rho, d in ((1.0, 0.5), (2.0, 1.8), (0.4, 0.9)):
        h = 1e-5
        fd = (profile_slope(rho + h, d) - profile_slope(rho - h, d)) / (2 * h)
        assert fd == pytest.approx(profile_second_derivative(rho, d), rel=1e-7)


def test_principal_curvature_cancellation():
    for rho, d in ((1.0, 0.5), (2.0, 1.0), (3.0, 4.0), (math.acosh(4.0), 4.0)):
        k1, k2 = principal_curvatures_profile(rho, d)
        assert abs(k1 + k2) < 1e-9
    assert principal_curvatures_profile(1.0, 0.0) == (0.0, 0.0)


def test_explicit_values():
    p = HalfPlanePoint(1 / math.sqrt(2), 1 / math.sqrt(2))
    assert eval_entire_family("scherk_wedge", 1.0, p) == pytest.approx(math.log(math.sqrt(2) + 1), abs=1e-15)
    assert eval_entire_family("linear", 0.0, HalfPlanePoint(3.0, 2.0)) == 0.0
    for t in np.linspace(0.1, math.pi - 0.1, 7):
        q = HalfPlanePoint(math.cos(t), math.sin(t))
        assert abs(eval_entire_family("logarithmic", 2.0, q)) < 1e-15


def test_explicit_domain_errors():
    with pytest.raises(FamilyDomainError):
        eval_entire_family("scherk_wedge", 1.0, HalfPlanePoint(0.0, 1.0))
    with pytest.raises(FamilyDomainError):
        eval_entire_family("linear", 1.0, HalfPlanePoint(0.0, 0.0, at_infinity=True))
    with pytest.raises(ValueError):
        entire_family_field("cubic")


def test_hyperbolic_family_is_minimal():
    geo = Geodesic(0.4, 2.9)
    for d in (0.5, 1.0, 2.0):
        f = hyperbolic_family_field(geo, d)
        z = 0.85 * np.sqrt(RNG.random(300)) * np.exp(2j * np.pi * RNG.random(300))
        s = geo.signed_distance(z)
        keep = s > (math.acosh(d) + 0.1 if d > 1 else 0.1 if d == 1 else -np.inf)
        rep = residual_disk(f, (z[keep].real, z[keep].imag))
        assert np.max(np.abs(rep.normalized)) < 1e-8


def test_catenoid_is_minimal_and_tends_to_f():
    c = DiskPoint(0.2, -0.1)
    f = catenoid_field(c, 0.7)
    z = 0.9 * np.sqrt(RNG.random(200)) * np.exp(2j * np.pi * RNG.random(200))
    r = 2 * np.arctanh(np.abs((z - c.z) / (1 - np.conj(c.z) * z)))
    keep = r > 0.75
    rep = residual_disk(f, (z[keep].real, z[keep].imag))
    assert np.max(np.abs(rep.normalized)) < 1e-8
    assert 0 < float(catenoid_height(0.7)) - float(catenoid_profile(30.0, 0.7)) < 1e-10
    arr = catenoid_profile_array(np.array([0.7, 1.0, 5.0]), 0.7)
    assert arr[0] == 0.0 and abs(arr[2] - catenoid_profile(5.0, 0.7)) < 1e-11


def test_exterior_catenoid():
    t0 = 0.9 * F1
    c = exterior_catenoid_neck(1.0, t0)
    assert 0 < c < 1
    gap = float(catenoid_height(c)) - float(catenoid_profile(1.0, c))
    assert gap == pytest.approx(t0, abs=1e-11)
    f = exterior_catenoid_field(DiskPoint(0.0, 0.0), 1.0, t0)
    on = math.tanh(0.5)
    assert abs(f.value(on, 0.0)) < 1e-11
    assert abs(f.value(0.999999, 0.0) - t0) < 1e-4
    with pytest.raises(FamilyDomainError):
        exterior_catenoid_neck(1.0, F1 + 0.1)


def test_inversions():
    for d in (1.1, 3.0, 50.0):
        assert abs(invert_H(float(height_H(d))) - d) < 1e-6
    for d in (0.2, 0.7):
        assert abs(invert_G(float(height_G(d))) - d) < 1e-9
    with pytest.raises(FamilyDomainError):
        invert_H(1.0)


def test_sampled_profiles_and_meshes(tmp_path):
    prof = sample_profile(2.0, 4.0, n=20)
    assert np.all(np.diff(prof.lam) >= 0)
    assert prof.asymptotic_height == pytest.approx(float(height_H(2.0)))
    prof.to_csv(tmp_path / "p.csv")
    assert (tmp_path / "p.csv").read_text().splitlines()[0] == "rho,lambda"
    v, f = prof.translation_mesh(n_sweep=5)
    assert v.shape == (100, 3) and f.shape == (2 * 4 * 19, 3)
    cat = sample_catenoid_profile(0.5, 3.0, n=10)
    v, f = cat.revolution_mesh(n_sweep=6)
    assert np.all(np.hypot(v[:, 0], v[:, 1]) < 1) and f.max() < len(v)
