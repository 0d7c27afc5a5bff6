import numpy as np
import pytest

from hmsurf.scherk import GeodesicTriangle, isosceles_triangle, scherk_problem, solve_scherk_triangle


@pytest.fixture(scope="module")
def sequence():
    return solve_scherk_triangle(isosceles_triangle(), caps=(0, 1, 2, 5), resolution=65)


def test_zero_cap_is_zero(sequence):
    assert np.all(sequence.solutions[0].unknowns == 0.0)


def test_caps_nondecreasing(sequence):
    assert all(r.converged for r in sequence.reports)
    assert sequence.is_nondecreasing()


def test_symmetry(sequence):
    for k in range(len(sequence.caps)):
        assert sequence.symmetry_defect(k) < 1e-6


def test_axis_increases_toward_A(sequence):
    dist, vals = sequence.axis_profile(-1)
    assert np.all(np.diff(dist) > 0)
    assert np.all(np.diff(vals) >= -1e-9)


def test_values_between_data(sequence):
    u = sequence.solutions[-1].unknowns
    assert np.all(u >= -1e-9) and np.all(u <= 5.0 + 1e-9)


def test_problem_data_layout():
    tri = isosceles_triangle()
    pb = scherk_problem(tri, 3.0, resolution=65)
    assert pb.g_bounds == (0.0, 3.0)
    assert len(pb.data.discontinuities) == 2
    assert pb.stencil.scheme == "monotone"


def test_caps_must_increase():
    with pytest.raises(ValueError):
        solve_scherk_triangle(isosceles_triangle(), caps=(2, 1), resolution=33)


def test_triangle_validation():
    with pytest.raises(ValueError):
        GeodesicTriangle(0j, 0.1 + 0j, 0.2 + 0j)
    with pytest.raises(ValueError):
        GeodesicTriangle(0j, 1.0 + 0j, 0.5j)
