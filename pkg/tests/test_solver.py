import math

import numpy as np
import pytest

from hmsurf.families import entire_family_field
from hmsurf.geometry import DiskPoint, DomainSpec
from hmsurf.grid import (ASYMPTOTIC_BOUNDARY, EXCLUDED, FINITE_BOUNDARY, INTERIOR, BoundaryData,
                         Discontinuity, DomainError, GridFunction, build_problem)
from hmsurf.solver import lift_on_disk, monotone_stage, newton_solve, solve


def _whole(g, n=33, **kw):
    return build_problem(DomainSpec.whole_plane(), BoundaryData(asymptotic=g), n, **kw)


def test_whole_plane_nodes_are_asymptotic():
    pb = _whole(lambda t: np.cos(t))
    cls = pb.node_class
    assert not np.any(cls == FINITE_BOUNDARY)
    R = np.abs(pb.grid.mesh()[0] + 1j * pb.grid.mesh()[1])
    on = np.abs(R - 1.0) < 1e-12
    assert np.all(cls[on] == ASYMPTOTIC_BOUNDARY)
    assert np.all(cls[R < 1 - 1e-12] == INTERIOR)


def test_exterior_problem_has_both_classes():
    dom = DomainSpec.exterior_of_circle(DiskPoint(0.0, 0.0), 1.0)
    pb = build_problem(dom, BoundaryData.constant(1.2, 0.0), 65)
    cr = pb.crossings
    assert np.any(cr["component"] >= 0) and np.any((cr["component"] < 0) & np.isfinite(cr["value"]))
    assert pb.g_bounds == (0.0, 1.2)


def test_resolution_floor():
    with pytest.raises(DomainError):
        _whole(lambda t: 0 * t, n=17)


def test_discontinuity_nodes_excluded():
    data = BoundaryData(asymptotic=lambda t: (np.abs(t) < 0.5 * math.pi).astype(float),
                        discontinuities=(Discontinuity(1j, 0.0, 1.0),), lower=0.0, upper=1.0)
    pb = build_problem(DomainSpec.whole_plane(), data, 65)
    assert len(pb.excluded_nodes) > 0
    for i, j in pb.excluded_nodes:
        assert pb.node_class[i, j] == EXCLUDED and pb.boundary_values[i, j] == 0.5


def test_constant_data_one_sweep():
    pb = _whole(lambda t: np.full(np.shape(t), 0.7))
    U, sweeps, conv, nondecr = monotone_stage(pb)
    assert conv and sweeps == 1 and np.all(U == 0.7)
    u, rep = solve(pb)
    assert rep.converged and np.all(u.unknowns == 0.7)


def test_monotone_stage_nondecreasing():
    pb = _whole(lambda t: 0.3 * np.sin(t) + 0.2 * np.cos(2 * t))
    trace = []
    U, sweeps, conv, nondecr = monotone_stage(pb, max_sweeps=3, trace=trace)
    assert nondecr
    assert all(t["min_change"] >= -1e-9 for t in trace)


def test_lift_fixed_points_and_subsolution():
    g = lambda t: 0.4 * np.cos(t)
    pb = _whole(g, n=65)
    u, rep = solve(pb)
    assert rep.converged
    lifted = lift_on_disk(u, DiskPoint(0.1, 0.05), 0.3)
    assert np.max(np.abs(lifted.unknowns - u.unknowns)) < 1e-8
    const = pb.constant_function(-0.4)
    assert np.max(np.abs(lift_on_disk(const, 0.0, 0.2).unknowns + 0.4)) < 1e-12
    # inf g is a subsolution; its lift cannot go down
    low = lift_on_disk(const, DiskPoint(0.0, 0.0), 0.25)
    assert np.all(low.unknowns >= const.unknowns - 1e-12)


def test_lift_outside_interior_rejected():
    dom = DomainSpec.exterior_of_circle(DiskPoint(0.0, 0.0), 0.5)
    pb = build_problem(dom, BoundaryData.constant(0.0, 0.0), 33)
    with pytest.raises(DomainError):
        lift_on_disk(pb.constant_function(0.0), 0.3, 0.4)


def test_newton_and_monotone_agree():
    pb = _whole(lambda t: 0.5 * np.cos(t) - 0.2 * np.sin(3 * t), n=65)
    a, ra = solve(pb, monotone_sweeps=0)
    b, rb = solve(pb, monotone_sweeps=3)
    assert ra.converged and rb.converged
    assert np.max(np.abs(a.unknowns - b.unknowns)) < 10 * 1e-8


def test_solution_within_bracket():
    pb = _whole(lambda t: np.tanh(3 * np.cos(t)), n=65)
    u, rep = solve(pb)
    assert rep.converged and rep.within_bracket
    assert np.max(np.abs(u.residuals())) < 1e-8


def test_rotational_equivariance():
    # the square lattice is invariant under a quarter turn
    g = lambda t: 0.4 * np.cos(t) + 0.3 * np.sin(2 * t) ** 2
    u1, _ = solve(_whole(g, n=65))
    u2, _ = solve(_whole(lambda t: g(t - 0.5 * math.pi), n=65))
    # u2(z) = u1(-i z): rotating node (i, j) a quarter turn gives (n-1-j, i)
    assert np.nanmax(np.abs(u2.values - np.rot90(u1.values, 1))) < 1e-7


def test_linear_family_convergence():
    # the linear graph on a bounded disk, whose data avoids the pole at infinity
    f = entire_family_field("linear", 1.0).to_disk()
    dom = DomainSpec.disk(DiskPoint(0.0, 0.0), 2.0)
    errs = []
    for n in (33, 65):
        pb = build_problem(dom, BoundaryData(finite=lambda z, k: f.value(z.real, z.imag)), n)
        u, rep = solve(pb, monotone_sweeps=0)
        assert rep.converged
        st = pb.stencil
        errs.append(np.max(np.abs(u.unknowns - f.value(st.x, st.y))))
    assert errs[1] < errs[0]
    assert math.log2(errs[0] / errs[1]) >= 1.0


def test_newton_reports_trace():
    pb = _whole(lambda t: np.cos(t))
    res = newton_solve(pb, np.zeros(pb.size))
    assert res.converged and res.trace and res.residual < 1e-8


def test_grid_function_interpolation():
    pb = _whole(lambda t: np.cos(t), n=65)
    lin = GridFunction.sample(pb, lambda x, y: 2 * x - y)
    z = np.array([0.1 + 0.2j, -0.33 + 0.05j])
    assert np.allclose(lin.interpolate(z), 2 * z.real - z.imag, atol=1e-12)
