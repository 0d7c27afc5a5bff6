import json
import math
from importlib import resources

import numpy as np
import pytest

from hmsurf.grid import BoundaryData, GridFunction, build_problem
from hmsurf.geometry import DomainSpec
from hmsurf.problem_io import (ProblemFormatError, data_piece, domain_from_json, load_problem,
                               oracle_error, oracle_field, problem_from_dict, solution_mesh,
                               write_obj, write_solution_csv)


def test_domain_shorthands():
    assert domain_from_json(None).components == ()
    assert domain_from_json({"kind": "whole_plane"}).components == ()
    ext = domain_from_json({"kind": "exterior_of_circle", "center": [0, 0], "radius": 1})
    assert not ext.contains(np.array([0j]))[0] and ext.contains(np.array([0.9 + 0j]))[0]
    disk = domain_from_json({"kind": "disk", "radius": 1})
    assert disk.contains(np.array([0j]))[0]
    half = domain_from_json({"kind": "half_plane", "geodesic": [0, math.pi]})
    assert half.contains(np.array([0.5j]))[0] and not half.contains(np.array([-0.5j]))[0]
    with pytest.raises(ProblemFormatError):
        domain_from_json({"kind": "torus"})


def test_data_pieces():
    th = np.array([-3.0, -1.0, 0.5, 2.0])
    assert np.all(data_piece(1.5)(th) == 1.5)
    lin = data_piece({"kind": "linear_in_angle", "a": 1.0, "b": 2.0})
    assert lin(np.array([-math.pi]))[0] == pytest.approx(1.0)
    pw = data_piece({"kind": "piecewise", "pieces": [{"from": -1.5707963267948966, "to": 1.5707963267948966,
                                                      "value": 1.0}], "default": 0.0})
    assert list(pw(th)) == [0.0, 1.0, 1.0, 0.0]
    ramp = data_piece({"kind": "piecewise", "pieces": [{"from": 0, "to": 1, "values": [0, 2]}],
                       "default": 0})
    assert ramp(np.array([0.5]))[0] == pytest.approx(1.0)
    tab = data_piece({"kind": "table", "theta": [0, math.pi], "values": [0, 1]})
    assert tab(np.array([0.5 * math.pi, 1.5 * math.pi])) == pytest.approx([0.5, 0.5])
    with pytest.raises(ProblemFormatError):
        data_piece({"kind": "piecewise", "pieces": [{"from": 0, "to": 1, "value": 1}]})(th)
    with pytest.raises(ProblemFormatError):
        data_piece({"kind": "family", "family": "linear"})
    with pytest.raises(ProblemFormatError):
        data_piece({"kind": "table", "theta": [0], "values": [1]})


def test_problem_from_dict_with_discontinuity():
    pb = problem_from_dict({
        "domain": {"kind": "whole_plane"},
        "boundary_data": {"asymptotic": {"kind": "piecewise", "pieces": [
            {"from": -1.5707963267948966, "to": 1.5707963267948966, "value": 1}], "default": 0},
            "lower": 0, "upper": 1},
        "discontinuities": [{"point": {"theta": 1.5707963267948966}, "A": 0, "B": 1},
                            {"point": [0, -1], "A": 0, "B": "inf"}],
        "resolution": 33, "name": "step"})
    assert pb.name == "step" and pb.grid.n == 33
    assert pb.data.discontinuities[1].B == math.inf
    assert pb.g_bounds == (0.0, 1.0)


def test_missing_field_and_bad_json(tmp_path):
    with pytest.raises(ProblemFormatError):
        problem_from_dict({"discontinuities": [{"point": [1, 0]}]})
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ProblemFormatError):
        load_problem(p)
    with pytest.raises(ProblemFormatError):
        problem_from_dict([])


def test_bundled_problem():
    path = resources.files("hmsurf") / "data" / "exterior_catenoid.json"
    obj = json.loads(path.read_text())
    assert obj["resolution"] == 129
    pb = problem_from_dict({**obj, "resolution": 33})
    assert pb.g_bounds[1] == pytest.approx(obj["boundary_data"]["asymptotic"])
    f = oracle_field(pb.oracle)
    assert abs(f.value(math.tanh(0.5), 0.0)) < 1e-10


def test_family_finite_data_and_oracle():
    pb = problem_from_dict({"domain": {"kind": "disk", "radius": 1.0},
                            "boundary_data": {"finite": {"kind": "family", "family": "linear", "ell": 1.0}},
                            "resolution": 33,
                            "oracle": {"kind": "family", "family": "linear", "ell": 1.0}})
    exact = GridFunction.sample(pb, oracle_field(pb.oracle).value)
    assert oracle_error(exact) == 0.0
    assert oracle_error(pb.constant_function(0.0)) > 0.0
    with pytest.raises(ProblemFormatError):
        oracle_field({"kind": "unknown"})
    assert oracle_error(build_problem(DomainSpec.whole_plane(), BoundaryData.constant(0.0), 33)
                        .constant_function(0.0)) is None


def test_csv_and_obj(tmp_path):
    pb = build_problem(DomainSpec.whole_plane(), BoundaryData.constant(0.25), 33)
    u = pb.constant_function(0.25)
    rows = write_solution_csv(u, tmp_path / "s.csv")
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "x,y,u" and len(lines) == rows + 1
    assert float(lines[1].split(",")[2]) == 0.25
    v, f = solution_mesh(u)
    assert v.shape[1] == 3 and f.min() >= 0 and f.max() < len(v)
    write_obj(v, f, tmp_path / "s.obj", comment="test mesh")
    text = (tmp_path / "s.obj").read_text().splitlines()
    assert text[0] == "# test mesh"
    faces = [l for l in text if l.startswith("f ")]
    assert len(faces) == len(f) and min(int(k) for l in faces for k in l.split()[1:]) == f.min() + 1
