"""JSON problem files, oracles and CSV / OBJ export.

A problem file holds::

    {"domain": <DomainSpec JSON or shorthand>,
     "boundary_data": {"asymptotic": <piece>, "finite": <piece> | [<piece>, ...]},
     "discontinuities": [{"point": [x, y] | {"theta": t}, "A": a, "B": b}],
     "resolution": 129,
     "tolerances": {"residual": 1e-8, "change": 1e-10},
     "oracle": {...}}

Domain shorthands: ``{"kind": "whole_plane"}``, ``{"kind":
"exterior_of_circle", "center": [x, y], "radius": r}``, ``{"kind": "disk",
...}`` and ``{"kind": "half_plane", "geodesic": [t1, t2], "side": s}``.

Data pieces (``theta`` is the angle on the ideal circle, or ``arg z`` on
finite components): a number; ``{"kind": "constant", "value": v}``;
``{"kind": "linear_in_angle", "a": a, "b": b, "start": t0}`` for
``a + b * ((theta - t0) mod 2 pi)``; ``{"kind": "piecewise", "pieces":
[{"from": t0, "to": t1, "value": v} | {..., "values": [v0, v1]}]}`` over
counterclockwise arcs; ``{"kind": "table", "theta": [...], "values":
[...]}`` interpolated periodically. Finite data may also be ``{"kind":
"family", "family": name, "ell": l}``, the values of an explicit entire
graph; its trace on the ideal circle is unbounded, so it is refused there.

Limits ``A``, ``B`` accept ``"inf"`` and ``"-inf"``.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .families import entire_family_field, exterior_catenoid_field
from .geometry import DiskPoint, DomainSpec, Geodesic
from .grid import BoundaryData, Discontinuity, GridFunction, Problem, build_problem
from .operator import ScalarField

__all__ = ["ProblemFormatError", "load_problem", "problem_from_dict", "domain_from_json",
           "data_piece", "oracle_field", "oracle_error", "write_solution_csv", "solution_mesh",
           "write_obj"]

TWO_PI = 2.0 * math.pi


class ProblemFormatError(ValueError):
    """Malformed problem or curve description."""


def _num(v) -> float:
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "+inf", "infinity"):
            return math.inf
        if s in ("-inf", "-infinity"):
            return -math.inf
    try:
        return float(v)
    except (TypeError, ValueError) as exc:
        raise ProblemFormatError(f"not a number: {v!r}") from exc


def _point(rec) -> complex:
    if isinstance(rec, dict):
        if "theta" in rec:
            return complex(np.exp(1j * _num(rec["theta"])))
        return complex(_num(rec["x"]), _num(rec["y"]))
    if isinstance(rec, (list, tuple)) and len(rec) == 2:
        return complex(_num(rec[0]), _num(rec[1]))
    raise ProblemFormatError(f"bad point {rec!r}")


def domain_from_json(obj) -> DomainSpec:
    """DomainSpec from its JSON form or one of the shorthands."""
    if obj is None:
        return DomainSpec.whole_plane()
    if not isinstance(obj, dict):
        raise ProblemFormatError("domain must be an object")
    kind = obj.get("kind")
    if kind is None:
        try:
            return DomainSpec.from_json(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise ProblemFormatError(f"bad domain: {exc}") from exc
    if kind == "whole_plane":
        return DomainSpec.whole_plane()
    if kind in ("exterior_of_circle", "disk"):
        c = _point(obj.get("center", [0.0, 0.0]))
        r = _num(obj["radius"])
        ctor = DomainSpec.exterior_of_circle if kind == "exterior_of_circle" else DomainSpec.disk
        return ctor(DiskPoint(c.real, c.imag), r)
    if kind == "half_plane":
        t1, t2 = (_num(t) for t in obj["geodesic"])
        return DomainSpec.half_plane(Geodesic(t1, t2), obj.get("side", "positive"))
    raise ProblemFormatError(f"unknown domain kind {kind!r}")


def _on_arc(theta, t0, t1):
    """Position in ``[0, 1]`` along the counterclockwise arc, NaN off it."""
    span = (t1 - t0) % TWO_PI or TWO_PI
    s = (theta - t0) % TWO_PI
    return np.where(s <= span, s / span, np.nan)


def data_piece(rec):
    """Vectorized ``g(theta)`` for one data piece."""
    if isinstance(rec, (int, float, str)):
        rec = {"kind": "constant", "value": rec}
    if not isinstance(rec, dict):
        raise ProblemFormatError(f"bad data piece {rec!r}")
    kind = rec.get("kind", "constant")
    if kind == "constant":
        v = _num(rec["value"])
        return lambda th: np.full(np.shape(th), v)
    if kind == "linear_in_angle":
        a, b = _num(rec.get("a", 0.0)), _num(rec["b"])
        t0 = _num(rec.get("start", -math.pi))
        return lambda th: a + b * ((np.asarray(th) - t0) % TWO_PI)
    if kind == "piecewise":
        pieces = []
        for p in rec["pieces"]:
            t0, t1 = _num(p["from"]), _num(p["to"])
            if "values" in p:
                v0, v1 = (_num(v) for v in p["values"])
            else:
                v0 = v1 = _num(p["value"])
            pieces.append((t0, t1, v0, v1))
        default = _num(rec["default"]) if "default" in rec else math.nan

        def piecewise(th):
            th = np.asarray(th, dtype=float)
            out = np.full(th.shape, np.nan)
            for t0, t1, v0, v1 in pieces:
                s = _on_arc(th, t0, t1)
                take = np.isnan(out) & np.isfinite(s)
                out = np.where(take, v0 + (v1 - v0) * s, out)
            out = np.where(np.isnan(out), default, out)
            if np.any(np.isnan(out)):
                raise ProblemFormatError("piecewise data does not cover every angle")
            return out
        return piecewise
    if kind == "table":
        t = np.asarray([_num(v) for v in rec["theta"]], dtype=float)
        v = np.asarray([_num(x) for x in rec["values"]], dtype=float)
        if t.size < 2 or t.size != v.size:
            raise ProblemFormatError("table needs matching theta and values (two or more)")
        return lambda th: np.interp(np.asarray(th, dtype=float) % TWO_PI, t % TWO_PI, v,
                                    period=TWO_PI)
    if kind == "family":
        raise ProblemFormatError("family traces on the ideal circle are unbounded; "
                                 "use a family as finite data on a bounded domain")
    raise ProblemFormatError(f"unknown data kind {kind!r}")


def _finite_data(rec):
    if isinstance(rec, dict) and rec.get("kind") == "family":
        field = entire_family_field(rec["family"], _num(rec.get("ell", 1.0))).to_disk()
        return lambda z, comp: field.value(np.real(z), np.imag(z))
    if isinstance(rec, list):
        fns = [data_piece(r) for r in rec]

        def per_component(z, comp):
            z = np.asarray(z, dtype=complex)
            comp = np.broadcast_to(np.asarray(comp), z.shape)
            out = np.full(z.shape, np.nan)
            for k, fn in enumerate(fns):
                sel = comp == k
                if np.any(sel):
                    out[sel] = fn(np.angle(z[sel]))
            return out
        return per_component
    fn = data_piece(rec)
    return lambda z, comp: fn(np.angle(np.asarray(z, dtype=complex)))


def problem_from_dict(obj: dict) -> Problem:
    """Build a :class:`Problem` from a parsed problem file."""
    if not isinstance(obj, dict):
        raise ProblemFormatError("problem must be a JSON object")
    try:
        domain = domain_from_json(obj.get("domain"))
        bd = obj.get("boundary_data", {})
        asym_rec = bd.get("asymptotic", 0.0)
        fin_rec = bd.get("finite", 0.0)
        discs = [Discontinuity(_point(d["point"]), _num(d["A"]), _num(d["B"]))
                 for d in obj.get("discontinuities", [])]
        data = BoundaryData(asymptotic=data_piece(asym_rec), finite=_finite_data(fin_rec),
                            discontinuities=tuple(discs),
                            lower=_num(bd["lower"]) if "lower" in bd else None,
                            upper=_num(bd["upper"]) if "upper" in bd else None,
                            description=bd)
        resolution = int(obj.get("resolution", 129))
        tol = {k: _num(v) for k, v in obj.get("tolerances", {}).items()}
        scheme = obj.get("scheme", "blend")
    except KeyError as exc:
        raise ProblemFormatError(f"missing field {exc}") from exc
    return build_problem(domain, data, resolution, tolerances=tol, oracle=obj.get("oracle"),
                         name=str(obj.get("name", "")), scheme=scheme)


def load_problem(path: Union[str, Path]) -> Problem:
    """Read a problem file."""
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"{path}: {exc}") from exc
    return problem_from_dict(obj)


def oracle_field(oracle: Optional[dict]) -> Optional[ScalarField]:
    """Disk-model closed-form solution named by a problem's ``oracle``.

    Kinds: ``{"kind": "exterior_catenoid", "center": [x, y], "rho": r,
    "t0": t}`` and ``{"kind": "family", "family": name, "ell": l}``.
    """
    if not oracle:
        return None
    kind = oracle.get("kind")
    if kind == "exterior_catenoid":
        c = _point(oracle.get("center", [0.0, 0.0]))
        return exterior_catenoid_field(DiskPoint(c.real, c.imag), _num(oracle["rho"]),
                                       _num(oracle["t0"]))
    if kind == "family":
        return entire_family_field(oracle["family"], _num(oracle.get("ell", 1.0))).to_disk()
    raise ProblemFormatError(f"unknown oracle kind {kind!r}")


def oracle_error(u: GridFunction, field: Optional[ScalarField] = None) -> Optional[float]:
    """Max ``|u - oracle|`` over the unknown nodes, or None without oracle."""
    field = oracle_field(u.problem.oracle) if field is None else field
    if field is None:
        return None
    st = u.problem.stencil
    with np.errstate(divide="ignore", invalid="ignore"):
        exact = field.value(st.x, st.y)
    return float(np.max(np.abs(u.unknowns - exact), initial=0.0))


def write_solution_csv(u: GridFunction, path, include_boundary: bool = True) -> int:
    """Write ``x, y, u`` rows for every defined node; returns the row count."""
    X, Y = u.problem.grid.mesh()
    ok = np.isfinite(u.values)
    if not include_boundary:
        ok &= u.problem.node_class == 0
    rows = 0
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "u"])
        for x, y, v in zip(X[ok], Y[ok], u.values[ok]):
            w.writerow([f"{x:.17e}", f"{y:.17e}", f"{v:.17e}"])
            rows += 1
    return rows


def solution_mesh(u: GridFunction):
    """Vertices ``(x, y, u)`` and triangles over grid cells whose four
    corners are defined."""
    v = u.values
    X, Y = u.problem.grid.mesh()
    ok = np.isfinite(v)
    vid = np.full(v.shape, -1, dtype=int)
    vid[ok] = np.arange(int(ok.sum()))
    verts = np.column_stack([X[ok], Y[ok], v[ok]])
    a, b = vid[:-1, :-1], vid[1:, :-1]
    c, d = vid[:-1, 1:], vid[1:, 1:]
    full = (a >= 0) & (b >= 0) & (c >= 0) & (d >= 0)
    a, b, c, d = a[full], b[full], c[full], d[full]
    faces = np.concatenate([np.column_stack([a, b, d]), np.column_stack([a, d, c])])
    return verts, faces


def write_obj(vertices, faces, path, comment: str = "") -> None:
    """Write a triangle mesh as OBJ (1-based faces, full-precision vertices)."""
    with open(path, "w") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        for x, y, t in np.asarray(vertices, dtype=float):
            fh.write(f"v {x:.17e} {y:.17e} {t:.17e}\n")
        for f in np.asarray(faces, dtype=int):
            fh.write("f " + " ".join(str(k + 1) for k in f) + "\n")
