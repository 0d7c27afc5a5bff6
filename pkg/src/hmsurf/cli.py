"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 classifier error. Numbers are printed in full-precision scientific
notation; ``--pretty`` switches to aligned tables and indented JSON.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import __version__

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_CLASSIFY = 0, 1, 2, 3
DEFAULT_SEED = 20240611
_MARK = "@f17e@"


class UsageError(Exception):
    """Bad arguments or malformed input."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17e}"


def _mark(obj):
    if isinstance(obj, dict):
        return {str(k): _mark(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_mark(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return _MARK + _fmt(x) if math.isfinite(x) else _fmt(x)
    if isinstance(obj, complex):
        return [_mark(obj.real), _mark(obj.imag)]
    return obj


def dumps(obj, pretty: bool = False) -> str:
    """JSON with floats in ``%.17e``; non-finite values become strings."""
    text = json.dumps(_mark(obj), indent=2 if pretty else None, sort_keys=False)
    return re.sub('"' + _MARK + '([^"]*)"', r"\1", text)


def _floats(text: str) -> List[float]:
    """``a,b,c`` or ``start:stop:count`` (geometric when prefixed ``geom:``)."""
    try:
        if text.startswith("geom:"):
            a, b, n = text[5:].split(":")
            return list(np.geomspace(float(a), float(b), int(n)))
        if ":" in text:
            a, b, n = text.split(":")
            return list(np.linspace(float(a), float(b), int(n)))
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def _table(header, rows) -> str:
    cells = [list(header)] + [[_fmt(v) if isinstance(v, float) else str(v) for v in r]
                              for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells)


# ---------------------------------------------------------------------------
# subcommands

def cmd_height(args, out) -> int:
    from .families import catenoid_height, height_G, height_H

    fam = args.family
    if fam == "f":
        values = _floats(args.sweep) if args.sweep else [args.rho]
        fn, pname = catenoid_height, "rho"
    else:
        values = _floats(args.sweep) if args.sweep else [args.d]
        fn, pname = (height_H if fam == "H" else height_G), "d"
    if any(v is None for v in values):
        raise UsageError(f"--{pname} or --sweep is required for family {fam}")
    rows = []
    for v in values:
        est = fn(float(v), args.tol)
        rows.append((float(v), float(est), float(est.error)))
    if args.pretty:
        print(_table((pname, f"{fam}({pname})", "error_bound"), rows), file=out)
    else:
        for r in rows:
            print(" ".join(_fmt(x) for x in r), file=out)
    return EXIT_OK


def cmd_profile(args, out) -> int:
    from .families import sample_catenoid_profile, sample_profile

    if args.neck is not None:
        prof = sample_catenoid_profile(args.neck, args.rho_max, args.n)
    elif args.d is not None:
        prof = sample_profile(args.d, args.rho_max, args.n, args.rho_min)
    else:
        raise UsageError("profile needs --d or --neck")
    if args.out:
        prof.to_csv(args.out)
    summary = {"family": prof.family, "parameter": prof.parameter, "samples": len(prof.rho),
               "asymptotic_height": prof.asymptotic_height, "out": args.out}
    if not args.out:
        for r, l in zip(prof.rho, prof.lam):
            print(f"{_fmt(r)} {_fmt(l)}", file=out)
    else:
        print(dumps(summary, args.pretty), file=out)
    return EXIT_OK


def _residual_field(args, rng, n):
    """Field and ``n`` sample points (in the field's model, inside its
    domain of definition)."""
    from .families import catenoid_field, entire_family_field, hyperbolic_family_field
    from .geometry import DiskPoint, Geodesic, Isometry

    fam = args.family
    if fam in ("linear", "logarithmic", "scherk"):
        kind = "scherk_wedge" if fam == "scherk" else fam
        field = entire_family_field(kind, args.ell)
        x = rng.uniform(0.05 if fam == "scherk" else -3.0, 3.0, n)
        y = rng.uniform(0.05, 3.0, n)
        return field, x, y
    if fam == "catenoid":
        field = catenoid_field(DiskPoint(0.0, 0.0), args.rho)
        r = np.tanh(0.5 * (args.rho + rng.uniform(1e-3, 4.0, n)))
    elif fam == "hyperbolic":
        field = hyperbolic_family_field(Geodesic(0.0, math.pi), args.d)
        base = math.acosh(args.d) if args.d > 1 else -4.0
        sigma = rng.uniform(base + 1e-3, 4.0, n)
        t = rng.uniform(-2.0, 2.0, n)
        # point at signed distance sigma from the real diameter, translated by t
        geo = Geodesic(0.0, math.pi)
        z = np.array([complex(Isometry.translation(geo, tk)(1j * math.tanh(0.5 * s)))
                      for s, tk in zip(sigma, t)])
        return field, z.real, z.imag
    else:
        raise UsageError(f"unknown family {fam!r}")
    ang = rng.uniform(0.0, 2.0 * math.pi, n)
    return field, r * np.cos(ang), r * np.sin(ang)


def cmd_residual(args, out) -> int:
    from .operator import residual_disk, residual_halfplane

    rng = np.random.default_rng(args.seed)
    field, x, y = _residual_field(args, rng, args.samples)
    rep = residual_halfplane(field, (x, y)) if field.model == "halfplane" else \
        residual_disk(field, (x, y))
    res = {"family": args.family, "model": field.model, "samples": int(args.samples),
           "seed": int(args.seed),
           "max_abs_residual": float(np.max(np.abs(rep.residual))),
           "max_abs_normalized_residual": float(np.max(np.abs(rep.normalized))),
           "max_W": float(np.max(rep.W))}
    if args.csv:
        from .operator import reports_to_csv
        reports_to_csv(rep, args.csv)
    print(dumps(res, args.pretty), file=out)
    return EXIT_OK


def cmd_solve(args, out) -> int:
    from .problem_io import (ProblemFormatError, oracle_error, problem_from_dict, solution_mesh,
                             write_obj, write_solution_csv)
    from .solver import solve
    from .verify import verify_solution

    try:
        obj = json.loads(Path(args.problem).read_text())
        if args.resolution:
            obj["resolution"] = args.resolution
        problem = problem_from_dict(obj)
    except (OSError, json.JSONDecodeError, ProblemFormatError) as exc:
        raise UsageError(str(exc)) from exc
    u, rep = solve(problem)
    ver = verify_solution(u)
    report = {"problem": problem.name or str(args.problem), "resolution": problem.grid.n,
              "unknowns": problem.size, "status": rep.status, "converged": rep.converged,
              "residual": rep.residual, "newton_iterations": rep.newton_iterations,
              "monotone_sweeps": rep.monotone_sweeps, "bracket": list(rep.bracket),
              "verification": ver.to_dict()}
    err = oracle_error(u)
    if err is not None:
        report["oracle"] = {"definition": problem.oracle, "max_error": err}
    if args.out:
        report["rows_written"] = write_solution_csv(u, args.out)
    if args.obj:
        verts, faces = solution_mesh(u)
        write_obj(verts, faces, args.obj, "solution mesh: x y u")
    print(dumps(report, args.pretty), file=out)
    return EXIT_OK if (rep.converged and ver.passed) else EXIT_VERIFY


def cmd_scherk(args, out) -> int:
    from .scherk import ScherkError, isosceles_triangle, solve_scherk_triangle

    caps = _floats(args.caps)
    tri = isosceles_triangle(args.apex, args.base, args.half_width)
    try:
        seq = solve_scherk_triangle(tri, caps, args.resolution)
    except ScherkError as exc:
        print(dumps({"error": str(exc)}, args.pretty), file=out)
        return EXIT_VERIFY
    _, axis = seq.axis_profile()
    axis_ok = bool(np.all(np.diff(axis) >= -1e-9))
    sym = seq.symmetry_defect()
    res = {"caps": caps, "resolution": args.resolution, "nondecreasing": seq.is_nondecreasing(),
           "symmetry_defect": sym, "axis_nondecreasing_toward_A": axis_ok,
           "residuals": [r.residual for r in seq.reports],
           "axis_values": list(axis)}
    if args.out:
        from .problem_io import write_solution_csv
        write_solution_csv(seq.solutions[-1], args.out)
    print(dumps(res, args.pretty), file=out)
    ok = res["nondecreasing"] and sym < 1e-6 and axis_ok
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_classify(args, out) -> int:
    from .classifier import ClassifierError, classify, load_curve

    try:
        curve, domain = load_curve(args.curve)
        verdict = classify(curve, domain, eps_w=args.eps_w, confirm=args.confirm,
                           resolution=args.resolution)
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    except ClassifierError as exc:
        print(dumps({"error": str(exc)}, args.pretty), file=out)
        return EXIT_CLASSIFY
    print(dumps(verdict.to_dict(), args.pretty), file=out)
    return EXIT_OK


def cmd_mesh(args, out) -> int:
    from .families import sample_catenoid_profile, sample_profile
    from .problem_io import write_obj

    if args.family == "catenoid":
        if args.rho is None:
            raise UsageError("catenoid mesh needs --rho (neck radius)")
        prof = sample_catenoid_profile(args.rho, args.rho_max, args.n)
        verts, faces = prof.revolution_mesh(args.sweep)
    else:
        if args.d is None:
            raise UsageError("hyperbolic mesh needs --d")
        prof = sample_profile(args.d, args.rho_max, args.n)
        verts, faces = prof.translation_mesh(args.sweep, args.extent)
    write_obj(verts, faces, args.out, f"{prof.family} parameter {_fmt(prof.parameter)}; "
              "vertices x y t (disk coordinates, height third); qualitative")
    print(dumps({"out": args.out, "vertices": len(verts), "faces": len(faces)}, args.pretty),
          file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hmsurf", description="Minimal vertical graphs in H^2 x R.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--pretty", action="store_true", help="human-readable output")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp):
        sp.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS,
                        help="human-readable output")

    h = sub.add_parser("height", help="heights H(d), G(d) or f(rho)")
    h.add_argument("--family", choices=("H", "G", "f"), required=True)
    h.add_argument("--d", type=float)
    h.add_argument("--rho", type=float)
    h.add_argument("--sweep", help="a,b,c or start:stop:count or geom:start:stop:count")
    h.add_argument("--tol", type=float, default=1e-10)
    common(h)
    h.set_defaults(func=cmd_height)

    pr = sub.add_parser("profile", help="sample a generating curve to CSV")
    pr.add_argument("--d", type=float)
    pr.add_argument("--neck", type=float, help="catenoid neck radius instead of --d")
    pr.add_argument("--rho-max", type=float, required=True)
    pr.add_argument("--rho-min", type=float)
    pr.add_argument("--n", type=int, default=200)
    pr.add_argument("--out")
    common(pr)
    pr.set_defaults(func=cmd_profile)

    r = sub.add_parser("residual", help="max residual of a closed-form family")
    r.add_argument("--family", choices=("linear", "logarithmic", "scherk", "catenoid",
                                        "hyperbolic"), required=True)
    r.add_argument("--ell", type=float, default=1.0)
    r.add_argument("--d", type=float, default=2.0)
    r.add_argument("--rho", type=float, default=1.0)
    r.add_argument("--samples", type=int, default=1000)
    r.add_argument("--seed", type=int, default=DEFAULT_SEED)
    r.add_argument("--csv", help="write point, residual, W rows")
    common(r)
    r.set_defaults(func=cmd_residual)

    s = sub.add_parser("solve", help="solve and verify a problem file")
    s.add_argument("problem")
    s.add_argument("--out", help="CSV of x, y, u")
    s.add_argument("--obj", help="OBJ mesh of the solution")
    s.add_argument("--resolution", type=int)
    common(s)
    s.set_defaults(func=cmd_solve)

    sc = sub.add_parser("scherk", help="capped Scherk sequence on an isosceles triangle")
    sc.add_argument("--apex", type=float, default=0.5)
    sc.add_argument("--base", type=float, default=-0.3)
    sc.add_argument("--half-width", type=float, default=0.45)
    sc.add_argument("--caps", default="1,2,4,8,16")
    sc.add_argument("--resolution", type=int, default=97)
    sc.add_argument("--out", help="CSV of the last capped solution")
    common(sc)
    sc.set_defaults(func=cmd_scherk)

    c = sub.add_parser("classify", help="verdict for an asymptotic curve")
    c.add_argument("curve")
    c.add_argument("--eps-w", type=float, default=1e-9)
    c.add_argument("--confirm", action="store_true", help="run the solver on existence verdicts")
    c.add_argument("--resolution", type=int, default=65)
    common(c)
    c.set_defaults(func=cmd_classify)

    m = sub.add_parser("mesh", help="OBJ mesh of a swept profile")
    m.add_argument("--family", choices=("catenoid", "hyperbolic"), required=True)
    m.add_argument("--rho", type=float, help="catenoid neck radius")
    m.add_argument("--d", type=float)
    m.add_argument("--rho-max", type=float, default=4.0)
    m.add_argument("--n", type=int, default=64, help="profile samples")
    m.add_argument("--sweep", type=int, default=48, help="sweep resolution")
    m.add_argument("--extent", type=float, default=2.0, help="translation extent")
    m.add_argument("--out", required=True)
    common(m)
    m.set_defaults(func=cmd_mesh)
    return p


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"hmsurf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError) as exc:
        print(f"hmsurf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
