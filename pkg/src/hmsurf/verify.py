"""Post-solve checks of a discrete solution.

(a) bracket: ``inf g <= u <= sup g``;
(b) boundary attainment: next to every boundary crossing the solution stays
    within a barrier modulus of the data there;
(c) discontinuities: along approach sequences to each ``s`` in ``S`` the
    values sweep the interval of one-sided limits;
(d) residual: normalized interior residual below tolerance.

The modulus in (b) comes from the barriers: at a finite point ``p`` with an
exterior tangent circle of radius ``rho`` a solution satisfies
``|u(z) - g(p)| <= osc + lambda_cat(rho + d(z, p); rho)``; at an ideal
point it is the best bound ``osc_delta + S_delta(z)`` over a ladder of
Scherk wedges cut off at half-width ``delta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from scipy.spatial import cKDTree

from .barriers import wedge_values
from .families import catenoid_profile_array
from .geometry import RHO_MAX, exterior_circle_radius
from .grid import GridFunction, Problem

__all__ = ["CheckResult", "VerificationReport", "verify_solution", "approach_sequences"]

SPAN_TOL = 0.05
GAP_TOL = 0.05
_DELTAS = tuple(0.75 * 0.5 ** j for j in range(24))


@dataclass
class CheckResult:
    """One check: ``value`` is compared against ``threshold``."""

    name: str
    passed: bool
    value: float
    threshold: float
    violations: List[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "value": self.value, "threshold": self.threshold,
                "violations": self.violations[:10], "details": self.details}


@dataclass
class VerificationReport:
    checks: Dict[str, CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failed(self) -> List[str]:
        return [k for k, c in self.checks.items() if not c.passed]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": {k: c.to_dict() for k, c in self.checks.items()}}


def _hyp_dist(z, w):
    num = np.abs(z - w)
    den = np.abs(1.0 - np.conj(z) * w)
    return 2.0 * np.arctanh(np.minimum(num / den, 1.0 - 1e-16))


def _check_bracket(u: GridFunction, problem: Problem) -> CheckResult:
    lo, hi = problem.g_bounds
    U = u.unknowns
    tol = 1e-9 * (1.0 + hi - lo)
    below = lo - U
    above = U - hi
    worst = float(max(np.max(below, initial=-np.inf), np.max(above, initial=-np.inf)))
    viol = []
    bad = np.nonzero((below > tol) | (above > tol))[0]
    st = problem.stencil
    for m in bad[:10]:
        viol.append({"x": float(st.x[m]), "y": float(st.y[m]), "u": float(U[m])})
    return CheckResult("bracket", bad.size == 0, worst, tol, viol, {"bounds": [lo, hi]})


class _FiniteModulus:
    """Catenoid envelope plus local data oscillation at finite crossings."""

    def __init__(self, problem: Problem, rho: Optional[float]):
        dom = problem.domain
        self.rho = exterior_circle_radius(dom) if rho is None else rho
        pts, _, ids = dom.boundary_samples(2048)
        self.pts = pts
        self.vals = problem.data.finite_values(pts, ids)
        self.tree = cKDTree(np.column_stack([pts.real, pts.imag]))

    def __call__(self, z, p, g):
        d = _hyp_dist(z, p)
        if self.rho > 0:
            rho = min(self.rho, RHO_MAX)
            env = catenoid_profile_array(rho + d, rho)
        else:
            env = np.full(d.shape, np.inf)
        r = 2.0 * np.abs(z - p) + 1e-12
        osc = np.zeros(len(z))
        for k, (pk, rk) in enumerate(zip(p, r)):
            idx = self.tree.query_ball_point([pk.real, pk.imag], rk)
            if idx:
                osc[k] = float(np.max(np.abs(self.vals[idx] - g[k])))
        return env + osc


def _asymptotic_modulus(problem: Problem, z, p, g):
    """``min over delta`` of oscillation on the cut-off arc plus the wedge."""
    best = np.full(len(z), np.inf)
    dom = problem.domain
    theta = np.angle(p)
    bpts = dom.boundary_samples(256)[0] if dom.components else None
    s = np.linspace(-1.0, 1.0, 65)
    for dl in _DELTAS:
        th = theta[:, None] + dl * s[None, :]
        vals = problem.data.asymptotic_values(th.ravel()).reshape(th.shape)
        osc = np.max(np.abs(vals - g[:, None]), axis=1)
        wedge = wedge_values(theta, dl, z)
        if bpts is not None:
            # the cut-off region must not meet the finite boundary
            for k in np.nonzero(np.isfinite(wedge))[0]:
                if np.any(np.isfinite(wedge_values(theta[k], dl, bpts))):
                    wedge[k] = np.nan
        best = np.minimum(best, np.where(np.isfinite(wedge), osc + wedge, np.inf))
    return best


def _check_boundary(u: GridFunction, problem: Problem, tol: float, rho: Optional[float],
                    skip_radius: float) -> CheckResult:
    cr = problem.crossings
    st = problem.stencil
    U = u.unknowns
    has = np.isfinite(cr["value"])
    rows, arms = np.nonzero(has)
    z = st.x[rows] + 1j * st.y[rows]
    p = cr["point"][rows, arms]
    g = cr["value"][rows, arms]
    comp = cr["component"][rows, arms]
    keep = np.ones(len(rows), bool)
    for s in problem.data.discontinuities:
        keep &= np.abs(p - s.point) > skip_radius
    z, p, g, comp, rows = z[keep], p[keep], g[keep], comp[keep], rows[keep]
    dev = np.abs(U[rows] - g)
    allowed = np.full(len(rows), np.inf)
    fin = comp >= 0
    if np.any(fin):
        allowed[fin] = _FiniteModulus(problem, rho)(z[fin], p[fin], g[fin])
    asy = ~fin
    if np.any(asy):
        allowed[asy] = _asymptotic_modulus(problem, z[asy], p[asy], g[asy])
    excess = dev - (allowed + tol)
    bad = np.nonzero(excess > 0)[0]
    viol = [{"x": float(z[k].real), "y": float(z[k].imag), "u": float(U[rows[k]]),
             "g": float(g[k]), "allowed": float(allowed[k])}
            for k in bad[np.argsort(-excess[bad])][:10]]
    worst = float(np.max(excess, initial=-np.inf))
    return CheckResult("boundary_attainment", bad.size == 0, worst, 0.0, viol,
                       {"crossings": int(len(rows)), "max_deviation": float(np.max(dev, initial=0.0))})


def approach_sequences(problem: Problem, s: complex, n_seq: int = 3, points: int = 96,
                       r_max: float = 0.25, r_min: Optional[float] = None) -> List[np.ndarray]:
    """Point sequences converging to the boundary point ``s``.

    Each sequence spirals in: the radius decays geometrically from
    ``r_max`` to ``r_min`` (three cells by default) while the direction
    sweeps up to 85 degrees to either side of the inward normal, with a
    different phase per sequence. Points outside the domain are dropped.
    """
    h = problem.grid.h
    r_min = 3.0 * h if r_min is None else r_min
    s = complex(s)
    if abs(abs(s) - 1.0) < 1e-9:
        normal = -s / abs(s)
    else:
        _, tan, _ = problem.domain.nearest_boundary(s)
        normal = 1j * tan
    r = r_max * (r_min / r_max) ** np.linspace(0.0, 1.0, points)
    out = []
    half = math.radians(85.0)
    for j in range(n_seq):
        phase = 2.0 * math.pi * j / n_seq
        phi = half * np.sin(np.linspace(0.0, 6.0 * math.pi, points) + phase)
        z = s + r * normal * np.exp(1j * phi)
        inside = problem.domain.contains(z) & (np.abs(z) < 1.0)
        out.append(z[inside])
    return out


def _check_discontinuities(u: GridFunction, problem: Problem, span_tol: float,
                           gap_tol: float) -> CheckResult:
    details = []
    ok = True
    worst = -np.inf
    for s in problem.data.discontinuities:
        if not (math.isfinite(s.A) and math.isfinite(s.B)):
            # an infinite limit cannot be reached by grid values
            details.append({"point": [s.point.real, s.point.imag], "A": s.A, "B": s.B,
                            "skipped": "infinite one-sided limit"})
            continue
        seqs = approach_sequences(problem, s.point)
        vals = np.concatenate([u.interpolate(z) for z in seqs]) if seqs else np.zeros(0)
        vals = vals[np.isfinite(vals)]
        if vals.size == 0:
            ok = False
            details.append({"point": [s.point.real, s.point.imag], "error": "no sample points"})
            continue
        A, B = s.A, s.B
        v = np.sort(np.clip(vals, A, B))
        grid = np.concatenate([[A], v, [B]])
        inner = grid[(grid >= A + span_tol) & (grid <= B - span_tol)]
        between = np.concatenate([[A + span_tol], inner, [B - span_tol]])
        gap = float(np.max(np.diff(between))) if B - A > 2 * span_tol else 0.0
        lo_def = float(vals.min() - (A + span_tol))
        hi_def = float((B - span_tol) - vals.max())
        bad = max(lo_def, hi_def, gap - gap_tol)
        worst = max(worst, bad)
        ok &= bad <= 0
        details.append({"point": [s.point.real, s.point.imag], "A": A, "B": B,
                        "min": float(vals.min()), "max": float(vals.max()), "max_gap": gap,
                        "samples": int(vals.size)})
    return CheckResult("discontinuity_span", bool(ok), float(worst if details else 0.0), 0.0,
                       [], {"points": details, "span_tol": span_tol, "gap_tol": gap_tol})


def _check_residual(u: GridFunction, problem: Problem, tol_res: float) -> CheckResult:
    Fn = u.residuals(normalized=True)
    a = np.abs(Fn)
    st = problem.stencil
    bad = np.nonzero(a >= tol_res)[0]
    viol = [{"x": float(st.x[m]), "y": float(st.y[m]), "residual": float(Fn[m])}
            for m in bad[np.argsort(-a[bad])][:10]]
    return CheckResult("residual", bad.size == 0, float(np.max(a, initial=0.0)), tol_res, viol)


def verify_solution(u: GridFunction, problem: Optional[Problem] = None,
                    tol_res: Optional[float] = None, tol_boundary: Optional[float] = None,
                    span_tol: float = SPAN_TOL, gap_tol: float = GAP_TOL,
                    rho: Optional[float] = None) -> VerificationReport:
    """Run checks (a) to (d) on a solved grid function.

    Parameters
    ----------
    u : GridFunction
    problem : Problem, optional
        Defaults to ``u.problem``.
    tol_res : float, optional
        Residual tolerance (problem tolerance ``"residual"`` or 1e-8).
    tol_boundary : float, optional
        Slack added to the boundary modulus (default ``1e-6 * (1 + span)``).
    span_tol, gap_tol : float
        Discontinuity check: values must reach within ``span_tol`` of both
        one-sided limits with no gap above ``gap_tol`` in between.
    rho : float, optional
        Exterior circle radius of the domain; measured when omitted.
    """
    problem = u.problem if problem is None else problem
    lo, hi = problem.g_bounds
    if tol_res is None:
        tol_res = problem.tolerances.get("residual", 1e-8)
    if tol_boundary is None:
        tol_boundary = 1e-6 * (1.0 + hi - lo)
    skip = 2.0 * math.sqrt(2.0) * problem.grid.h
    checks = {
        "bracket": _check_bracket(u, problem),
        "boundary_attainment": _check_boundary(u, problem, tol_boundary, rho, skip),
        "discontinuity_span": _check_discontinuities(u, problem, span_tol, gap_tol),
        "residual": _check_residual(u, problem, tol_res),
    }
    return VerificationReport(checks)
