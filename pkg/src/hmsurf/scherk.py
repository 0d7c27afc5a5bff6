"""Scherk-type graphs over geodesic triangles via capped boundary data.

The graph that is ``+inf`` on one side ``A`` and finite on the other two is
approached by the solutions ``u_n`` taking the value ``n`` on ``A``, which
are nondecreasing in ``n`` by comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .geometry import DiskPoint, DomainSpec, Geodesic
from .grid import BoundaryData, Discontinuity, Grid, GridFunction, Problem, build_problem
from .solver import DEFAULT_TOL_CHANGE, DEFAULT_TOL_RES, SolveReport, newton_solve

__all__ = ["ScherkError", "GeodesicTriangle", "ScherkSequence", "isosceles_triangle", "scherk_problem",
           "solve_scherk_triangle"]


class ScherkError(RuntimeError):
    """An inner solve of the capped sequence did not converge."""


def _orient(a: complex, b: complex, c: complex) -> float:
    """Cross product of ``b - a`` and ``c - a``; positive if counterclockwise."""
    return (np.conj(b - a) * (c - a)).imag


@dataclass(frozen=True)
class GeodesicTriangle:
    """Geodesic triangle with apex ``a`` and side ``A = [b1, b2]``.

    ``C1 = [a, b1]`` and ``C2 = [a, b2]``; points are complex disk
    coordinates.
    """

    a: complex
    b1: complex
    b2: complex

    def __post_init__(self):
        for v in (self.a, self.b1, self.b2):
            if not abs(v) < 1.0:
                raise ValueError("triangle vertices must be interior points")
        if abs(_orient(self.a, self.b1, self.b2)) < 1e-12:
            raise ValueError("degenerate triangle")

    @property
    def ccw_vertices(self) -> Tuple[complex, complex, complex]:
        if _orient(self.a, self.b1, self.b2) > 0:
            return self.a, self.b1, self.b2
        return self.a, self.b2, self.b1

    def domain(self) -> DomainSpec:
        return DomainSpec.geodesic_polygon([DiskPoint.from_complex(v) for v in self.ccw_vertices])

    def side_A(self) -> Geodesic:
        return Geodesic.through(DiskPoint.from_complex(self.b1), DiskPoint.from_complex(self.b2))

    def grid(self, n: int, pad: float = 0.02) -> Grid:
        vs = np.array([self.a, self.b1, self.b2])
        samples = np.concatenate([arc.samples(64) for arc, _ in self.domain().boundary_arcs()])
        allp = np.concatenate([vs, samples])
        xmin, xmax = allp.real.min() - pad, allp.real.max() + pad
        ymin, ymax = allp.imag.min() - pad, allp.imag.max() + pad
        return Grid.box(n, xmin, xmax, ymin, ymax)

    def axis_nodes(self, problem: Problem) -> np.ndarray:
        """Unknown indices on the grid column through the apex when the
        triangle is symmetric about the imaginary axis, ordered from ``a``
        toward ``A``."""
        g = problem.grid
        i, _ = g.node_of(complex(0.0, 0.0))
        if abs(g.xs[i]) > 1e-12 * max(1.0, g.h):
            raise ValueError("grid has no column on the symmetry axis")
        col = problem.index[i, :]
        idx = col[col >= 0]
        st = problem.stencil
        dist = np.abs(st.x[idx] + 1j * st.y[idx] - self.a)
        return idx[np.argsort(dist)]


def isosceles_triangle(apex: float = 0.5, base: float = -0.3, half_width: float = 0.45
                       ) -> GeodesicTriangle:
    """Triangle symmetric about the imaginary axis: apex ``i*apex``, base
    vertices ``+-half_width + i*base``."""
    return GeodesicTriangle(complex(0.0, apex), complex(-half_width, base),
                            complex(half_width, base))


@dataclass
class ScherkSequence:
    """Capped solutions ``u_n`` in schedule order."""

    triangle: GeodesicTriangle
    caps: List[float]
    solutions: List[GridFunction]
    reports: List[SolveReport] = field(default_factory=list)
    side_value: float = 0.0

    def is_nondecreasing(self, tol: float = 1e-9) -> bool:
        for u, v in zip(self.solutions, self.solutions[1:]):
            if np.any(v.unknowns < u.unknowns - tol):
                return False
        return True

    def symmetry_defect(self, k: int = -1) -> float:
        """Max ``|u(x, y) - u(-x, y)|`` over unknown nodes."""
        u = self.solutions[k]
        v = u.values
        mirrored = v[::-1, :]
        both = np.isfinite(v) & np.isfinite(mirrored) & (u.problem.node_class == 0)
        return float(np.max(np.abs(v[both] - mirrored[both]))) if np.any(both) else 0.0

    def axis_profile(self, k: int = -1) -> Tuple[np.ndarray, np.ndarray]:
        """Heights along the symmetry axis from the apex toward ``A``:
        ``(distance from apex, values)``."""
        u = self.solutions[k]
        idx = self.triangle.axis_nodes(u.problem)
        st = u.problem.stencil
        dist = np.abs(st.x[idx] + 1j * st.y[idx] - self.triangle.a)
        return dist, u.unknowns[idx]


def _triangle_data(tri: GeodesicTriangle, cap: float, side_value: float) -> BoundaryData:
    arcs = [arc for arc, _ in tri.domain().boundary_arcs()]
    a_index = None
    for k, arc in enumerate(arcs):
        e = {arc.start_point(), arc.end_point()}
        if min(abs(p - tri.b1) for p in e) < 1e-9 and min(abs(p - tri.b2) for p in e) < 1e-9:
            a_index = k
    if a_index is None:
        raise ValueError("side A not found among triangle sides")
    A = arcs[a_index]
    others = [arc for k, arc in enumerate(arcs) if k != a_index]

    def finite(z, comp):
        z = np.asarray(z, dtype=complex)
        dA = A.distance(z)
        dC = np.minimum(others[0].distance(z), others[1].distance(z))
        return np.where(dA < dC, float(cap), float(side_value))

    lo, hi = min(cap, side_value), max(cap, side_value)
    # kept even when cap == side_value so that all caps share one node set
    discs = (Discontinuity(tri.b1, side_value, cap), Discontinuity(tri.b2, side_value, cap))
    return BoundaryData(finite=finite, discontinuities=discs, lower=lo, upper=hi,
                        description={"kind": "scherk_cap", "cap": cap, "side": side_value})


def scherk_problem(tri: GeodesicTriangle, cap: float, resolution: int = 129,
                   side_value: float = 0.0, scheme: str = "monotone") -> Problem:
    return build_problem(tri.domain(), _triangle_data(tri, cap, side_value), resolution,
                         grid=tri.grid(resolution), name=f"scherk_cap_{cap:g}", scheme=scheme)


def solve_scherk_triangle(triangle: GeodesicTriangle, caps: Sequence[float] = (1, 2, 4, 8, 16),
                          resolution: int = 129, side_value: float = 0.0,
                          scheme: str = "monotone", tol_res: float = DEFAULT_TOL_RES,
                          tol_change: float = DEFAULT_TOL_CHANGE, max_halvings: int = 30
                          ) -> ScherkSequence:
    """Solve the capped problems ``u = cap`` on ``A``, ``side_value`` on
    ``C1, C2`` for an increasing schedule of caps.

    The cap is followed as a continuation parameter: each Newton solve
    starts from the solution at the previous cap, and a failed step is
    retried at the midpoint cap. This stays on the branch that starts at
    the constant solution, and the monotone scheme keeps discrete
    comparison between consecutive caps.

    Raises
    ------
    ScherkError
        A cap step still fails after ``max_halvings`` bisections.
    """
    caps = [float(c) for c in caps]
    if any(b < a for a, b in zip(caps, caps[1:])):
        raise ValueError("caps must be nondecreasing")
    sols, reps = [], []
    reached = side_value
    U = None
    for cap in caps:
        prob = scherk_problem(triangle, cap, resolution, side_value, scheme)
        if U is None:
            U = np.full(prob.size, float(side_value))
        trace, iters = [], 0
        pending = [cap]
        while pending:
            target = pending[-1]
            sub = prob if target == cap else scherk_problem(triangle, target, resolution,
                                                            side_value, scheme)
            res = newton_solve(sub, U, tol_res=tol_res, tol_change=tol_change, max_iter=40)
            iters += res.iterations
            trace.append({"stage": "cap_step", "cap": target, "converged": res.converged,
                          "iterations": res.iterations, "residual": res.residual})
            if res.converged:
                U, reached = res.U, target
                pending.pop()
            elif len(pending) > max_halvings:
                raise ScherkError(f"capped solve stalled between n = {reached:g} and "
                                  f"n = {target:g} (residual {res.residual:.3e})")
            else:
                pending.append(0.5 * (reached + target))
        lo, hi = prob.g_bounds
        slack = 1e-9 * (1.0 + hi - lo)
        inside = bool(U.min() >= lo - slack and U.max() <= hi + slack)
        _, Fn = prob.stencil.evaluate(U)
        rep = SolveReport("converged", True, float(np.max(np.abs(Fn), initial=0.0)), 0, False,
                          False, iters, (lo, hi), inside, trace)
        sols.append(GridFunction.from_unknowns(prob, U.copy()))
        reps.append(rep)
    return ScherkSequence(triangle, caps, sols, reps, side_value)
