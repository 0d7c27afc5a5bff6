"""Perron-style discrete solver for the minimal graph equation.

The monotone stage starts from the constant subsolution ``inf g`` and
repeatedly replaces the iterate on small disks by the discrete solution
with the iterate as boundary data (the lift). Disks of radius ``4h`` sit on
a ``4h`` lattice and are split into nine colour classes, so same-colour
disks are at least ``4h`` apart and their lifts are independent; one sweep
visits every class once. With a monotone stencil the iterates stay
subsolutions and increase pointwise. A damped Newton stage on the whole
grid finishes the solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import scipy.sparse.linalg as spla
from dataclasses import replace

from .geometry import DiskPoint, _hyperbolic_circle
from .grid import INTERIOR, DomainError, GridFunction, Problem, Stencil

__all__ = [
    "LiftError",
    "SolveReport",
    "newton_solve",
    "lift_on_disk",
    "monotone_stage",
    "laplace_guess",
    "continuation",
    "solve",
]

DEFAULT_TOL_RES = 1e-8
DEFAULT_TOL_CHANGE = 1e-10


class LiftError(RuntimeError):
    """Inner Newton solve of a lift did not converge."""

    def __init__(self, message: str, trace: Optional[list] = None):
        super().__init__(message)
        self.trace = trace or []


@dataclass
class NewtonResult:
    U: np.ndarray
    converged: bool
    iterations: int
    residual: float
    trace: List[dict] = field(default_factory=list)
    diverged: bool = False


def newton_solve(problem: Problem, U: np.ndarray, subset: Optional[np.ndarray] = None,
                 tol_res: float = DEFAULT_TOL_RES, tol_change: float = DEFAULT_TOL_CHANGE,
                 max_iter: int = 60, blowup: Optional[float] = None) -> NewtonResult:
    """Damped Newton iteration for ``F(U) = 0`` on ``subset`` of unknowns.

    Unknowns outside ``subset`` act as Dirichlet data. Convergence needs the
    normalized residual max-norm below ``tol_res`` and the last step below
    ``tol_change``, or a residual at rounding level.
    """
    st = problem.stencil
    U = np.array(U, dtype=float)
    S = np.arange(st.size) if subset is None else np.asarray(subset)
    # only the rows of S are needed
    sub = st if subset is None else st.subset(S)
    trace = []
    if len(S) == 0:
        return NewtonResult(U, True, 0, 0.0, trace)
    step = math.inf
    for it in range(max_iter + 1):
        F, r, J = sub.evaluate(U, jacobian=True)
        if not np.all(np.isfinite(r)):
            return NewtonResult(U, False, it, math.inf, trace, diverged=True)
        rmax = float(np.max(np.abs(r)))
        trace.append({"iteration": it, "residual": rmax, "step": step,
                      "max_abs": float(np.max(np.abs(U[S])))})
        if rmax < tol_res and (step < tol_change or rmax < 1e-13):
            return NewtonResult(U, True, it, rmax, trace)
        if it == max_iter:
            break
        A = J[:, S].tocsc()
        try:
            delta = spla.spsolve(A, -F)
        except RuntimeError:
            return NewtonResult(U, False, it, rmax, trace, diverged=True)
        if not np.all(np.isfinite(delta)):
            return NewtonResult(U, False, it, rmax, trace, diverged=True)
        base = float(np.linalg.norm(r))
        alpha = 1.0
        while True:
            Ut = U.copy()
            Ut[S] += alpha * delta
            _, Fnt = sub.evaluate(Ut)
            new = float(np.linalg.norm(Fnt))
            if np.isfinite(new) and (new <= (1.0 - 1e-4 * alpha) * base or base < 1e-13):
                break
            alpha *= 0.5
            if alpha < 1e-3:
                # no descent: converged only if the residual is at its floor
                # and the proposed correction is already negligible
                done = rmax < tol_res and float(np.max(np.abs(delta))) < tol_change
                return NewtonResult(U, done, it, rmax, trace)
        U = Ut
        step = float(alpha * np.max(np.abs(delta)))
        if blowup is not None and float(np.max(np.abs(U[S]))) > blowup:
            trace.append({"iteration": it + 1, "residual": new, "step": step,
                          "max_abs": float(np.max(np.abs(U[S])))})
            return NewtonResult(U, False, it + 1, new, trace, diverged=True)
    return NewtonResult(U, False, max_iter, rmax, trace)


def _disk_nodes(problem: Problem, center: complex, radius: float) -> np.ndarray:
    st = problem.stencil
    z = st.x + 1j * st.y
    return np.nonzero(np.abs(z - center) <= radius * (1 + 1e-12))[0]


def lift_on_disk(u: GridFunction, center, radius: float, hyperbolic: bool = True,
                 tol_res: float = DEFAULT_TOL_RES, strict: bool = True) -> GridFunction:
    """Replace ``u`` inside a disk by the discrete solution with ``u`` as
    boundary data.

    Parameters
    ----------
    u : GridFunction
    center : DiskPoint or complex
    radius : float
        Hyperbolic radius, or Euclidean if ``hyperbolic=False``.
    strict : bool
        Require every grid node of the closed disk to be an interior node.

    Raises
    ------
    DomainError
        The disk is not inside the grid interior.
    LiftError
        The inner solve does not converge.
    """
    problem = u.problem
    c = center.z if isinstance(center, DiskPoint) else complex(center)
    if hyperbolic:
        c, radius = _hyperbolic_circle(c, radius)
    if strict:
        X, Y = problem.grid.mesh()
        inside = np.abs(X + 1j * Y - c) <= radius
        if abs(c) + radius >= 1.0 or np.any(problem.node_class[inside] != INTERIOR):
            raise DomainError("lift disk must lie inside the grid interior")
    S = _disk_nodes(problem, c, radius)
    res = newton_solve(problem, u.unknowns, S, tol_res=tol_res)
    if not res.converged:
        raise LiftError("inner Newton solve did not converge", res.trace)
    return GridFunction.from_unknowns(problem, res.U)


def _colour_classes(problem: Problem, spacing: int = 4):
    """Unknown index sets of the nine colour classes of lift disks."""
    g = problem.grid
    nodes = problem.nodes
    R = spacing * g.h
    classes = []
    for ci in range(3):
        for cj in range(3):
            # nearest centre of this colour for every unknown
            ni = nodes[:, 0]
            nj = nodes[:, 1]
            di = ni - ci * spacing
            dj = nj - cj * spacing
            per = 3 * spacing
            ki = np.round(di / per) * per + ci * spacing
            kj = np.round(dj / per) * per + cj * spacing
            dist = np.hypot(ni - ki, nj - kj) * g.h
            sel = np.nonzero(dist <= R * (1 + 1e-12))[0]
            classes.append(sel)
    return classes


def _split_class(problem: Problem, S: np.ndarray, spacing: int = 4):
    """Split a colour class into its individual disks."""
    nodes = problem.nodes[S]
    per = 3 * spacing
    key = np.round(nodes / per).astype(int)
    _, inv = np.unique(key, axis=0, return_inverse=True)
    inv = np.ravel(inv)
    return [S[inv == k] for k in range(inv.max() + 1)]


@dataclass
class SolveReport:
    """Convergence record of :func:`solve`."""

    status: str
    converged: bool
    residual: float
    monotone_sweeps: int
    monotone_converged: bool
    monotone_nondecreasing: bool
    newton_iterations: int
    bracket: tuple
    within_bracket: bool
    trace: List[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "converged": self.converged,
            "residual": self.residual,
            "monotone_sweeps": self.monotone_sweeps,
            "monotone_converged": self.monotone_converged,
            "monotone_nondecreasing": self.monotone_nondecreasing,
            "newton_iterations": self.newton_iterations,
            "bracket": list(self.bracket),
            "within_bracket": self.within_bracket,
        }


def monotone_stage(problem: Problem, U0: Optional[np.ndarray] = None, max_sweeps: int = 4,
                   tol_change: float = DEFAULT_TOL_CHANGE, tol_res: float = DEFAULT_TOL_RES,
                   trace: Optional[list] = None, strict: bool = False):
    """Colour-ordered disk lifts from ``U0`` (default ``inf g``).

    Lifts whose inner solve fails are skipped and counted in the trace;
    with ``strict`` a failure in the last sweep raises :class:`LiftError`.

    Returns ``(U, sweeps, converged, nondecreasing)``.
    """
    st = problem.stencil
    lo, _ = problem.g_bounds
    U = np.full(st.size, lo) if U0 is None else np.array(U0, dtype=float)
    classes = [c for c in _colour_classes(problem) if len(c)]
    nondecreasing = True
    for sweep in range(1, max_sweeps + 1):
        start = U.copy()
        skipped = 0
        for S in classes:
            res = newton_solve(problem, U, S, tol_res=tol_res, tol_change=tol_change)
            if res.converged:
                U = res.U
                continue
            # retry disk by disk; a lift that still fails is skipped, which
            # keeps the iterate a subsolution
            for part in _split_class(problem, S):
                r = newton_solve(problem, U, part, tol_res=tol_res, tol_change=tol_change)
                if r.converged:
                    U = r.U
                else:
                    skipped += 1
        change = U - start
        nondecreasing &= bool(np.min(change) >= -1e-9)
        dmax = float(np.max(np.abs(change))) if len(change) else 0.0
        if trace is not None:
            trace.append({"stage": "monotone", "sweep": sweep, "change": dmax,
                          "min_change": float(np.min(change)) if len(change) else 0.0,
                          "skipped_lifts": skipped})
        if skipped and sweep == max_sweeps and strict:
            raise LiftError(f"{skipped} lifts did not converge in sweep {sweep}")
        if dmax < tol_change:
            return U, sweep, True, nondecreasing
    return U, max_sweeps, False, nondecreasing


def laplace_guess(problem: Problem) -> np.ndarray:
    """Discrete harmonic function with the problem's boundary data."""
    L, rhs = problem.stencil.laplacian()
    return spla.spsolve(L.tocsc(), rhs)


def _scaled_problem(problem: Problem, s: float) -> Problem:
    st = problem.stencil
    lo = problem.g_bounds[0]
    fixed = lo + s * (st.fixed - lo)
    return replace(problem, stencil=Stencil(st.nbr, fixed, st.frac, st.x, st.y, st.h, st.scheme))


def continuation(problem: Problem, tol_res: float = DEFAULT_TOL_RES,
                 tol_change: float = DEFAULT_TOL_CHANGE, max_iter: int = 40,
                 min_step: float = 1e-3, trace: Optional[list] = None):
    """Newton along the data homotopy ``inf g + s (g - inf g)``, ``s: 0 -> 1``.

    Returns ``(result, s_reached)`` with the last converged
    :class:`NewtonResult`; ``s_reached < 1`` means the path was lost.
    """
    lo = problem.g_bounds[0]
    U = np.full(problem.size, lo)
    last = NewtonResult(U, False, 0, math.inf)
    s, ds = 0.0, 0.25
    while s < 1.0 and ds >= min_step:
        s1 = min(1.0, s + ds)
        res = newton_solve(_scaled_problem(problem, s1), U, None, tol_res, tol_change, max_iter)
        if trace is not None:
            trace.append({"stage": "continuation", "s": s1, "converged": res.converged,
                          "iterations": res.iterations, "residual": res.residual})
        if res.converged:
            U, s, ds, last = res.U, s1, min(2.0 * ds, 0.5), res
        else:
            ds *= 0.5
    return last, s


def solve(problem: Problem, monotone_sweeps: int = 3, newton: bool = True,
          tol_res: Optional[float] = None, tol_change: Optional[float] = None,
          max_newton: int = 60, initial: Optional[np.ndarray] = None,
          continuation_fallback: bool = True):
    """Solve the discrete Dirichlet problem.

    Parameters
    ----------
    problem : Problem
    monotone_sweeps : int
        Sweeps of the monotone stage; 0 skips it.
    newton : bool
        Run the global damped Newton stage.
    initial : ndarray, optional
        Starting unknowns for the monotone stage (must be a subsolution for
        the monotonicity guarantee); defaults to ``inf g``.
    continuation_fallback : bool
        When global Newton fails, retry along the data homotopy from the
        constant ``inf g``.

    Returns
    -------
    (GridFunction, SolveReport)
    """
    tol_res = problem.tolerances.get("residual", DEFAULT_TOL_RES) if tol_res is None else tol_res
    tol_change = (problem.tolerances.get("change", DEFAULT_TOL_CHANGE)
                  if tol_change is None else tol_change)
    lo, hi = problem.g_bounds
    trace: List[dict] = []
    U = np.full(problem.size, lo) if initial is None else np.array(initial, dtype=float)
    sweeps, mono_conv, nondecr = 0, False, True
    status = "converged"
    if monotone_sweeps > 0:
        try:
            U, sweeps, mono_conv, nondecr = monotone_stage(
                problem, U, monotone_sweeps, tol_change, tol_res, trace)
        except LiftError as exc:
            trace.extend(exc.trace)
            status = "diverged"
    iters = 0
    final_res = float(np.max(np.abs(problem.stencil.evaluate(U)[1]))) if problem.size else 0.0
    if status == "converged" and newton and not mono_conv:
        span = max(hi - lo, 1.0)
        res = newton_solve(problem, U, None, tol_res, tol_change, max_newton,
                           blowup=max(abs(lo), abs(hi)) + 100.0 * span)
        trace.extend({"stage": "newton", **t} for t in res.trace)
        iters = res.iterations
        U = res.U
        final_res = res.residual
        if not res.converged and continuation_fallback:
            cres, reached = continuation(problem, tol_res, tol_change, trace=trace)
            if reached >= 1.0:
                res = cres
                U, final_res = res.U, res.residual
                iters += res.iterations
        if res.diverged:
            status = "diverged"
        elif not res.converged:
            status = "maxiter"
    elif status == "converged" and not mono_conv:
        status = "maxiter" if final_res >= tol_res else "converged"
    within = bool(np.all(U >= lo - 1e-9) and np.all(U <= hi + 1e-9)) if len(U) else True
    converged = status == "converged" and final_res < tol_res
    if status == "converged" and not converged:
        status = "maxiter"
    report = SolveReport(status, converged, final_res, sweeps, mono_conv, nondecr, iters,
                         (lo, hi), within, trace)
    return GridFunction.from_unknowns(problem, U), report
