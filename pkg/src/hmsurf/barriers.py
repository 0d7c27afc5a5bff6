"""Local barriers at boundary points of a Dirichlet problem.

A superior barrier at ``p`` is a supersolution on a neighbourhood ``N`` of
``p`` that dominates the data on ``dOmega`` inside ``N``, dominates
``sup g`` on ``dN`` inside the domain and takes the value ``g(p) + eps`` at
``p``; the inferior barrier is the mirror statement. Five constructions are
available:

``constant``
    ``sup g`` and ``inf g``; valid when ``g(p)`` attains both.
``catenoidHalf``
    Half catenoid over the exterior of the tangent circle of radius
    ``rho`` outside the domain at a finite point; it rises by at most
    ``f(rho)``, which gates the asymptotic heights.
``equidistantSurface``
    ``M_d`` with ``d = cosh r`` over the side of an exterior equidistant
    curve at distance ``r``; rises by at most ``H(cosh r)``.
``scherkConvex``
    Capped Scherk graph over a small isosceles triangle with its axis
    normal to a supporting geodesic at a convex point (numerical).
``asymptoticScherk``
    Scherk wedge over the region cut off by a short geodesic around an
    ideal point, ``+inf`` on the geodesic and zero on the cut-off arc.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from .citations import describe
from .families import (catenoid_field, catenoid_height, height_H, hyperbolic_family_field,
                       invert_H)
from .geometry import (DiskPoint, DomainSpec, Geodesic, Isometry, _boundary_frame,
                       exterior_circle_radius, exterior_equidistant_curvature)
from .grid import Problem
from .operator import ScalarField, compose_holomorphic, residual_disk

__all__ = [
    "BARRIER_KINDS",
    "BarrierError",
    "BarrierCheck",
    "BarrierCertificate",
    "make_barrier",
    "scherk_wedge_field",
    "ideal_point_frame",
    "wedge_values",
]

BARRIER_KINDS = ("catenoidHalf", "equidistantSurface", "scherkConvex", "asymptoticScherk",
                 "constant")
GATE_SLACK = 1e-6
DEFAULT_EPS = 0.05
_SEED = 20240611


class BarrierError(ValueError):
    """No barrier of the requested kind exists at the point.

    ``citation`` names the result that rules the construction out when the
    failure is a height hypothesis rather than a geometric precondition.
    """

    def __init__(self, message: str, citation: Optional[str] = None):
        if citation:
            message = f"{message} [{citation}: {describe(citation)}]"
        super().__init__(message)
        self.citation = citation


@dataclass
class BarrierCheck:
    """Sampled verification of a certificate; ``conditions`` maps a name to
    ``(passed, margin)`` with a nonnegative margin when passed."""

    passed: bool
    conditions: Dict[str, tuple]

    def to_dict(self) -> dict:
        return {"passed": self.passed,
                "conditions": {k: {"passed": bool(v[0]), "margin": float(v[1])}
                               for k, v in self.conditions.items()}}


@dataclass
class BarrierCertificate:
    """Superior and inferior barriers at ``point``.

    Attributes
    ----------
    point : complex
        Disk coordinate; ideal points have modulus 1.
    kind : str
    superior, inferior : callable
        ``z -> values``; ``+inf`` (resp. ``-inf``) outside the neighbourhood.
    neighborhood : callable
        ``z -> bool`` membership of the validity neighbourhood ``N``.
    parameters : dict
        Construction parameters (radii, ``d``, ``eps``, caps, ...).
    fields : tuple of ScalarField or None
        Closed-form superior and inferior fields when available.
    """

    point: complex
    kind: str
    superior: Callable
    inferior: Callable
    neighborhood: Callable
    parameters: dict
    value: float
    fields: Optional[tuple] = None
    sampler: Optional[Callable] = None
    notes: List[str] = field(default_factory=list)
    problem: Optional[Problem] = None

    def verify(self, samples: int = 400, residual_tol: float = 1e-7) -> BarrierCheck:
        """Check the barrier conditions on sampled points of ``N``, of the
        boundary trace inside ``N`` and at the point itself."""
        prob = self.problem
        eps = float(self.parameters.get("eps", 0.0))
        lo, hi = prob.g_bounds
        cond = {}
        rng = np.random.default_rng(_SEED)

        bz, bv = _boundary_trace(prob, self.neighborhood, samples)
        if bz.size:
            up = self.superior(bz) - bv
            dn = bv - self.inferior(bz)
            cond["trace_superior"] = (bool(np.all(up >= -1e-12)), float(np.min(up)))
            cond["trace_inferior"] = (bool(np.all(dn >= -1e-12)), float(np.min(dn)))
        at = self.parameters.get("point_value_defect")
        if at is None:
            zp = self._inner_point()
            at = max(abs(float(self.superior(zp)) - (self.value + eps)),
                     abs(float(self.inferior(zp)) - (self.value - eps)))
        cond["value_at_point"] = (bool(at <= 1e-6), float(1e-6 - at))
        outer = self.parameters.get("outer_margin")
        if outer is not None:
            cond["outer_boundary"] = (bool(outer >= 0), float(outer))
        pts = self.sampler(samples, rng) if self.sampler is not None else np.zeros(0, complex)
        if self.fields is not None and pts.size:
            worst = 0.0
            for f in self.fields:
                rep = residual_disk(f, (pts.real, pts.imag))
                worst = max(worst, float(np.max(np.abs(rep.normalized))))
            cond["supersolution"] = (bool(worst <= residual_tol), float(residual_tol - worst))
        elif "discrete_residual" in self.parameters:
            r = float(self.parameters["discrete_residual"])
            cond["supersolution"] = (bool(r <= residual_tol), float(residual_tol - r))
        if pts.size:
            s_vals = self.superior(pts)
            i_vals = self.inferior(pts)
            # a barrier never needs to exceed the data range by more than eps
            cond["ordering"] = (bool(np.all(s_vals >= i_vals - 1e-12)),
                                float(np.min(s_vals - i_vals)))
        ok = all(v[0] for v in cond.values())
        return BarrierCheck(ok, cond)

    def _inner_point(self) -> complex:
        z = complex(self.point)
        if abs(z) >= 1.0:
            return z * (1.0 - 1e-9)
        return z


# ---------------------------------------------------------------------------
# helpers

def _data_at(problem: Problem, z: complex):
    """``(g(p), component)``; component ``-1`` for ideal points."""
    z = complex(z)
    if abs(abs(z) - 1.0) < 1e-12:
        return float(problem.data.asymptotic_values(np.array([cmath.phase(z)]))[0]), -1
    pt, _, comp = problem.domain.nearest_boundary(z)
    if abs(pt - z) > 1e-8:
        raise BarrierError(f"point {z:.6g} is not on the finite boundary")
    return float(problem.data.finite_values(np.array([z]), np.array([comp]))[0]), comp


def _asymptotic_range(problem: Problem, n: int = 4096):
    th = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False) + 1e-7
    mask = problem.domain.ideal_boundary_mask(th)
    if not np.any(mask):
        return None
    v = problem.data.asymptotic_values(th[mask])
    return float(np.min(v)), float(np.max(v))


def _boundary_trace(problem: Problem, inside: Callable, samples: int):
    """Boundary points and data inside a neighbourhood (finite and ideal)."""
    zs, vs = [], []
    dom = problem.domain
    if dom.components:
        pts, _, ids = dom.boundary_samples(max(16, samples // max(1, len(dom.boundary_arcs()))))
        keep = np.asarray(inside(pts), dtype=bool)
        zs.append(pts[keep])
        vs.append(problem.data.finite_values(pts[keep], ids[keep]))
    th = np.linspace(0.0, 2.0 * math.pi, 4 * samples, endpoint=False) + 1e-7
    th = th[dom.ideal_boundary_mask(th)]
    z = np.exp(1j * th) * (1.0 - 1e-9)
    keep = np.asarray(inside(z), dtype=bool)
    zs.append(z[keep])
    vs.append(problem.data.asymptotic_values(th[keep]))
    return np.concatenate(zs), np.concatenate(vs)


def _domain_sampler(domain: DomainSpec, extra: Callable = None, rmax: float = 0.985):
    def sample(n, rng):
        out = []
        tries = 0
        while sum(len(o) for o in out) < n and tries < 200:
            r = rmax * np.sqrt(rng.random(4 * n))
            z = r * np.exp(2j * math.pi * rng.random(4 * n))
            keep = domain.contains(z, margin=1e-3)
            if extra is not None:
                keep &= extra(z)
            out.append(z[keep])
            tries += 1
        z = np.concatenate(out) if out else np.zeros(0, complex)
        return z[:n]
    return sample


def _limit_gate(gap: float, bound: float, citation: str, what: str):
    if gap > bound + GATE_SLACK:
        raise BarrierError(f"{what}: height gap {gap:.12g} exceeds {bound:.12g}", citation)


# ---------------------------------------------------------------------------
# constant

def _constant(problem: Problem, p: complex, gp: float, eps: float) -> BarrierCertificate:
    lo, hi = problem.g_bounds
    tol = 1e-12 * (1.0 + abs(hi - lo))
    if hi - gp > tol or gp - lo > tol:
        raise BarrierError(f"constant barriers need g(p) = sup g = inf g; "
                           f"here g(p) = {gp:.6g}, range [{lo:.6g}, {hi:.6g}]")

    def sup(z):
        return np.full(np.shape(z), hi + eps)

    def inf(z):
        return np.full(np.shape(z), lo - eps)

    zero = entire_zero()
    return BarrierCertificate(p, "constant", sup, inf, lambda z: np.ones(np.shape(z), bool),
                              {"eps": eps}, gp, (zero.shifted(hi + eps), zero.shifted(lo - eps)),
                              _domain_sampler(problem.domain), problem=problem)


def entire_zero() -> ScalarField:
    return ScalarField(lambda x, y: tuple(np.zeros(np.broadcast(x, y).shape) for _ in range(6)),
                       "disk", "closedForm", "zero")


# ---------------------------------------------------------------------------
# half catenoid

def _catenoid(problem: Problem, p: complex, gp: float, eps: float,
              rho: Optional[float]) -> BarrierCertificate:
    dom = problem.domain
    if rho is None:
        rho = exterior_circle_radius(dom)
    if not rho > 0:
        raise BarrierError("no exterior tangent circle at the boundary (domain not admissible)")
    _, tan, _ = dom.nearest_boundary(p)
    fi = _boundary_frame(p, tan).inverse()
    o = complex(fi(-1j * math.tanh(0.5 * rho)))
    f_rho = float(catenoid_height(rho))
    rng_inf = _asymptotic_range(problem)
    if rng_inf is not None:
        _limit_gate(rng_inf[1] - gp, f_rho, "Remark 5.3", "superior half catenoid")
        _limit_gate(gp - rng_inf[0], f_rho, "Remark 5.3", "inferior half catenoid")
    upper = catenoid_field(DiskPoint.from_complex(o), rho, gp + eps)
    lower = catenoid_field(DiskPoint.from_complex(o), rho, 0.0).negated().shifted(gp - eps)

    def sup(z):
        return upper.value(np.real(z), np.imag(z))

    def inf(z):
        return lower.value(np.real(z), np.imag(z))

    outer = None
    if rng_inf is not None:
        outer = min(gp + eps + f_rho - rng_inf[1], rng_inf[0] - (gp - eps - f_rho))
    dist_ok = _far_from(o, rho)
    params = {"rho": rho, "center": [o.real, o.imag], "f_rho": f_rho, "eps": eps,
              "outer_margin": outer}
    cert = BarrierCertificate(p, "catenoidHalf", sup, inf, lambda z: dom.contains(z) | (
        np.abs(np.abs(z) - 1) < 1e-6), params, gp, (upper, lower),
        _domain_sampler(dom, dist_ok), problem=problem)
    cert.notes.append("neighbourhood is the whole domain; asymptotic limit g(p) +- (eps + f(rho))")
    # the trace check covers the finite data; nonconstant data may fail it
    chk = _trace_ok(cert, problem)
    if not chk:
        raise BarrierError("half catenoid does not dominate the finite boundary data")
    return cert


def _far_from(o: complex, rho: float, gap: float = 1e-3):
    def keep(z):
        num = np.abs(z - o)
        den = np.abs(1.0 - np.conj(o) * z)
        return 2.0 * np.arctanh(np.minimum(num / den, 1 - 1e-16)) > rho + gap
    return keep


def _trace_ok(cert: BarrierCertificate, problem: Problem, samples: int = 256) -> bool:
    bz, bv = _boundary_trace(problem, lambda z: np.abs(z) < 1.0 - 1e-12, samples)
    if not bz.size:
        return True
    return bool(np.all(cert.superior(bz) >= bv - 1e-12) and np.all(cert.inferior(bz) <= bv + 1e-12))


# ---------------------------------------------------------------------------
# equidistant surfaces M_d

def _equidistant(problem: Problem, p: complex, gp: float, eps: float,
                 r: Optional[float]) -> BarrierCertificate:
    dom = problem.domain
    if r is None:
        r = exterior_equidistant_curvature(dom)
    if not math.isfinite(r):
        raise BarrierError("no exterior equidistant curve at the boundary")
    rng_inf = _asymptotic_range(problem)
    need = 0.0 if rng_inf is None else max(rng_inf[1] - gp, gp - rng_inf[0])
    if r > 1e-9:
        bound = float(height_H(math.cosh(r)))
        _limit_gate(need, bound, "Thm 5.9", "equidistant barrier")
    else:
        # geodesic boundary: any d > 1 fits, take one tall enough
        bound = max(need + 1.0, 0.5 * math.pi + 1.0)
        r = math.acosh(invert_H(bound))
    d = math.cosh(r)
    _, tan, _ = dom.nearest_boundary(p)
    fi = _boundary_frame(p, tan).inverse()
    base = Isometry.moving_to_origin(-1j * math.tanh(0.5 * r)).inverse()
    e1, e2 = complex(fi(base(1.0))), complex(fi(base(-1.0)))
    geo = Geodesic(cmath.phase(e1), cmath.phase(e2))
    orient = 1.0 if float(geo.signed_distance(p)) > 0 else -1.0
    upper = hyperbolic_family_field(geo, d, orient).shifted(gp + eps)
    lower = hyperbolic_family_field(geo, d, orient).negated().shifted(gp - eps)
    height = float(height_H(d))

    def region(z):
        return orient * np.asarray(geo.signed_distance(z)) >= r - 1e-9

    def sup(z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, np.inf)
        k = region(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[k] = upper.value(z[k].real, z[k].imag)
        return out

    def inf(z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, -np.inf)
        k = region(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[k] = lower.value(z[k].real, z[k].imag)
        return out

    outer = None
    if rng_inf is not None:
        outer = min(gp + eps + height - rng_inf[1], rng_inf[0] - (gp - eps - height))
    params = {"r": r, "d": d, "H": height, "eps": eps, "geodesic": [geo.theta1, geo.theta2],
              "orientation": orient, "outer_margin": outer}

    def keep(z):
        return orient * np.asarray(geo.signed_distance(z)) > r + 1e-3

    cert = BarrierCertificate(p, "equidistantSurface", sup, inf,
                              lambda z: dom.contains(z) | (np.abs(np.abs(z) - 1) < 1e-6),
                              params, gp, (upper, lower), _domain_sampler(dom, keep),
                              problem=problem)
    if not _trace_ok(cert, problem):
        raise BarrierError("equidistant barrier does not dominate the finite boundary data")
    return cert


# ---------------------------------------------------------------------------
# Scherk wedge at an ideal point

def ideal_point_frame(theta: float, delta: float) -> Isometry:
    """Isometry sending the region cut off by the geodesic with ideal
    endpoints ``theta -+ delta`` (the side containing ``exp(i theta)``) onto
    the upper half-disk, with ``exp(i theta) -> i``."""
    if not 0 < delta < 0.5 * math.pi:
        raise ValueError("half-width must lie in (0, pi/2)")
    s = math.cos(delta) / (1.0 + math.sin(delta))
    return (Isometry.moving_to_origin(1j * s)
            @ Isometry.rotation_about_origin(0.5 * math.pi - theta))


def wedge_values(theta, delta: float, z) -> np.ndarray:
    """Vectorized heights of :func:`scherk_wedge_field` for per-point
    ``theta``; NaN outside the cut-off region."""
    theta = np.asarray(theta, dtype=float)
    z = np.asarray(z, dtype=complex)
    s = math.cos(delta) / (1.0 + math.sin(delta))
    w = z * np.exp(1j * (0.5 * math.pi - theta))
    zeta = (w - 1j * s) / (1.0 + 1j * s * w)
    inside = (zeta.imag > 0) & (np.abs(zeta) < 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = 1j * (1.0 + zeta) / (1.0 - zeta)
        val = np.log((np.abs(v) + v.imag) / (-v.real))
    return np.where(inside, val, np.nan)


def _wedge_reflected(x, y):
    """``log((r + y) / (-x))`` on ``x < 0 < y`` with derivatives."""
    r = np.sqrt(x * x + y * y)
    r3 = r ** 3
    X = -x
    return (np.log((r + y) / X), y / (X * r), 1.0 / r,
            y / (X * X * r) + y / r3, -x / r3, -y / r3)


def scherk_wedge_field(theta: float, delta: float) -> ScalarField:
    """Scherk wedge over the region cut off near ``exp(i theta)`` by the
    geodesic with endpoints ``theta -+ delta``: ``+inf`` on the geodesic,
    zero on the cut-off ideal arc. Undefined (NaN) elsewhere."""
    frame = ideal_point_frame(theta, delta)

    def ev(x, y):
        zeta = np.asarray(x) + 1j * np.asarray(y)
        one = 1.0 - zeta
        with np.errstate(divide="ignore", invalid="ignore"):
            v = 1j * (1.0 + zeta) / one
            vp = 2j / one ** 2
            vpp = 4j / one ** 3
            base = _wedge_reflected(v.real, v.imag)
            out = compose_holomorphic(base, vp, vpp)
        bad = ~((zeta.imag > 0) & (np.abs(zeta) < 1.0))
        if np.any(bad):
            out = tuple(np.where(bad, np.nan, np.asarray(o, dtype=float)) for o in out)
        return out

    return ScalarField(ev, "disk", "closedForm", f"scherk_wedge@{theta:.6g}").pullback(frame)


_DELTAS = tuple(0.75 * 0.5 ** j for j in range(40))


def _asymptotic(problem: Problem, p: complex, gp: float, eps: float,
                delta: Optional[float]) -> BarrierCertificate:
    theta = cmath.phase(p)
    dom = problem.domain
    if not bool(dom.ideal_boundary_mask(np.array([theta]))[0]):
        raise BarrierError("ideal point is not in the asymptotic boundary of the domain")
    chosen = None
    ladder = (delta,) if delta is not None else _DELTAS
    for dl in ladder:
        th = theta + dl * np.linspace(-1.0, 1.0, 513)
        vals = problem.data.asymptotic_values(th)
        if np.max(vals) - gp > eps or gp - np.min(vals) > eps:
            continue
        frame_inv = ideal_point_frame(theta, dl).inverse()
        edge = frame_inv(np.linspace(-0.999, 0.999, 401) + 0j)
        if dom.components:
            # the cut-off region must carry no finite boundary
            probe = frame_inv(0.999 * np.exp(1j * np.linspace(0.0005, math.pi - 0.0005, 401))
                              * np.sqrt(np.linspace(0.0, 1.0, 401)))
            if not (np.all(dom.contains(edge)) and np.all(dom.contains(probe))):
                continue
        chosen = dl
        break
    if chosen is None:
        raise BarrierError("data not continuous enough at the ideal point for the requested eps")
    wedge = scherk_wedge_field(theta, chosen)
    upper = wedge.shifted(gp + eps)
    lower = wedge.negated().shifted(gp - eps)
    frame = ideal_point_frame(theta, chosen)

    def region(z):
        w = np.asarray(frame(np.asarray(z, dtype=complex)))
        return (w.imag > 0) & (np.abs(w) < 1.0 + 1e-12)

    def sup(z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, np.inf)
        k = region(z) & (np.abs(z) < 1.0)
        out[k] = upper.value(z[k].real, z[k].imag)
        ideal = region(z) & (np.abs(z) >= 1.0 - 1e-9) & ~k
        out[ideal] = gp + eps
        return out

    def inf(z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, -np.inf)
        k = region(z) & (np.abs(z) < 1.0)
        out[k] = lower.value(z[k].real, z[k].imag)
        ideal = region(z) & (np.abs(z) >= 1.0 - 1e-9) & ~k
        out[ideal] = gp - eps
        return out

    fi = frame.inverse()

    def sampler(n, rng):
        r = 0.02 + 0.95 * np.sqrt(rng.random(n))
        a = 0.02 + (math.pi - 0.04) * rng.random(n)
        return np.asarray(fi(r * np.exp(1j * a)))

    params = {"delta": chosen, "eps": eps, "point_value_defect": 0.0, "outer_margin": math.inf}
    cert = BarrierCertificate(p, "asymptoticScherk", sup, inf, region, params, gp,
                              (upper, lower), sampler, problem=problem)
    cert.notes.append("barrier is +-inf on the cutting geodesic and g(p) +- eps on the cut-off arc")
    return cert


# ---------------------------------------------------------------------------
# Scherk barrier at a convex finite point

def _scherk_convex(problem: Problem, p: complex, gp: float, eps: float, cap: float,
                   resolution: int, sizes) -> BarrierCertificate:
    from .scherk import isosceles_triangle, solve_scherk_triangle
    dom = problem.domain
    lo, hi = problem.g_bounds
    M1 = max(hi, gp + eps) + 1.0
    target = gp + eps
    if cap <= M1 - target:
        raise BarrierError("cap too small: the capped barrier never reaches g(p) + eps")
    _, tan, _ = dom.nearest_boundary(p)
    F = _boundary_frame(p, tan)
    Fi = F.inverse()
    for s in sizes:
        tri = isosceles_triangle(apex=s, base=-0.5 * s, half_width=0.8 * s)
        seq = solve_scherk_triangle(tri, (cap,), resolution=resolution)
        u = seq.solutions[-1]
        dist, vals = seq.axis_profile(-1)
        omega = M1 - vals
        # omega runs from M1 at the apex down to M1 - cap near A
        k = np.nonzero(omega <= target)[0]
        if k.size == 0 or k[0] == 0:
            continue
        j = k[0]
        t = (omega[j - 1] - target) / (omega[j - 1] - omega[j])
        y_axis = tri.a.imag - (dist[j - 1] + t * (dist[j] - dist[j - 1]))
        T = Isometry.moving_to_origin(1j * y_axis)
        Ti = T.inverse()
        tri_dom = tri.domain()

        def canon(z, Ti=Ti):
            return Ti(F(np.asarray(z, dtype=complex))) if np.ndim(z) else Ti(F(z))

        def region(z, tri_dom=tri_dom, canon=canon):
            return tri_dom.contains(np.atleast_1d(canon(z))).reshape(np.shape(z))

        # side A must stay outside the closed domain
        sideA = None
        for arc, _ in tri_dom.boundary_arcs():
            ends = (arc.start_point(), arc.end_point())
            if (min(abs(e - tri.b1) for e in ends) < 1e-9
                    and min(abs(e - tri.b2) for e in ends) < 1e-9):
                sideA = arc
        pts_A = np.asarray(Fi(T(sideA.samples(64))))
        if np.any(dom.contains(pts_A)):
            continue

        def sup(z, u=u, region=region, canon=canon, M1=M1):
            z = np.asarray(z, dtype=complex)
            out = np.full(z.shape, np.inf)
            k = region(z)
            if np.any(k):
                out[k] = M1 - u.interpolate(np.atleast_1d(canon(z[k])))
            return out

        def inf(z, sup=sup, gp=gp):
            return 2.0 * gp - sup(z)

        zc = np.array([p])
        bz, bv = _boundary_trace(problem, region, 512)
        if bz.size and np.any(sup(bz) < bv - 1e-12):
            continue
        if bz.size and np.any(inf(bz) > bv + 1e-12):
            continue
        _, Fn = u.problem.stencil.evaluate(u.unknowns)
        defect = abs(float(sup(zc * (1.0 + 0j))[0]) - target) if region(zc)[0] else math.inf
        params = {"size": s, "cap": cap, "M1": M1, "eps": eps, "resolution": resolution,
                  "axis_shift": y_axis, "discrete_residual": float(np.max(np.abs(Fn))),
                  "outer_margin": M1 - hi, "point_value_defect": defect}
        cert = BarrierCertificate(p, "scherkConvex", sup, inf, region, params, gp, None,
                                  None, problem=problem)
        cert.notes.append("the -inf side is replaced by the finite cap M1 - cap "
                          "(discrete, bilinear interpolant of the capped solution)")
        cert.notes.append("inferior barrier is the reflection 2 g(p) - superior")
        return cert
    raise BarrierError("no triangle size gives a convex-point barrier (point not convex, "
                       "or data too oscillatory for eps)")


# ---------------------------------------------------------------------------

def make_barrier(p, problem: Problem, kind: str = "auto", eps: float = DEFAULT_EPS,
                 rho: Optional[float] = None, r: Optional[float] = None,
                 delta: Optional[float] = None, cap: float = 64.0, resolution: int = 65,
                 sizes=(0.2, 0.1, 0.05)) -> BarrierCertificate:
    """Build a barrier certificate at the boundary point ``p``.

    Parameters
    ----------
    p : DiskPoint or complex
    problem : Problem
        Supplies the domain and the data.
    kind : str
        One of ``BARRIER_KINDS`` or ``"auto"`` (``asymptoticScherk`` at
        ideal points, ``catenoidHalf`` at finite ones).
    eps : float
        Offset ``1/k``: the barriers take ``g(p) +- eps`` at ``p``.
    rho, r : float, optional
        Exterior circle radius / equidistant distance; measured from the
        domain when omitted.

    Raises
    ------
    BarrierError
        The geometric or height precondition of the construction fails.
    """
    z = p.z if isinstance(p, DiskPoint) else complex(p)
    if kind == "auto":
        kind = "asymptoticScherk" if abs(abs(z) - 1.0) < 1e-12 else "catenoidHalf"
    if kind not in BARRIER_KINDS:
        raise ValueError(f"unknown barrier kind {kind!r}")
    if not eps > 0:
        raise ValueError("eps must be positive")
    for s in problem.data.discontinuities:
        if abs(s.point - z) < 1e-12:
            raise BarrierError("barriers are built at continuity points of the data only")
    gp, _ = _data_at(problem, z)
    ideal = abs(abs(z) - 1.0) < 1e-12
    if kind == "constant":
        return _constant(problem, z, gp, eps)
    if kind == "asymptoticScherk":
        if not ideal:
            raise BarrierError("asymptoticScherk needs an ideal point")
        return _asymptotic(problem, z, gp, eps, delta)
    if ideal:
        raise BarrierError(f"{kind} needs a finite boundary point")
    if kind == "catenoidHalf":
        return _catenoid(problem, z, gp, eps, rho)
    if kind == "equidistantSurface":
        return _equidistant(problem, z, gp, eps, r)
    return _scherk_convex(problem, z, gp, eps, cap, resolution, sizes)
