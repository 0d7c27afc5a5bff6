"""Existence and nonexistence verdicts for prescribed asymptotic boundaries.

Curves live on the boundary cylinder ``S^1 x R`` and are chains of
segments: horizontal arcs, vertical segments and graphs of sampled height
functions over an arc. Angles are unwrapped reals: an arc from ``t0`` to
``t1`` turns by ``t1 - t0`` (negative means clockwise).

Rules, first match wins (``eps_w`` is the width tolerance):

1. closed, degree 0, width ``< pi - eps_w``: NonexistentProper;
2. closed, degree 0, ``|width - pi| <= eps_w``: NonexistentWithBoundaryContinuity;
3. width ``< pi - eps_w`` and the projection omits an open arc: NonexistentProper;
4. a boundary of a translation-invariant surface ``M_d``: ExistsConstructive,
   with ``d`` recovered by inverting ``H`` or ``G``;
5. a bounded graph over the ideal boundary of the whole plane, or of an
   attached admissible domain within the height bound: ExistsBySolver;

otherwise Undetermined.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .citations import describe
from .families import DivergenceError, FamilyDomainError, catenoid_height, height_G, height_H
from .families import invert_G, invert_H
from .geometry import (DomainSpec, EAdmissibilityError, exterior_circle_radius,
                       exterior_equidistant_curvature)

__all__ = ["ClassifierError", "Segment", "AsymptoticCurve", "Verdict", "DECISIONS", "EPS_W",
           "slab_extent", "homology_degree", "projection_gap", "classify", "model_curve",
           "load_curve"]

EPS_W = 1e-9
TWO_PI = 2.0 * math.pi
_CHAIN_TOL = 1e-9
DECISIONS = ("NonexistentProper", "NonexistentWithBoundaryContinuity", "ExistsConstructive",
             "ExistsBySolver", "Undetermined")


class ClassifierError(ValueError):
    """Ill-formed curve."""


@dataclass(frozen=True)
class Segment:
    """One piece of an asymptotic curve.

    ``kind`` is ``"arc"`` (height ``t0`` from angle ``theta0`` to
    ``theta1``), ``"vertical"`` (angle ``theta0``, heights ``t0`` to ``t1``)
    or ``"graph"`` (``heights`` sampled uniformly from ``theta0`` to
    ``theta1``).
    """

    kind: str
    theta0: float
    theta1: float
    t0: float
    t1: float
    heights: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ("arc", "vertical", "graph"):
            raise ClassifierError(f"unknown segment kind {self.kind!r}")
        vals = (self.theta0, self.theta1, self.t0, self.t1) + tuple(self.heights)
        if not all(math.isfinite(v) for v in vals):
            raise ClassifierError("segment angles and heights must be finite")
        if self.kind == "graph" and len(self.heights) < 2:
            raise ClassifierError("graph segment needs at least two heights")
        if self.kind != "vertical" and self.theta0 == self.theta1:
            raise ClassifierError("arc and graph segments need distinct end angles")

    @classmethod
    def arc(cls, theta0: float, theta1: float, height: float) -> "Segment":
        return cls("arc", float(theta0), float(theta1), float(height), float(height))

    @classmethod
    def vertical(cls, theta: float, t0: float, t1: float) -> "Segment":
        return cls("vertical", float(theta), float(theta), float(t0), float(t1))

    @classmethod
    def graph(cls, theta0: float, theta1: float, heights: Sequence[float]) -> "Segment":
        h = tuple(float(v) for v in heights)
        return cls("graph", float(theta0), float(theta1), h[0], h[-1], h)

    @classmethod
    def from_json(cls, rec: dict) -> "Segment":
        try:
            kind = rec["kind"]
            if kind == "arc":
                return cls.arc(rec["from"], rec["to"], rec["height"])
            if kind == "vertical":
                return cls.vertical(rec["theta"], rec["from"], rec["to"])
            if kind == "graph":
                return cls.graph(rec["from"], rec["to"], rec["heights"])
        except (KeyError, TypeError) as exc:
            raise ClassifierError(f"bad segment {rec!r}: {exc}") from exc
        raise ClassifierError(f"unknown segment kind {kind!r}")

    def to_json(self) -> dict:
        if self.kind == "arc":
            return {"kind": "arc", "from": self.theta0, "to": self.theta1, "height": self.t0}
        if self.kind == "vertical":
            return {"kind": "vertical", "theta": self.theta0, "from": self.t0, "to": self.t1}
        return {"kind": "graph", "from": self.theta0, "to": self.theta1,
                "heights": list(self.heights)}

    @property
    def turn(self) -> float:
        return self.theta1 - self.theta0

    @property
    def height_range(self) -> Tuple[float, float]:
        vals = self.heights if self.kind == "graph" else (self.t0, self.t1)
        return min(vals), max(vals)

    def values(self, theta) -> np.ndarray:
        """Heights of an arc or graph at angles inside its span."""
        theta = np.asarray(theta, dtype=float)
        if self.kind == "arc":
            return np.full(theta.shape, self.t0)
        s = (theta - self.theta0) / self.turn
        grid = np.linspace(0.0, 1.0, len(self.heights))
        return np.interp(s, grid, self.heights)


def _same_angle(a: float, b: float, tol: float = _CHAIN_TOL) -> bool:
    d = (a - b) % TWO_PI
    return min(d, TWO_PI - d) <= tol


@dataclass(frozen=True)
class AsymptoticCurve:
    """Chain of segments on the boundary cylinder."""

    segments: Tuple[Segment, ...]
    closed: bool = True

    def __post_init__(self):
        if not self.segments:
            raise ClassifierError("curve has no segments")
        segs = self.segments
        pairs = list(zip(segs, segs[1:]))
        if self.closed:
            pairs.append((segs[-1], segs[0]))
        for a, b in pairs:
            if not (_same_angle(a.theta1, b.theta0) and abs(a.t1 - b.t0) <= _CHAIN_TOL):
                raise ClassifierError("segments do not chain continuously")

    @classmethod
    def from_json(cls, obj) -> "AsymptoticCurve":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or "segments" not in obj:
            raise ClassifierError("curve JSON needs a 'segments' list")
        segs = tuple(Segment.from_json(r) for r in obj["segments"])
        return cls(segs, bool(obj.get("closed", True)))

    def to_json(self) -> dict:
        return {"segments": [s.to_json() for s in self.segments], "closed": self.closed}

    def rotated(self, angle: float) -> "AsymptoticCurve":
        return AsymptoticCurve(tuple(
            Segment(s.kind, s.theta0 + angle, s.theta1 + angle, s.t0, s.t1, s.heights)
            for s in self.segments), self.closed)

    def translated(self, shift: float) -> "AsymptoticCurve":
        return AsymptoticCurve(tuple(
            Segment(s.kind, s.theta0, s.theta1, s.t0 + shift, s.t1 + shift,
                    tuple(h + shift for h in s.heights))
            for s in self.segments), self.closed)


@dataclass
class Verdict:
    """Decision, the rule that produced it and the numbers behind it."""

    decision: str
    rule: Optional[str]
    certificates: dict = field(default_factory=dict)
    citations: List[str] = field(default_factory=list)
    caveat: Optional[str] = None

    def to_dict(self) -> dict:
        out = {"decision": self.decision, "rule": self.rule,
               "statement": describe(self.rule) if self.rule else None,
               "citations": list(self.citations), "certificates": self.certificates}
        if self.caveat:
            out["caveat"] = self.caveat
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def load_curve(path: Union[str, Path]):
    """Read a curve file; returns ``(curve, domain or None)``.

    A top-level ``"domain"`` entry (DomainSpec JSON or a shorthand of the
    problem files) names the domain whose ideal boundary the curve lies
    over.
    """
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ClassifierError(f"{path}: {exc}") from exc
    curve = AsymptoticCurve.from_json(obj)
    domain = None
    if obj.get("domain") is not None:
        from .problem_io import ProblemFormatError, domain_from_json
        try:
            domain = domain_from_json(obj["domain"])
        except ProblemFormatError as exc:
            raise ClassifierError(str(exc)) from exc
    return curve, domain


# ---------------------------------------------------------------------------
# measurements

def slab_extent(c: AsymptoticCurve) -> Tuple[float, float]:
    """``(min, max)`` height over the curve."""
    lo = min(s.height_range[0] for s in c.segments)
    hi = max(s.height_range[1] for s in c.segments)
    return lo, hi


def homology_degree(c: AsymptoticCurve) -> int:
    """Winding degree of the angular projection of a closed curve."""
    if not c.closed:
        raise ClassifierError("homology degree needs a closed curve")
    total = sum(s.turn for s in c.segments) / TWO_PI
    k = round(total)
    if abs(total - k) > 1e-9:
        raise ClassifierError("angular turn of a closed curve is not a multiple of 2 pi")
    return int(k)


def _covered_intervals(c: AsymptoticCurve) -> List[Tuple[float, float]]:
    """Covered angles as closed intervals in ``[0, 2 pi)``, merged."""
    raw = []
    for s in c.segments:
        a, b = sorted((s.theta0, s.theta1))
        if b - a >= TWO_PI:
            return [(0.0, TWO_PI)]
        a0 = a % TWO_PI
        b0 = a0 + (b - a)
        if b0 > TWO_PI:
            raw.extend([(a0, TWO_PI), (0.0, b0 - TWO_PI)])
        else:
            raw.append((a0, b0))
    raw.sort()
    merged = [list(raw[0])]
    for a, b in raw[1:]:
        if a <= merged[-1][1] + 1e-15:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return [tuple(m) for m in merged]


def projection_gap(c: AsymptoticCurve, min_length: float = 1e-12
                   ) -> Optional[Tuple[float, float]]:
    """Largest open arc ``(start, end)`` (counterclockwise, ``start`` in
    ``[0, 2 pi)``) missed by the angular projection, or None."""
    iv = _covered_intervals(c)
    gaps = [(b0, a1) for (_, b0), (a1, _) in zip(iv, iv[1:])]
    # wrap-around gap from the last interval end to the first start
    gaps.append((iv[-1][1], iv[0][0] + TWO_PI))
    gaps = [(a % TWO_PI, a % TWO_PI + (b - a)) for a, b in gaps if b - a > min_length]
    if not gaps:
        return None
    best = max(gaps, key=lambda g: g[1] - g[0])
    return float(best[0]), float(best[1])


# ---------------------------------------------------------------------------
# model curves

def model_curve(d: float, theta1: float = -0.5 * math.pi, theta2: float = 0.5 * math.pi,
                center_height: float = 0.0) -> AsymptoticCurve:
    """Asymptotic boundary of the translation-invariant surface ``M_d`` for
    the geodesic with endpoints ``theta1 < theta2`` (``c1`` the arc between
    them counterclockwise).

    ``d > 1``: ``c1`` at heights ``+-H(d)`` joined by verticals at both
    ends (degree 0). ``0 < d < 1``: ``c1`` at ``G(d)``, the complementary
    arc at ``-G(d)``, joined by verticals (degree 1).
    """
    if not theta1 < theta2 < theta1 + TWO_PI:
        raise ValueError("need theta1 < theta2 < theta1 + 2 pi")
    m = center_height
    if d > 1:
        T = float(height_H(d))
        segs = (Segment.arc(theta1, theta2, m - T), Segment.vertical(theta2, m - T, m + T),
                Segment.arc(theta2, theta1, m + T), Segment.vertical(theta1, m + T, m - T))
    elif 0 < d < 1:
        T = float(height_G(d))
        segs = (Segment.arc(theta1, theta2, m + T), Segment.vertical(theta2, m + T, m - T),
                Segment.arc(theta2, theta1 + TWO_PI, m - T),
                Segment.vertical(theta1, m - T, m + T))
    else:
        raise ValueError("model curves need d in (0, 1) or d > 1 (d = 1 is unbounded)")
    return AsymptoticCurve(segs, True)


def _match_model(c: AsymptoticCurve) -> Optional[dict]:
    """Rotate the segment list to ``arc, vertical, arc, vertical`` and test
    both model patterns exactly (up to chaining tolerance)."""
    segs = c.segments
    if not c.closed or len(segs) != 4:
        return None
    for k in range(4):
        rot = segs[k:] + segs[:k]
        if [s.kind for s in rot] != ["arc", "vertical", "arc", "vertical"]:
            continue
        a0, v1, a2, v3 = rot
        span = abs(a0.turn)
        if not 0 < span < TWO_PI - _CHAIN_TOL:
            continue
        jump = abs(a2.t0 - a0.t0)
        if jump <= 0:
            continue
        # both verticals must span the full jump
        if not (abs(abs(v1.t1 - v1.t0) - jump) <= _CHAIN_TOL
                and abs(abs(v3.t1 - v3.t0) - jump) <= _CHAIN_TOL):
            continue
        if abs(a2.turn + a0.turn) <= _CHAIN_TOL:
            return {"pattern": "d>1", "half_height": 0.5 * jump, "arc": [a0.theta0, a0.theta1]}
        if (math.copysign(1.0, a2.turn) == math.copysign(1.0, a0.turn)
                and abs(abs(a2.turn + a0.turn) - TWO_PI) <= _CHAIN_TOL):
            return {"pattern": "d<1", "half_height": 0.5 * jump, "arc": [a0.theta0, a0.theta1]}
    return None


# ---------------------------------------------------------------------------
# graphs over the ideal boundary

def _graph_structure(c: AsymptoticCurve) -> Optional[dict]:
    """Describe ``c`` as a graph with jumps: non-vertical pieces turn the
    same way and never overlap. Returns None otherwise."""
    flat = [s for s in c.segments if s.kind != "vertical"]
    if not flat:
        return None
    sign = math.copysign(1.0, flat[0].turn)
    if any(math.copysign(1.0, s.turn) != sign for s in flat):
        return None
    turn = sum(abs(s.turn) for s in flat)
    if turn > TWO_PI + _CHAIN_TOL:
        return None
    jumps = []
    for s in c.segments:
        if s.kind == "vertical" and s.t0 != s.t1:
            jumps.append({"theta": s.theta0 % TWO_PI, "A": min(s.t0, s.t1), "B": max(s.t0, s.t1)})
    return {"turn": turn, "jumps": jumps, "direction": int(sign)}


def _curve_data(c: AsymptoticCurve):
    """Height function ``g(theta)`` of a graph curve."""
    flat = [s for s in c.segments if s.kind != "vertical"]

    def g(theta):
        theta = np.asarray(theta, dtype=float)
        out = np.full(theta.shape, np.nan)
        for s in flat:
            lo, hi = sorted((s.theta0, s.theta1))
            rel = lo + (theta - lo) % TWO_PI
            inside = np.isnan(out) & (rel <= hi)
            if np.any(inside):
                out[inside] = s.values(rel[inside])
        return out
    return g


def _confirm(c: AsymptoticCurve, domain: Optional[DomainSpec], resolution: int) -> dict:
    from .grid import BoundaryData, Discontinuity, build_problem
    from .solver import solve
    from .verify import verify_solution

    st = _graph_structure(c)
    discs = tuple(Discontinuity(complex(np.exp(1j * j["theta"])), j["A"], j["B"])
                  for j in st["jumps"])
    dom = DomainSpec.whole_plane() if domain is None else domain
    data = BoundaryData(asymptotic=_curve_data(c), discontinuities=discs)
    prob = build_problem(dom, data, resolution)
    u, rep = solve(prob)
    ver = verify_solution(u)
    return {"resolution": resolution, "status": rep.status, "residual": rep.residual,
            "verified": ver.passed, "failed_checks": ver.failed()}


# ---------------------------------------------------------------------------
# decision procedure

def classify(c: AsymptoticCurve, domain: Optional[DomainSpec] = None, eps_w: float = EPS_W,
             confirm: bool = False, resolution: int = 65) -> Verdict:
    """Apply the rule table to a curve.

    Parameters
    ----------
    c : AsymptoticCurve
    domain : DomainSpec, optional
        Domain whose ideal boundary the curve is a graph over (zero data on
        its finite boundary); the whole plane when omitted.
    eps_w : float
        Tolerance for comparing the width with ``pi``.
    confirm : bool
        For solver-backed existence, also run the solver and attach its
        report as evidence.
    """
    lo, hi = slab_extent(c)
    width = hi - lo
    cert = {"slab": [lo, hi], "width": width, "eps_w": eps_w}
    degree = homology_degree(c) if c.closed else None
    cert["degree"] = degree
    gap = projection_gap(c)
    cert["projection_gap"] = list(gap) if gap else None

    if c.closed and degree == 0:
        if width < math.pi - eps_w:
            return Verdict("NonexistentProper", "Cor. 2.2(1)", cert,
                           ["Cor. 2.2(1a)", "Cor. 2.2(1b)", "Thm 2.1"])
        if abs(width - math.pi) <= eps_w:
            return Verdict("NonexistentWithBoundaryContinuity", "Cor. 2.2(2)", cert,
                           ["Cor. 2.2(2)", "Thm 2.1"], caveat=describe("Cor. 2.2(2)"))
    if width < math.pi - eps_w and gap is not None:
        return Verdict("NonexistentProper", "Cor. 2.3", cert, ["Cor. 2.3", "Thm 2.1"])

    model = _match_model(c)
    if model is not None:
        T = model["half_height"]
        try:
            if model["pattern"] == "d>1":
                d = invert_H(T)
                back = float(height_H(d))
            else:
                d = invert_G(T)
                back = float(height_G(d))
        except (FamilyDomainError, DivergenceError) as exc:
            cert["model"] = {**model, "error": str(exc)}
        else:
            cert["model"] = {**model, "d": d, "height": back, "height_defect": abs(back - T)}
            return Verdict("ExistsConstructive", "Prop. 2.5", cert, ["Prop. 2.5"])

    graph = _graph_structure(c)
    if graph is not None and c.closed and domain is None and abs(degree or 0) == 1 \
            and abs(graph["turn"] - TWO_PI) <= _CHAIN_TOL:
        cert["graph"] = graph
        rule = "Cor. 4.6" if graph["jumps"] else "Remark 4.7(2)"
        v = Verdict("ExistsBySolver", rule, cert, [rule, "Thm 4.5"])
        if confirm:
            cert["solver"] = _confirm(c, None, resolution)
        return v
    if graph is not None and domain is not None:
        bound = _domain_bound(domain, cert)
        need = max(abs(lo), abs(hi))
        cert["graph"] = graph
        if bound is not None and need <= bound[1] and _covers_ideal_boundary(c, domain):
            v = Verdict("ExistsBySolver", bound[0], cert, [bound[0], "Thm 4.5"])
            if confirm:
                cert["solver"] = _confirm(c, domain, resolution)
            return v
    return Verdict("Undetermined", None, cert, [])


def _domain_bound(domain: DomainSpec, cert: dict):
    """Best available height bound for graphs over ``domain``."""
    options = []
    rho = exterior_circle_radius(domain)
    cert["rho_omega"] = rho
    if rho > 0:
        options.append(("Thm 5.5", float(catenoid_height(rho))))
    try:
        r = exterior_equidistant_curvature(domain)
    except EAdmissibilityError:
        r = None
    cert["r_omega"] = r
    if r is not None and math.isfinite(r):
        options.append(("Thm 5.9", math.inf if r == 0 else float(height_H(math.cosh(r)))))
    if not options:
        return None
    best = max(options, key=lambda o: o[1])
    cert["height_bound"] = best[1]
    return best


def _covers_ideal_boundary(c: AsymptoticCurve, domain: DomainSpec) -> bool:
    th = np.linspace(0.0, TWO_PI, 2048, endpoint=False) + 1e-7
    seen = domain.ideal_boundary_mask(th)
    g = _curve_data(c)(th)
    return bool(np.all(np.isfinite(g[seen])))
