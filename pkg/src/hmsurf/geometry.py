"""Hyperbolic plane primitives in the Poincare disk and upper half-plane.

The disk is the canonical model. Points are complex numbers internally;
:class:`DiskPoint` and :class:`HalfPlanePoint` are thin validated wrappers.
Isometries are stored as ``z -> (alpha w + beta) / (conj(beta) w +
conj(alpha))`` with ``w = z`` or ``w = conj(z)``, normalized so that
``|alpha|^2 - |beta|^2 = 1``.

Side convention for a geodesic with endpoints ``q1, q2``: the positive
side is the one whose ideal boundary is the counterclockwise arc ``c1``
from ``q1`` to ``q2``.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "AsymptoticPointError",
    "DiskPoint",
    "HalfPlanePoint",
    "Geodesic",
    "EquidistantCurve",
    "Isometry",
    "Arc",
    "Component",
    "DomainSpec",
    "hyperbolic_distance",
    "signed_distance_to_geodesic",
    "apply_isometry",
    "disk_halfplane_convert",
    "to_halfplane",
    "to_disk",
    "exterior_circle_radius",
    "exterior_equidistant_curvature",
    "EAdmissibilityError",
    "RHO_MAX",
]

TWO_PI = 2.0 * math.pi
RHO_MAX = 10.0
_BOUNDARY_TOL = 1e-12


class AsymptoticPointError(ValueError):
    """An operation needing an interior point received an ideal point."""


class EAdmissibilityError(ValueError):
    """A boundary component does not have two asymptotic endpoints."""


# ---------------------------------------------------------------------------
# points

@dataclass(frozen=True)
class DiskPoint:
    """Point of the closed Poincare disk.

    ``asymptotic=True`` marks an ideal point; its coordinates are projected
    onto the unit circle.
    """

    x: float
    y: float
    asymptotic: bool = False

    def __post_init__(self):
        r = math.hypot(self.x, self.y)
        if self.asymptotic:
            if abs(r - 1.0) > 1e-9:
                raise ValueError(f"asymptotic point must lie on |z| = 1, got |z| = {r}")
            object.__setattr__(self, "x", self.x / r)
            object.__setattr__(self, "y", self.y / r)
        elif not r < 1.0:
            raise ValueError(f"interior disk point needs |z| < 1, got |z| = {r}")

    @classmethod
    def from_complex(cls, z: complex, asymptotic: bool = False) -> "DiskPoint":
        return cls(float(z.real), float(z.imag), asymptotic)

    @classmethod
    def at_angle(cls, theta: float) -> "DiskPoint":
        return cls(math.cos(theta), math.sin(theta), True)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @property
    def angle(self) -> float:
        return math.atan2(self.y, self.x) % TWO_PI


@dataclass(frozen=True)
class HalfPlanePoint:
    """Point of the closed upper half-plane; ``at_infinity`` marks the ideal
    point at infinity."""

    x: float
    y: float
    at_infinity: bool = False

    def __post_init__(self):
        if not self.at_infinity and self.y < 0:
            raise ValueError(f"half-plane point needs y >= 0, got y = {self.y}")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @property
    def on_boundary(self) -> bool:
        return self.at_infinity or self.y == 0.0


# ---------------------------------------------------------------------------
# model conversion

def to_halfplane(z):
    """Cayley map from the disk to the half-plane, ``w = (z + i) / (i z + 1)``.

    Sends 0 to ``i`` and 1 to 1; the disk point ``i`` goes to infinity.
    Vectorized over complex arrays.
    """
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (z + 1j) / (1j * z + 1.0)


def to_disk(w):
    """Inverse Cayley map, ``z = (w - i) / (1 - i w)``."""
    w = np.asarray(w, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (w - 1j) / (1.0 - 1j * w)


def disk_halfplane_convert(p, direction: str):
    """Convert a point between models.

    Parameters
    ----------
    p : DiskPoint or HalfPlanePoint
    direction : {"toHalfPlane", "toDisk"}

    Returns
    -------
    HalfPlanePoint or DiskPoint
        The disk pole ``i`` converts to ``HalfPlanePoint(..., at_infinity=True)``
        and that point converts back to the disk point ``i``.
    """
    if direction == "toHalfPlane":
        if not isinstance(p, DiskPoint):
            raise TypeError("toHalfPlane expects a DiskPoint")
        if p.asymptotic and abs(p.z - 1j) < 1e-15:
            return HalfPlanePoint(math.inf, math.inf, at_infinity=True)
        w = complex(to_halfplane(p.z))
        y = 0.0 if p.asymptotic else max(w.imag, 0.0)
        return HalfPlanePoint(w.real, y)
    if direction == "toDisk":
        if not isinstance(p, HalfPlanePoint):
            raise TypeError("toDisk expects a HalfPlanePoint")
        if p.at_infinity:
            return DiskPoint(0.0, 1.0, asymptotic=True)
        z = complex(to_disk(p.z))
        return DiskPoint(z.real, z.imag, asymptotic=(p.y == 0.0))
    raise ValueError("direction must be 'toDisk' or 'toHalfPlane'")


# ---------------------------------------------------------------------------
# distances

def _distance_complex(p, q):
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    num = np.abs(p - q)
    den = np.abs(1.0 - np.conj(p) * q)
    return 2.0 * np.arctanh(num / den)


def hyperbolic_distance(p: DiskPoint, q: DiskPoint) -> float:
    """Hyperbolic distance ``2 artanh(|p - q| / |1 - conj(p) q|)``."""
    if p.asymptotic or q.asymptotic:
        raise AsymptoticPointError("distance to an asymptotic point is infinite")
    return float(_distance_complex(p.z, q.z))


# ---------------------------------------------------------------------------
# isometries

@dataclass(frozen=True)
class Isometry:
    """Orientation-preserving or -reversing isometry of the disk."""

    alpha: complex = 1.0 + 0.0j
    beta: complex = 0.0j
    reflect: bool = False

    def __post_init__(self):
        det = abs(self.alpha) ** 2 - abs(self.beta) ** 2
        if not det > 0:
            raise ValueError("isometry needs |alpha| > |beta|")
        s = math.sqrt(det)
        object.__setattr__(self, "alpha", complex(self.alpha) / s)
        object.__setattr__(self, "beta", complex(self.beta) / s)

    # constructors --------------------------------------------------------
    @classmethod
    def identity(cls) -> "Isometry":
        return cls()

    @classmethod
    def rotation_about_origin(cls, angle: float) -> "Isometry":
        return cls(cmath.exp(0.5j * angle), 0.0)

    @classmethod
    def moving_to_origin(cls, c: complex) -> "Isometry":
        """Isometry ``z -> (z - c) / (1 - conj(c) z)``."""
        c = complex(c)
        return cls(1.0, -c)

    @classmethod
    def rotation(cls, center: DiskPoint, angle: float) -> "Isometry":
        """Rotation by ``angle`` about an interior point."""
        m = cls.moving_to_origin(center.z)
        return m.inverse() @ cls.rotation_about_origin(angle) @ m

    @classmethod
    def translation(cls, geodesic: "Geodesic", length: float) -> "Isometry":
        """Translation by ``length`` along ``geodesic``, moving from ``q2``
        toward ``q1``."""
        t = geodesic.frame()
        tau = cls(math.cosh(0.5 * length), math.sinh(0.5 * length))
        return t.inverse() @ tau @ t

    @classmethod
    def reflection(cls, geodesic: "Geodesic") -> "Isometry":
        t = geodesic.frame()
        return t.inverse() @ cls(1.0, 0.0, reflect=True) @ t

    # algebra -------------------------------------------------------------
    def __matmul__(self, other: "Isometry") -> "Isometry":
        """Composition ``(self @ other)(z) = self(other(z))``."""
        a2, b2 = other.alpha, other.beta
        if self.reflect:
            a2, b2 = a2.conjugate(), b2.conjugate()
        a1, b1 = self.alpha, self.beta
        alpha = a1 * a2 + b1 * b2.conjugate()
        beta = a1 * b2 + b1 * a2.conjugate()
        return Isometry(alpha, beta, self.reflect != other.reflect)

    def inverse(self) -> "Isometry":
        a, b = self.alpha, self.beta
        ia, ib = a.conjugate(), -b
        if self.reflect:
            ia, ib = ia.conjugate(), ib.conjugate()
        return Isometry(ia, ib, self.reflect)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        w = np.conj(z) if self.reflect else z
        out = (self.alpha * w + self.beta) / (np.conj(self.beta) * w + np.conj(self.alpha))
        return out if out.ndim else complex(out)

    def derivatives(self, z):
        """Holomorphic derivatives ``(F', F'')`` of the Mobius part at ``w``,
        where ``w = conj(z)`` for reflections."""
        z = np.asarray(z, dtype=complex)
        w = np.conj(z) if self.reflect else z
        den = np.conj(self.beta) * w + np.conj(self.alpha)
        return 1.0 / den ** 2, -2.0 * np.conj(self.beta) / den ** 3

    def apply(self, p: DiskPoint) -> DiskPoint:
        w = complex(self(p.z))
        if p.asymptotic:
            w = w / abs(w)
        else:
            r = abs(w)
            if r >= 1.0:
                w = w / r * (1.0 - 1e-16)
        return DiskPoint(w.real, w.imag, p.asymptotic)


def apply_isometry(p: DiskPoint, iso: Isometry) -> DiskPoint:
    """Apply ``iso`` to ``p``; ideal points stay on the unit circle."""
    return iso.apply(p)


# ---------------------------------------------------------------------------
# geodesics and equidistants

@dataclass(frozen=True)
class Geodesic:
    """Complete geodesic with ideal endpoints at angles ``theta1 < theta2``
    in ``[0, 2 pi)``.

    Construction from two arbitrary angles sorts them; the positive side is
    the one bounded at infinity by the counterclockwise arc from ``q1`` to
    ``q2``.
    """

    theta1: float
    theta2: float

    def __post_init__(self):
        a = float(self.theta1) % TWO_PI
        b = float(self.theta2) % TWO_PI
        if abs(a - b) < 1e-12 or abs(abs(a - b) - TWO_PI) < 1e-12:
            raise ValueError("geodesic endpoints must be distinct")
        if b < a:
            a, b = b, a
        object.__setattr__(self, "theta1", a)
        object.__setattr__(self, "theta2", b)

    @classmethod
    def through(cls, p: DiskPoint, q: DiskPoint) -> "Geodesic":
        """Geodesic through two distinct points (interior or ideal)."""
        if p.asymptotic and q.asymptotic:
            return cls(p.angle, q.angle)
        if p.asymptotic:
            p, q = q, p
        m = Isometry.moving_to_origin(p.z)
        w = complex(m(q.z))
        phi = cmath.phase(w)
        mi = m.inverse()
        e1 = complex(mi(cmath.exp(1j * phi)))
        e2 = complex(mi(-cmath.exp(1j * phi)))
        return cls(cmath.phase(e1), cmath.phase(e2))

    @property
    def q1(self) -> DiskPoint:
        return DiskPoint.at_angle(self.theta1)

    @property
    def q2(self) -> DiskPoint:
        return DiskPoint.at_angle(self.theta2)

    def frame(self) -> Isometry:
        """Isometry taking ``q1 -> 1``, ``q2 -> -1`` and the positive side to
        the upper half-disk."""
        delta = 0.5 * (self.theta2 - self.theta1)
        mid = self.theta1 + delta
        rot = Isometry.rotation_about_origin(-(mid - 0.5 * math.pi))
        s = math.cos(delta) / (1.0 + math.sin(delta))
        return Isometry.moving_to_origin(1j * s) @ rot

    def signed_distance(self, z):
        """Vectorized signed distance for complex ``z``."""
        w = np.asarray(self.frame()(z), dtype=complex)
        return np.arcsinh(2.0 * w.imag / (1.0 - np.abs(w) ** 2))

    def point_at(self, s: float) -> DiskPoint:
        """Point at signed arclength ``s`` from the foot of the origin's
        perpendicular, increasing toward ``q1``."""
        w = math.tanh(0.5 * s)
        return DiskPoint.from_complex(complex(self.frame().inverse()(w)))

    def arc(self) -> "Arc":
        """Euclidean representation oriented from ``q1`` to ``q2``."""
        fi = self.frame().inverse()
        return Arc.through(complex(fi(1.0)), complex(fi(0.0)), complex(fi(-1.0)))


def signed_distance_to_geodesic(p: DiskPoint, g: Geodesic) -> float:
    """Signed hyperbolic distance, positive on the side of ``c1``."""
    if p.asymptotic:
        raise AsymptoticPointError("signed distance of an ideal point is infinite")
    return float(g.signed_distance(p.z))


@dataclass(frozen=True)
class EquidistantCurve:
    """Curve at hyperbolic distance ``distance`` from ``base``.

    ``side="right"`` is the positive side of ``base`` (the side of ``c1``,
    which lies to the right when travelling from ``q1`` to ``q2``).
    """

    base: Geodesic
    distance: float
    side: str = "right"

    def __post_init__(self):
        if self.distance < 0:
            raise ValueError("equidistant distance must be nonnegative")
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")

    @property
    def curvature(self) -> float:
        return math.tanh(self.distance)

    @property
    def signed(self) -> float:
        return self.distance if self.side == "right" else -self.distance

    def arc(self) -> "Arc":
        """Euclidean circle arc from ``q1`` to ``q2``."""
        fi = self.base.frame().inverse()
        mid = 1j * math.tanh(0.5 * self.signed)
        return Arc.through(complex(fi(1.0)), complex(fi(mid)), complex(fi(-1.0)))


# ---------------------------------------------------------------------------
# Euclidean arcs

def _angle_in_sweep(phi, start, sweep):
    if sweep >= 0:
        rel = np.mod(phi - start, TWO_PI)
        return rel <= sweep + 1e-12
    rel = np.mod(start - phi, TWO_PI)
    return rel <= -sweep + 1e-12


@dataclass(frozen=True)
class Arc:
    """Euclidean circle arc or segment in the closed disk.

    Circles are ``center + radius * exp(i phi)`` for ``phi`` from ``start``
    through ``start + sweep``; segments run from ``p0`` to ``p1``.
    """

    kind: str
    center: complex = 0j
    radius: float = 0.0
    start: float = 0.0
    sweep: float = 0.0
    p0: complex = 0j
    p1: complex = 0j

    @classmethod
    def segment(cls, p0: complex, p1: complex) -> "Arc":
        return cls("line", p0=complex(p0), p1=complex(p1))

    @classmethod
    def circle(cls, center: complex, radius: float, start: float, sweep: float) -> "Arc":
        return cls("circle", center=complex(center), radius=float(radius),
                   start=float(start), sweep=float(sweep))

    @classmethod
    def through(cls, a: complex, m: complex, b: complex) -> "Arc":
        """Arc from ``a`` through ``m`` to ``b``; a segment if collinear."""
        d = 2.0 * ((a.real - b.real) * (m.imag - b.imag)
                   - (m.real - b.real) * (a.imag - b.imag))
        scale = max(abs(a - m), abs(m - b), abs(a - b)) ** 2
        if abs(d) < 1e-13 * scale:
            return cls.segment(a, b)
        a2, m2, b2 = abs(a) ** 2, abs(m) ** 2, abs(b) ** 2
        ux = (a2 * (m.imag - b.imag) + m2 * (b.imag - a.imag) + b2 * (a.imag - m.imag))
        uy = (a2 * (b.real - m.real) + m2 * (a.real - b.real) + b2 * (m.real - a.real))
        c = complex(ux, uy) / d
        R = abs(a - c)
        pa, pm, pb = (cmath.phase(v - c) for v in (a, m, b))
        ccw = (pb - pa) % TWO_PI
        if (pm - pa) % TWO_PI <= ccw:
            sweep = ccw
        else:
            sweep = ccw - TWO_PI
        return cls.circle(c, R, pa, sweep)

    @classmethod
    def full_circle(cls, center: complex, radius: float, ccw: bool = True) -> "Arc":
        return cls.circle(center, radius, 0.0, TWO_PI if ccw else -TWO_PI)

    # evaluation ------------------------------------------------------------
    def point(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind == "line":
            return self.p0 + s * (self.p1 - self.p0)
        return self.center + self.radius * np.exp(1j * (self.start + s * self.sweep))

    def tangent(self, s):
        """Unit tangent in the direction of travel."""
        s = np.asarray(s, dtype=float)
        if self.kind == "line":
            d = self.p1 - self.p0
            return np.full(s.shape, d / abs(d), dtype=complex)
        sgn = 1.0 if self.sweep >= 0 else -1.0
        return sgn * 1j * np.exp(1j * (self.start + s * self.sweep))

    @property
    def length(self) -> float:
        if self.kind == "line":
            return abs(self.p1 - self.p0)
        return self.radius * abs(self.sweep)

    @property
    def closed(self) -> bool:
        return self.kind == "circle" and abs(abs(self.sweep) - TWO_PI) < 1e-12

    def start_point(self) -> complex:
        return complex(self.point(0.0))

    def end_point(self) -> complex:
        return complex(self.point(1.0))

    def samples(self, n: int) -> np.ndarray:
        return self.point((np.arange(n) + 0.5) / n)

    def distance(self, z):
        """Euclidean distance from points ``z`` to this arc."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "line":
            d = self.p1 - self.p0
            t = np.clip(((z - self.p0) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
            return np.abs(z - (self.p0 + t * d))
        phi = np.angle(z - self.center)
        inside = _angle_in_sweep(phi, self.start, self.sweep)
        radial = np.abs(np.abs(z - self.center) - self.radius)
        ends = np.minimum(np.abs(z - self.start_point()), np.abs(z - self.end_point()))
        return np.where(inside, radial, ends)

    def project(self, z):
        """Parameter in ``[0, 1]`` of the nearest arc point."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "line":
            d = self.p1 - self.p0
            return np.clip(((z - self.p0) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
        phi = np.angle(z - self.center)
        if self.sweep >= 0:
            rel = np.mod(phi - self.start, TWO_PI)
        else:
            rel = np.mod(self.start - phi, TWO_PI)
        span = abs(self.sweep)
        s = rel / span
        # outside the sweep: the nearer endpoint
        beyond = rel > span
        d0 = np.abs(z - self.start_point())
        d1 = np.abs(z - self.end_point())
        return np.where(beyond, np.where(d0 <= d1, 0.0, 1.0), np.clip(s, 0.0, 1.0))

    def first_crossing(self, z0, dz):
        """Smallest ``t`` in ``(0, 1]`` with ``z0 + t dz`` on the arc, else ``inf``."""
        z0 = np.asarray(z0, dtype=complex)
        dz = np.asarray(dz, dtype=complex)
        tiny = 1e-12
        if self.kind == "line":
            e = self.p1 - self.p0
            den = (dz.real * e.imag - dz.imag * e.real)
            w = self.p0 - z0
            with np.errstate(divide="ignore", invalid="ignore"):
                t = (w.real * e.imag - w.imag * e.real) / den
                s = (w.real * dz.imag - w.imag * dz.real) / den
            ok = (np.abs(den) > 0) & (t > tiny) & (t <= 1 + tiny) & (s >= -tiny) & (s <= 1 + tiny)
            return np.where(ok, t, np.inf)
        w = z0 - self.center
        A = np.abs(dz) ** 2
        B = 2.0 * (w * np.conj(dz)).real
        Cc = np.abs(w) ** 2 - self.radius ** 2
        disc = B * B - 4 * A * Cc
        best = np.full(np.broadcast(z0, dz).shape, np.inf)
        with np.errstate(invalid="ignore"):
            sq = np.sqrt(np.where(disc >= 0, disc, np.nan))
            for sign in (-1.0, 1.0):
                t = (-B + sign * sq) / (2 * A)
                pt = z0 + t * dz
                phi = np.angle(pt - self.center)
                ok = (disc >= 0) & (t > tiny) & (t <= 1 + tiny) & _angle_in_sweep(phi, self.start, self.sweep)
                best = np.where(ok & (t < best), t, best)
        return best

    def ray_crossings(self, z):
        """Signed crossing count of the ray ``z + s`` (``s > 0``, tilted by a
        fixed irrational angle) with this arc. Used for winding numbers."""
        z = np.asarray(z, dtype=complex)
        rot = cmath.exp(-1j * _RAY_TILT)
        zr = z * rot
        count = np.zeros(z.shape)
        if self.kind == "line":
            a, b = self.p0 * rot, self.p1 * rot
            ya, yb = a.imag, b.imag
            if ya == yb:
                return count
            lo, hi = (ya, yb) if ya < yb else (yb, ya)
            y = zr.imag
            hit = (y >= lo) & (y < hi)
            with np.errstate(divide="ignore", invalid="ignore"):
                xs = a.real + (y - ya) * (b.real - a.real) / (yb - ya)
            sign = 1.0 if yb > ya else -1.0
            return np.where(hit & (xs > zr.real), sign, 0.0)
        c = self.center * rot
        start = self.start - _RAY_TILT
        dy = zr.imag - c.imag
        h2 = self.radius ** 2 - dy ** 2
        with np.errstate(invalid="ignore"):
            h = np.sqrt(np.where(h2 > 0, h2, np.nan))
        sgn = 1.0 if self.sweep >= 0 else -1.0
        for side in (-1.0, 1.0):
            xs = c.real + side * h
            phi = np.arctan2(dy, side * h)
            ok = (h2 > 0) & (xs > zr.real) & _angle_in_sweep_open(phi, start, self.sweep)
            # d(y)/d(phi) = R cos(phi); direction of travel flips with sweep sign.
            direction = sgn * np.sign(np.cos(phi))
            count = count + np.where(ok, direction, 0.0)
        return count

    def to_json(self) -> dict:
        if self.kind == "line":
            return {"type": "segment", "from": [self.p0.real, self.p0.imag],
                    "to": [self.p1.real, self.p1.imag]}
        return {"type": "circle_arc", "center": [self.center.real, self.center.imag],
                "radius": self.radius, "start": self.start, "sweep": self.sweep}


_RAY_TILT = 0.3141592653589793 * (math.sqrt(5.0) - 1.0)


def _angle_in_sweep_open(phi, start, sweep):
    # Half-open so a ray through a shared endpoint counts exactly once.
    if abs(abs(sweep) - TWO_PI) < 1e-12:
        return np.ones(np.shape(phi), dtype=bool)
    if sweep >= 0:
        rel = np.mod(phi - start, TWO_PI)
        return rel < sweep
    rel = np.mod(start - phi, TWO_PI)
    return rel < -sweep


# ---------------------------------------------------------------------------
# domains

_KINDS = ("jordan", "one_end", "two_ends")


@dataclass(frozen=True)
class Component:
    """Boundary component as a chain of arcs with the domain on the left."""

    kind: str
    arcs: Tuple[Arc, ...]
    records: Tuple[dict, ...] = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown component kind {self.kind!r}")
        if not self.arcs:
            raise ValueError("component needs at least one arc")
        for a, b in zip(self.arcs[:-1], self.arcs[1:]):
            if abs(a.end_point() - b.start_point()) > 1e-9:
                raise ValueError("component arcs do not chain")
        p0, p1 = self.arcs[0].start_point(), self.arcs[-1].end_point()
        on0, on1 = abs(abs(p0) - 1) < 1e-9, abs(abs(p1) - 1) < 1e-9
        if self.kind == "jordan" and (abs(p0 - p1) > 1e-9 or on0):
            raise ValueError("jordan component must close up inside the disk")
        if self.kind == "one_end" and not (on0 and abs(p0 - p1) < 1e-9):
            raise ValueError("one_end component must start and end at one ideal point")
        if self.kind == "two_ends" and not (on0 and on1 and abs(p0 - p1) > 1e-9):
            raise ValueError("two_ends component needs two distinct ideal endpoints")

    def closure_arcs(self) -> Tuple[Arc, ...]:
        """Arcs closing the component into a loop along the unit circle."""
        if self.kind != "two_ends":
            return ()
        p_end, p_start = self.arcs[-1].end_point(), self.arcs[0].start_point()
        a0 = cmath.phase(p_end)
        sweep = (cmath.phase(p_start) - a0) % TWO_PI
        return (Arc.circle(0j, 1.0, a0, sweep),)

    def winding(self, z):
        count = np.zeros(np.shape(z))
        for arc in self.arcs + self.closure_arcs():
            count = count + arc.ray_crossings(z)
        return count

    def signed_area(self) -> float:
        pts = np.concatenate([a.point(np.linspace(0, 1, 257)[:-1])
                              for a in self.arcs + self.closure_arcs()])
        x, y = pts.real, pts.imag
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def left_side(self, z):
        w = np.rint(self.winding(z))
        if self.signed_area() > 0:
            return w == 1
        return w == 0


@dataclass(frozen=True)
class DomainSpec:
    """Domain of the disk given by finite boundary components, each with the
    domain on its left. With no components, the domain is the whole plane."""

    components: Tuple[Component, ...] = ()

    # constructors ----------------------------------------------------------
    @classmethod
    def whole_plane(cls) -> "DomainSpec":
        return cls(())

    @classmethod
    def exterior_of_circle(cls, center: DiskPoint, radius: float) -> "DomainSpec":
        """Complement of the closed hyperbolic disk of ``radius`` about ``center``."""
        return cls((_circle_component(center, radius, interior=False),))

    @classmethod
    def disk(cls, center: DiskPoint, radius: float) -> "DomainSpec":
        """Open hyperbolic disk; a bounded domain, handy for lifts and tests."""
        return cls((_circle_component(center, radius, interior=True),))

    @classmethod
    def half_plane(cls, geodesic: Geodesic, side: str = "positive") -> "DomainSpec":
        """Side of a geodesic (``positive`` is the side of ``c1``)."""
        rec = {"type": "geodesic", "from": geodesic.theta2, "to": geodesic.theta1}
        if side != "positive":
            rec = {"type": "geodesic", "from": geodesic.theta1, "to": geodesic.theta2}
        return cls.from_json({"components": [{"kind": "two_ends", "arcs": [rec]}]})

    @classmethod
    def equidistant_side(cls, curve: EquidistantCurve, convex: bool = False) -> "DomainSpec":
        """Side of an equidistant curve not containing its base geodesic
        (``convex=False``, the concave side) or the side containing it."""
        t1, t2 = curve.base.theta1, curve.base.theta2
        # travelling q2 -> q1 the positive side lies on the left
        frm, to = (t2, t1) if curve.side == "right" else (t1, t2)
        rec_side = "left"
        if convex:
            frm, to, rec_side = to, frm, "right"
        rec = {"type": "equidistant", "from": frm, "to": to,
               "distance": curve.distance, "side": rec_side}
        return cls.from_json({"components": [{"kind": "two_ends", "arcs": [rec]}]})

    @classmethod
    def geodesic_polygon(cls, vertices: Sequence[DiskPoint]) -> "DomainSpec":
        """Geodesic polygon with counterclockwise vertices (ideal vertices are
        not allowed here)."""
        n = len(vertices)
        recs = []
        for i in range(n):
            p, q = vertices[i], vertices[(i + 1) % n]
            recs.append({"type": "geodesic_segment", "from": [p.x, p.y], "to": [q.x, q.y]})
        return cls.from_json({"components": [{"kind": "jordan", "arcs": recs}]})

    # serialization ---------------------------------------------------------
    @classmethod
    def from_json(cls, obj) -> "DomainSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        comps = []
        for c in obj.get("components", []):
            recs = tuple(c["arcs"])
            arcs = tuple(_arc_from_record(r) for r in recs)
            comps.append(Component(c["kind"], arcs, recs))
        return cls(tuple(comps))

    def to_json(self) -> dict:
        return {"components": [
            {"kind": c.kind, "arcs": list(c.records) or [a.to_json() for a in c.arcs]}
            for c in self.components]}

    # queries ---------------------------------------------------------------
    def contains(self, z, margin: float = 0.0):
        """Membership test for complex points (vectorized). ``margin`` also
        requires Euclidean distance above it from every boundary arc."""
        z = np.asarray(z, dtype=complex)
        inside = np.abs(z) < 1.0
        for comp in self.components:
            inside &= comp.left_side(z)
        if margin > 0:
            for arc, _ in self.boundary_arcs():
                inside &= arc.distance(z) > margin
        return inside

    def boundary_arcs(self) -> List[Tuple[Arc, int]]:
        return [(a, i) for i, c in enumerate(self.components) for a in c.arcs]

    def boundary_samples(self, samples: int):
        """``samples`` points per arc, with unit tangents and component ids.

        Parameter values avoid arc endpoints, so ideal endpoints are never
        returned.
        """
        pts, tans, ids = [], [], []
        for arc, i in self.boundary_arcs():
            s = (np.arange(samples) + 0.5) / samples
            pts.append(arc.point(s))
            tans.append(arc.tangent(s))
            ids.append(np.full(samples, i))
        if not pts:
            return np.zeros(0, complex), np.zeros(0, complex), np.zeros(0, int)
        return np.concatenate(pts), np.concatenate(tans), np.concatenate(ids)

    def nearest_boundary(self, z: complex):
        """``(point, unit tangent, component)`` of the boundary point nearest
        to ``z``; the domain lies to the left of the tangent."""
        best = None
        for arc, i in self.boundary_arcs():
            t = float(arc.project(z))
            pt = complex(arc.point(t))
            d = abs(pt - z)
            if best is None or d < best[0]:
                best = (d, pt, complex(arc.tangent(t)), i)
        if best is None:
            raise ValueError("domain has no finite boundary")
        return best[1], best[2], best[3]

    def ideal_boundary_mask(self, theta):
        """True where the ideal point ``exp(i theta)`` is in the closure of the
        domain at infinity (tested just inside the circle)."""
        z = (1.0 - 1e-9) * np.exp(1j * np.asarray(theta, dtype=float))
        return self.contains(z)


def _circle_component(center: DiskPoint, radius: float, interior: bool) -> Component:
    rec = {"type": "circle", "center": [center.x, center.y], "radius": float(radius),
           "orientation": "ccw" if interior else "cw"}
    return Component("jordan", (_arc_from_record(rec),), (rec,))


def _hyperbolic_circle(center: complex, radius: float) -> Tuple[complex, float]:
    """Euclidean center and radius of a hyperbolic circle."""
    m = Isometry.moving_to_origin(center).inverse()
    t = math.tanh(0.5 * radius)
    pts = [complex(m(t * cmath.exp(1j * a))) for a in (0.0, 2.0, 4.0)]
    arc = Arc.through(*pts)
    return arc.center, arc.radius


def _arc_from_record(r: dict) -> Arc:
    kind = r["type"]
    if kind == "geodesic":
        a, b = float(r["from"]), float(r["to"])
        g = Geodesic(a, b)
        arc = g.arc()
        if abs(arc.start_point() - cmath.exp(1j * a)) > 1e-9:
            arc = _reverse(arc)
        return arc
    if kind == "geodesic_segment":
        p = DiskPoint(*r["from"])
        q = DiskPoint(*r["to"])
        m = Isometry.moving_to_origin(p.z)
        mi = m.inverse()
        w = complex(m(q.z))
        mid = complex(mi(w * math.tanh(0.5 * math.atanh(abs(w))) / abs(w)))
        return Arc.through(p.z, mid, q.z)
    if kind == "equidistant":
        a, b = float(r["from"]), float(r["to"])
        g = Geodesic(a, b)
        side = r.get("side", "right")
        if g.theta1 != a % TWO_PI:
            side = "left" if side == "right" else "right"
        arc = EquidistantCurve(g, float(r["distance"]), side).arc()
        if abs(arc.start_point() - cmath.exp(1j * a)) > 1e-9:
            arc = _reverse(arc)
        return arc
    if kind == "circle":
        c = complex(*r["center"])
        ec, er = _hyperbolic_circle(c, float(r["radius"]))
        ccw = r.get("orientation", "ccw") == "ccw"
        return Arc.full_circle(ec, er, ccw)
    if kind == "segment":
        return Arc.segment(complex(*r["from"]), complex(*r["to"]))
    if kind == "circle_arc":
        return Arc.circle(complex(*r["center"]), r["radius"], r["start"], r["sweep"])
    raise ValueError(f"unknown arc record type {kind!r}")


def _reverse(arc: Arc) -> Arc:
    if arc.kind == "line":
        return Arc.segment(arc.p1, arc.p0)
    return Arc.circle(arc.center, arc.radius, arc.start + arc.sweep, -arc.sweep)


# ---------------------------------------------------------------------------
# admissibility measurements

def _boundary_frame(p: complex, tangent: complex) -> Isometry:
    """Isometry with ``p -> 0``, tangent -> +1; the exterior then lies below."""
    return Isometry.rotation_about_origin(-cmath.phase(tangent)) @ Isometry.moving_to_origin(p)


def _circle_probe(n: int = 192) -> np.ndarray:
    # Unit circle through 0 with center -i/2 scaled later; cluster near 0.
    u = np.linspace(-1.0, 1.0, n)
    psi = 0.5 * math.pi + math.pi * np.sign(u) * np.abs(u) ** 2
    ring = -0.5j + 0.5 * np.exp(1j * psi)
    inner = np.concatenate([-0.5j + s * 0.5 * np.exp(1j * np.linspace(0, TWO_PI, 48, endpoint=False))
                            for s in (0.0, 0.3, 0.6, 0.9)])
    return np.concatenate([ring[1:-1], inner])


_PROBE = _circle_probe()


def _circle_avoids(domain: DomainSpec, frame_inv: Isometry, rho: float, margin: float) -> bool:
    pts = frame_inv(math.tanh(rho) * _PROBE)
    return not np.any(domain.contains(pts, margin=margin))


def exterior_circle_radius(domain: DomainSpec, samples: int = 64,
                           rho_max: float = RHO_MAX, rel_tol: float = 1e-7,
                           diagnostics: Optional[list] = None) -> float:
    """Largest sampled exterior tangent circle radius, capped at ``rho_max``.

    At each sample point a hyperbolic circle of radius ``rho`` tangent to the
    boundary from outside is tested for avoiding the domain on a point
    cloud; the radius is found by bisection and the minimum over samples is
    returned. A return value of 0 means some sample admits no tangent circle
    at all (for instance a reflex corner).
    """
    if samples < 16:
        raise ValueError("samples must be at least 16")
    pts, tans, _ = domain.boundary_samples(samples)
    extra = _corner_points(domain)
    best = rho_max
    margin = 1e-9
    for p, t in list(zip(pts, tans)) + extra:
        fi = _boundary_frame(p, t).inverse()
        if _circle_avoids(domain, fi, best, margin):
            continue
        lo, hi = 0.0, best
        if not _circle_avoids(domain, fi, 1e-6, margin):
            if diagnostics is not None:
                diagnostics.append(f"no exterior circle at boundary point {p:.6g}")
            return 0.0
        lo = 1e-6
        while hi - lo > rel_tol * hi:
            mid = 0.5 * (lo + hi)
            if _circle_avoids(domain, fi, mid, margin):
                lo = mid
            else:
                hi = mid
        best = lo
    if diagnostics is not None and best == rho_max:
        diagnostics.append(f"probe cap rho_max = {rho_max} reached")
    return best


def _corner_points(domain: DomainSpec):
    """Arc junctions probed with both one-sided tangents."""
    out = []
    for comp in domain.components:
        arcs = comp.arcs
        n = len(arcs)
        for i in range(n):
            j = (i + 1) % n
            if j == 0 and comp.kind != "jordan":
                continue
            p = arcs[i].end_point()
            if abs(p) >= 1.0 - 1e-12:
                continue
            out.append((p, complex(arcs[i].tangent(1.0))))
            out.append((p, complex(arcs[j].tangent(0.0))))
    return out


def _equidistant_probe(r: float, n: int = 160) -> np.ndarray:
    """Points of the equidistant at distance ``r`` tangent to the real axis at
    0 and bending downward, in the boundary frame."""
    if r == 0:
        return np.tanh(np.linspace(-8, 8, n)) + 0j
    s = math.tanh(0.5 * r)
    e1 = (1 - 1j * s) / (1 + 1j * s)
    arc = Arc.through(e1, 0j, -e1.conjugate())
    u = np.linspace(-1, 1, n + 2)[1:-1]
    param = 0.5 + 0.5 * np.sign(u) * np.abs(u) ** 2
    return arc.point(param)


def exterior_equidistant_curvature(domain: DomainSpec, samples: int = 64,
                                   r_max: float = RHO_MAX, rel_tol: float = 1e-7,
                                   diagnostics: Optional[list] = None) -> float:
    """Estimate of the smallest ``r`` such that at every sampled boundary
    point an equidistant curve of curvature ``tanh r`` touches from outside
    and avoids the domain. Returns ``inf`` when even ``r_max`` fails."""
    for comp in domain.components:
        if comp.kind != "two_ends":
            raise EAdmissibilityError(
                "each boundary component must have exactly two asymptotic endpoints")
    pts, tans, _ = domain.boundary_samples(samples)
    margin = 1e-9
    worst = 0.0

    def ok(fi, r):
        return not np.any(domain.contains(fi(_equidistant_probe(r)), margin=margin))

    for p, t in list(zip(pts, tans)) + _corner_points(domain):
        fi = _boundary_frame(p, t).inverse()
        if ok(fi, worst):
            continue
        if not ok(fi, r_max):
            if diagnostics is not None:
                diagnostics.append(f"no exterior equidistant up to r = {r_max} at {p:.6g}")
            return math.inf
        lo, hi = worst, r_max
        while hi - lo > rel_tol * max(hi, 1e-3):
            mid = 0.5 * (lo + hi)
            if ok(fi, mid):
                hi = mid
            else:
                lo = mid
        worst = hi
    return worst
