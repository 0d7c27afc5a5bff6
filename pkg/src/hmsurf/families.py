"""Explicit minimal surfaces of H^2 x R and their height integrals.

* ``M_d``: surfaces invariant under hyperbolic translations along a
  geodesic, with profile ``lambda'(rho) = d / sqrt(cosh(rho)^2 - d^2)`` in
  the signed distance ``rho`` to the geodesic.
* Rotational catenoids with neck ``rho_n``, profile slope
  ``sinh(rho_n) / sqrt(sinh(r)^2 - sinh(rho_n)^2)``.
* Three half-plane graphs: ``l x``, ``(l/2) log(x^2 + y^2)`` and the Scherk
  wedge ``log((r + y) / x)``.

Heights: ``H(d)`` (``d > 1``) and ``G(d)`` (``0 < d < 1``) are the limits of
the ``M_d`` profiles, ``f(rho)`` the asymptotic height of the half catenoid
over the exterior of a circle of radius ``rho``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .geometry import DiskPoint, Geodesic, HalfPlanePoint, Isometry
from .operator import ScalarField, compose_profile
from .quadrature import (DEFAULT_TOL, Estimate, SingularIntegral, gauss_kronrod,
                         integrate_decaying_tail, integrate_sqrt_singular)

__all__ = [
    "DivergenceError",
    "FamilyDomainError",
    "height_H",
    "height_G",
    "catenoid_height",
    "catenoid_profile",
    "profile_lambda",
    "profile_lambda_array",
    "profile_slope",
    "profile_second_derivative",
    "principal_curvatures_profile",
    "eval_entire_family",
    "entire_family_field",
    "hyperbolic_family_field",
    "catenoid_field",
    "exterior_catenoid_neck",
    "exterior_catenoid_field",
    "invert_H",
    "invert_G",
    "ProfileCurve",
    "sample_profile",
    "sample_catenoid_profile",
    "FAMILY_KINDS",
]

FAMILY_KINDS = ("linear", "logarithmic", "scherk_wedge")
SQRT8 = 2.0 * math.sqrt(2.0)


class DivergenceError(ValueError):
    """Parameter too close to a point where the height integral diverges."""


class FamilyDomainError(ValueError):
    """Evaluation outside the domain of a family."""


def _x_over_sinh(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(invalid="ignore", over="ignore"):
        out = x / np.sinh(x)
    return np.where(x < 1e-8, 1.0 - x * x / 6.0, out)


# ---------------------------------------------------------------------------
# M_d integrand, d > 1

def _md_integrand(d):
    def f(u):
        c = np.cosh(u)
        return d / (c * np.sqrt(np.maximum(1.0 - (d / c) ** 2, 0.0)))
    return f


def _md_regularized(d):
    """``2 s f(a + s^2)`` using ``cosh(a+2x) - d = 2 sinh(a+x) sinh(x)``."""
    a = math.acosh(d)

    def g(s):
        x = 0.5 * s * s
        return 2.0 * d * np.sqrt(_x_over_sinh(x) / (np.sinh(a + x) * (np.cosh(a + 2 * x) + d)))
    return g


def _md_decay(d):
    # cosh(u)^2 - d^2 >= e^{2u}/8 once e^{2u} >= 8 d^2
    return SQRT8 * d, 1.0, max(math.acosh(d), math.log(SQRT8 * d))


def height_H(d: float, tol: float = DEFAULT_TOL, substitution: str = "s") -> Estimate:
    """Height ``H(d) = int_{acosh d}^inf d / sqrt(cosh^2 u - d^2) du``.

    Parameters
    ----------
    d : float
        Must satisfy ``d >= 1 + 1e-6``; ``H`` diverges as ``d -> 1``.
    tol : float
        Absolute error target.
    substitution : {"s", "v"}
        ``u = acosh(d) + s^2`` (default) or ``cosh u = d (1 + v)`` followed by
        ``v = s^2``. Both remove the endpoint singularity.

    Returns
    -------
    Estimate
    """
    d = float(d)
    if not d >= 1.0 + 1e-6:
        raise DivergenceError(f"H(d) diverges as d -> 1; refusing d = {d!r} < 1 + 1e-6")
    if substitution == "v":
        return _height_H_v(d, tol)
    a = math.acosh(d)
    si = SingularIntegral(_md_integrand(d), a, math.inf, tol,
                          regularized=_md_regularized(d), decay=_md_decay(d), check=False)
    return integrate_sqrt_singular(si)


def _height_H_v(d, tol):
    # cosh u = d (1 + v): du = d dv / sinh u, integrand 1 / sqrt(v (2 + v)).
    # With v = s^2 and s = w / (1 - w) the range becomes w in [0, 1).
    def g(w):
        s = w / (1.0 - w)
        v = s * s
        ds = 1.0 / (1.0 - w) ** 2
        return 2.0 * d * ds / (np.sqrt(2.0 + v) * np.sqrt(d * d * (1.0 + v) ** 2 - 1.0))
    # integrand ~ 2 / (d s^4) * ds ~ (1-w)^2 near w = 1, so it stays smooth
    return gauss_kronrod(g, 0.0, 1.0, tol=tol, initial_panels=8)


def height_G(d: float, tol: float = DEFAULT_TOL) -> Estimate:
    """Height ``G(d) = int_0^inf d / sqrt(cosh^2 u - d^2) du`` for
    ``1e-6 <= d <= 1 - 1e-6``."""
    d = float(d)
    if not (1e-6 <= d <= 1.0 - 1e-6):
        raise FamilyDomainError(f"G(d) needs 1e-6 <= d <= 1 - 1e-6, got {d!r}")
    f = _g_integrand(d)
    C, rate, U0 = SQRT8 * d, 1.0, max(0.0, math.log(SQRT8 * d), 1.0)
    head = gauss_kronrod(f, 0.0, U0, tol=0.5 * tol, initial_panels=8)
    tail = integrate_decaying_tail(f, U0, rate, C=C, U0=U0, tol=0.5 * tol)
    return Estimate(float(head) + float(tail), head.error + tail.error,
                    head.evaluations + tail.evaluations)


def _g_integrand(d):
    one_minus = 1.0 - d

    def f(u):
        sh = np.sinh(0.5 * u)
        cm = 2.0 * sh * sh + one_minus       # cosh u - d without cancellation
        return d / np.sqrt(cm * (np.cosh(u) + d))
    return f


# ---------------------------------------------------------------------------
# catenoids

def _cat_regularized(rho_n):
    sh = math.sinh(rho_n)

    def g(s):
        x = s * s
        return 2.0 * sh * np.sqrt(_x_over_sinh(x) / np.sinh(2.0 * rho_n + x))
    return g


def _cat_integrand(rho_n):
    sh = math.sinh(rho_n)

    def f(r):
        r = np.asarray(r, dtype=float)
        return sh / np.sqrt(np.sinh(r - rho_n) * np.sinh(r + rho_n))
    return f


def catenoid_height(rho: float, tol: float = DEFAULT_TOL) -> Estimate:
    """Asymptotic height ``f(rho)`` of the half catenoid with neck ``rho``."""
    rho = float(rho)
    if not rho >= 1e-6:
        raise FamilyDomainError(f"catenoid height needs rho >= 1e-6, got {rho!r}")
    # sinh(r-rho) sinh(r+rho) >= e^{2r} (1-e^{-2})^2 / 4 for r >= rho + 1
    C = 2.0 * math.sinh(rho) / (1.0 - math.exp(-2.0))
    si = SingularIntegral(_cat_integrand(rho), rho, math.inf, tol,
                          regularized=_cat_regularized(rho), decay=(C, 1.0, rho + 1.0),
                          check=False)
    return integrate_sqrt_singular(si)


def catenoid_profile(r: float, rho_neck: float, tol: float = DEFAULT_TOL) -> Estimate:
    """Height ``lambda_cat(r)`` of the catenoid above its neck circle."""
    r, rho_neck = float(r), float(rho_neck)
    if r < rho_neck:
        raise FamilyDomainError("catenoid profile is defined for r >= rho_neck")
    if r == rho_neck:
        return Estimate(0.0, 0.0)
    return gauss_kronrod(_cat_regularized(rho_neck), 0.0, math.sqrt(r - rho_neck), tol=tol,
                         initial_panels=4)


_GL20 = np.polynomial.legendre.leggauss(20)
_GL12 = np.polynomial.legendre.leggauss(12)
_PANEL = 0.05


def _fixed_rule(g, a, b, rule):
    x, w = rule
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    vals = g(mid[:, None] + half[:, None] * x[None, :])
    return half * (vals @ w)


def _cumulative(g, s_sorted, tol):
    """Cumulative integrals of ``g`` from 0 to each of ``s_sorted``.

    Adaptive panels give the integral up to each multiple of ``_PANEL``; the
    remainder up to each point uses a fixed Gauss rule, cross-checked
    against a lower-order one and recomputed adaptively where they disagree.
    """
    s_sorted = np.asarray(s_sorted, dtype=float)
    if len(s_sorted) == 0:
        return np.empty(0)
    K = int(math.ceil(s_sorted[-1] / _PANEL)) + 1
    per = tol / K
    base = np.zeros(K + 1)
    for k in range(K):
        base[k + 1] = base[k] + float(gauss_kronrod(g, k * _PANEL, (k + 1) * _PANEL, tol=per))
    k = np.minimum(np.floor(s_sorted / _PANEL).astype(int), K)
    left = k * _PANEL
    hi = _fixed_rule(g, left, s_sorted, _GL20)
    lo = _fixed_rule(g, left, s_sorted, _GL12)
    out = base[k] + hi
    bad = np.nonzero(~(np.abs(hi - lo) <= 0.1 * per))[0]
    for m in bad:
        out[m] = base[k[m]] + float(gauss_kronrod(g, left[m], s_sorted[m], tol=per))
    return out


def catenoid_profile_array(r, rho_neck: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Vectorized :func:`catenoid_profile`."""
    r = np.asarray(r, dtype=float)
    if np.any(r < rho_neck - 1e-12):
        raise FamilyDomainError("catenoid profile is defined for r >= rho_neck")
    s = np.sqrt(np.maximum(r.ravel() - rho_neck, 0.0))
    order = np.argsort(s)
    vals = np.empty(s.shape)
    vals[order] = _cumulative(_cat_regularized(rho_neck), s[order], tol)
    return vals.reshape(r.shape)


# ---------------------------------------------------------------------------
# M_d profiles

def profile_slope(rho, d: float):
    """``lambda'(rho) = d / sqrt(cosh^2 rho - d^2)``."""
    c = np.cosh(np.asarray(rho, dtype=float))
    return d / np.sqrt(c * c - d * d)


def profile_second_derivative(rho, d: float):
    """``lambda''(rho) = -d cosh(rho) sinh(rho) (cosh^2 rho - d^2)^(-3/2)``."""
    rho = np.asarray(rho, dtype=float)
    c = np.cosh(rho)
    return -d * c * np.sinh(rho) * (c * c - d * d) ** -1.5


def _check_profile_domain(rho, d):
    if d < 0:
        raise FamilyDomainError("d must be nonnegative")
    if d > 1:
        a = math.acosh(d)
        if np.any(np.asarray(rho) < a - 1e-12):
            raise FamilyDomainError(f"for d = {d} the profile needs rho >= acosh(d) = {a}")
    if d == 1 and np.any(np.asarray(rho) <= 0):
        raise FamilyDomainError("for d = 1 the profile needs rho > 0")


def profile_lambda(rho: float, d: float, tol: float = DEFAULT_TOL) -> Estimate:
    """Profile height ``lambda(rho; d)``.

    Normalized by ``lambda(acosh d) = 0`` for ``d > 1`` and ``lambda(0) = 0``
    (odd) for ``d < 1``. ``d = 1`` uses ``log tanh(rho/2)`` and ``d = 0`` is
    the horizontal slice.
    """
    rho, d = float(rho), float(d)
    _check_profile_domain(rho, d)
    if d == 0:
        return Estimate(0.0, 0.0)
    if d == 1:
        return Estimate(math.log(math.tanh(0.5 * rho)), 4 * np.finfo(float).eps)
    if d > 1:
        a = math.acosh(d)
        s = math.sqrt(max(rho - a, 0.0))
        if s == 0:
            return Estimate(0.0, 0.0)
        return gauss_kronrod(_md_regularized(d), 0.0, s, tol=tol, initial_panels=4)
    if rho == 0:
        return Estimate(0.0, 0.0)
    val = gauss_kronrod(_g_integrand(d), 0.0, abs(rho), tol=tol,
                        initial_panels=max(1, int(abs(rho))))
    sign = 1.0 if rho > 0 else -1.0
    return Estimate(sign * float(val), val.error, val.evaluations)


def profile_lambda_array(rho, d: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Vectorized profile evaluation by cumulative panel integration."""
    rho = np.asarray(rho, dtype=float)
    d = float(d)
    _check_profile_domain(rho, d)
    flat = rho.ravel()
    if d == 0:
        return np.zeros(rho.shape)
    if d == 1:
        return np.log(np.tanh(0.5 * rho))
    if d > 1:
        s = np.sqrt(np.maximum(flat - math.acosh(d), 0.0))
        order = np.argsort(s)
        vals = np.empty(s.shape)
        vals[order] = _cumulative(_md_regularized(d), s[order], tol)
        return vals.reshape(rho.shape)
    s = np.abs(flat)
    order = np.argsort(s)
    vals = np.empty(s.shape)
    vals[order] = _cumulative(_g_integrand(d), s[order], tol)
    return (np.sign(flat) * vals).reshape(rho.shape)


def principal_curvatures_profile(rho: float, d: float) -> Tuple[float, float]:
    """Principal curvatures ``(k1, k2)`` of ``M_d`` along the profile.

    ``k1 = lambda'' / (1 + lambda'^2)^(3/2)`` and
    ``k2 = tanh(rho) lambda' / sqrt(1 + lambda'^2)``. At the endpoint
    ``rho = acosh d`` of a ``d > 1`` profile the slope is infinite and the
    simplified forms ``k1 = -d sinh(rho)/cosh^2(rho) = -k2`` are returned.
    """
    rho, d = float(rho), float(d)
    _check_profile_domain(rho, d)
    if d == 0:
        return 0.0, 0.0
    if d == 1:
        l1 = 1.0 / math.sinh(rho)
        l2 = -math.cosh(rho) / math.sinh(rho) ** 2
    else:
        c2 = math.cosh(rho) ** 2 - d * d
        if c2 <= 1e-300:
            k = d * math.sinh(rho) / math.cosh(rho) ** 2
            return -k, k
        l1 = float(profile_slope(rho, d))
        l2 = float(profile_second_derivative(rho, d))
    w = 1.0 + l1 * l1
    return l2 / w ** 1.5, math.tanh(rho) * l1 / math.sqrt(w)


def invert_H(T: float, tol: float = 1e-12) -> float:
    """``d > 1`` with ``H(d) = T``; requires ``T > pi/2``."""
    if not T > 0.5 * math.pi:
        raise FamilyDomainError("H takes values in (pi/2, inf)")
    lo, hi = 1.0 + 1e-6, 2.0
    if T > float(height_H(lo)):
        raise DivergenceError("height too large to invert near d = 1")
    while float(height_H(hi, tol)) > T:
        hi *= 4.0
        if hi > 1e15:
            raise FamilyDomainError("height too close to pi/2 to invert")
    return brentq(lambda d: float(height_H(d, tol)) - T, lo, hi, xtol=1e-15, rtol=1e-15)


def invert_G(T: float, tol: float = 1e-12) -> float:
    """``0 < d < 1`` with ``G(d) = T``."""
    lo, hi = 1e-6, 1.0 - 1e-6
    if not float(height_G(lo)) < T < float(height_G(hi)):
        raise FamilyDomainError("height outside the range of G")
    return brentq(lambda d: float(height_G(d, tol)) - T, lo, hi, xtol=1e-15, rtol=1e-15)


# ---------------------------------------------------------------------------
# explicit half-plane families

def _entire_eval(kind: str, ell: float):
    if kind == "linear":
        def ev(x, y):
            z = np.zeros(np.broadcast(x, y).shape)
            return ell * x + z, ell + z, z, z, z, z
    elif kind == "logarithmic":
        def ev(x, y):
            r2 = x * x + y * y
            r4 = r2 * r2
            return (0.5 * ell * np.log(r2), ell * x / r2, ell * y / r2,
                    ell * (y * y - x * x) / r4, -2.0 * ell * x * y / r4,
                    ell * (x * x - y * y) / r4)
    elif kind == "scherk_wedge":
        def ev(x, y):
            r = np.sqrt(x * x + y * y)
            r3 = r ** 3
            return (np.log((r + y) / x), -y / (x * r), 1.0 / r,
                    y / (x * x * r) + y / r3, -x / r3, -y / r3)
    else:
        raise ValueError(f"unknown family {kind!r}; expected one of {FAMILY_KINDS}")
    return ev


def entire_family_field(kind: str, ell: float = 1.0) -> ScalarField:
    """Half-plane :class:`ScalarField` of one of the explicit graphs.

    ``ell`` scales the linear and logarithmic graphs and is ignored by the
    Scherk wedge, which is rigid up to vertical translation.
    """
    return ScalarField(_entire_eval(kind, float(ell)), "halfplane", "closedForm", kind)


def eval_entire_family(kind: str, ell: float, p: HalfPlanePoint) -> float:
    """Value of an explicit graph at a half-plane point."""
    if p.at_infinity:
        raise FamilyDomainError("point at infinity")
    if kind == "scherk_wedge":
        if not p.x > 0:
            raise FamilyDomainError("Scherk wedge is defined for x > 0 (it is +inf on x = 0)")
        if p.y < 0:
            raise FamilyDomainError("Scherk wedge needs y >= 0")
    elif kind == "logarithmic" and p.x == 0 and p.y == 0:
        raise FamilyDomainError("logarithmic graph is singular at the origin")
    ev = _entire_eval(kind, float(ell))
    return float(ev(np.float64(p.x), np.float64(p.y))[0])


# ---------------------------------------------------------------------------
# disk-model fields built from one-dimensional profiles

def _signed_distance_derivs(x, y):
    """Signed distance to the real diameter, positive for ``y > 0``, with
    first and second partials."""
    Q = 1.0 - x * x - y * y
    Y = 2.0 * y / Q
    Yx = 4.0 * x * y / Q ** 2
    Yy = 2.0 / Q + 4.0 * y * y / Q ** 2
    Yxx = 4.0 * y / Q ** 2 + 16.0 * x * x * y / Q ** 3
    Yxy = 4.0 * x / Q ** 2 + 16.0 * x * y * y / Q ** 3
    Yyy = 12.0 * y / Q ** 2 + 16.0 * y ** 3 / Q ** 3
    s1 = 1.0 / np.sqrt(1.0 + Y * Y)
    s2 = -Y * s1 ** 3
    return compose_profile(np.arcsinh(Y), s1, s2, Y, Yx, Yy, Yxx, Yxy, Yyy)


def _radial_distance_derivs(x, y):
    """Distance to the origin with first and second partials."""
    R2 = x * x + y * y
    R = np.sqrt(R2)
    r = 2.0 * np.arctanh(R)
    rR = 2.0 / (1.0 - R2)
    rRR = 4.0 * R / (1.0 - R2) ** 2
    Rx, Ry = x / R, y / R
    Rxx, Rxy, Ryy = y * y / R ** 3, -x * y / R ** 3, x * x / R ** 3
    return compose_profile(r, rR, rRR, R, Rx, Ry, Rxx, Rxy, Ryy)


def hyperbolic_family_field(geodesic: Geodesic, d: float, orientation: float = 1.0,
                            tol: float = 1e-12) -> ScalarField:
    """``u(z) = lambda(orientation * sigma(z); d)`` with ``sigma`` the signed
    distance to ``geodesic`` (positive toward ``c1``).

    For ``d > 1`` the field is defined where ``orientation * sigma >=
    acosh d``; for ``0 < d < 1`` everywhere, with limits ``G(d)`` on the
    positive and ``-G(d)`` on the negative side at infinity when
    ``orientation = 1``.
    """
    d = float(d)
    sgn = 1.0 if orientation >= 0 else -1.0

    def ev(x, y):
        s, sx, sy, sxx, sxy, syy = _signed_distance_derivs(x, y)
        s, sx, sy, sxx, sxy, syy = (sgn * v for v in (s, sx, sy, sxx, sxy, syy))
        G = profile_lambda_array(s, d, tol)
        if d == 1:
            G1 = 1.0 / np.sinh(s)
            G2 = -np.cosh(s) / np.sinh(s) ** 2
        else:
            G1 = profile_slope(s, d)
            G2 = profile_second_derivative(s, d)
        return compose_profile(G, G1, G2, s, sx, sy, sxx, sxy, syy)

    base = ScalarField(ev, "disk", "closedForm", f"M_{d}")
    return base.pullback(geodesic.frame())


def catenoid_field(center: DiskPoint, rho_neck: float, shift: float = 0.0,
                   tol: float = 1e-12) -> ScalarField:
    """Upper half catenoid about ``center``: ``lambda_cat(r; rho_neck) + shift``
    for hyperbolic distance ``r >= rho_neck``."""
    rho_neck = float(rho_neck)
    sh = math.sinh(rho_neck)

    def ev(x, y):
        r, rx, ry, rxx, rxy, ryy = _radial_distance_derivs(x, y)
        G = catenoid_profile_array(r, rho_neck, tol) + shift
        D = np.sinh(r) ** 2 - sh * sh
        G1 = sh / np.sqrt(D)
        G2 = -sh * np.sinh(r) * np.cosh(r) * D ** -1.5
        return compose_profile(G, G1, G2, r, rx, ry, rxx, rxy, ryy)

    base = ScalarField(ev, "disk", "closedForm", f"catenoid_{rho_neck}")
    return base.pullback(Isometry.moving_to_origin(center.z))


def exterior_catenoid_neck(rho: float, t0: float) -> float:
    """Neck radius ``c`` of the catenoid through the circle of radius ``rho``
    at height 0 reaching height ``t0`` at infinity (``0 < t0 < f(rho)``)."""
    f_rho = float(catenoid_height(rho))
    if not 0 < t0 < f_rho:
        raise FamilyDomainError(f"need 0 < t0 < f(rho) = {f_rho}")

    def gap(c):
        return float(catenoid_height(c, 1e-13)) - float(catenoid_profile(rho, c, 1e-13)) - t0
    return brentq(gap, 1e-6, rho, xtol=1e-15, rtol=1e-15)


def exterior_catenoid_field(center: DiskPoint, rho: float, t0: float) -> ScalarField:
    """Rotational minimal graph over the exterior of the circle of radius
    ``rho``, zero on the circle and ``t0`` at infinity (``|t0| < f(rho)``)."""
    if t0 == 0:
        return ScalarField(lambda x, y: tuple(np.zeros(np.broadcast(x, y).shape) for _ in range(6)),
                           "disk", "closedForm", "zero")
    c = exterior_catenoid_neck(rho, abs(t0))
    field_ = catenoid_field(center, c, -float(catenoid_profile(rho, c, 1e-13)))
    return field_ if t0 > 0 else field_.negated()


# ---------------------------------------------------------------------------
# sampled profiles and meshes

@dataclass
class ProfileCurve:
    """Sampled generating curve ``(rho, lambda)``.

    ``family`` is ``"hyperbolic"`` (parameter ``d``) or ``"catenoid"``
    (parameter ``rho_neck``).
    """

    family: str
    parameter: float
    rho: np.ndarray
    lam: np.ndarray
    asymptotic_height: float

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["rho", "lambda"])
            for r, l in zip(self.rho, self.lam):
                w.writerow([f"{float(r):.17e}", f"{float(l):.17e}"])

    def translation_mesh(self, n_sweep: int = 32, extent: float = 2.0):
        """Vertices and triangles of the surface swept by hyperbolic
        translation, in disk coordinates (x, y, t)."""
        s = np.linspace(-extent, extent, n_sweep)
        geo = Geodesic(0.0, math.pi)
        verts = []
        for sv in s:
            iso = Isometry.translation(geo, sv)
            for r, l in zip(self.rho, self.lam):
                # point at signed distance r from the real diameter above 0
                z = complex(iso(1j * math.tanh(0.5 * r)))
                verts.append((z.real, z.imag, l))
        return np.array(verts), _grid_faces(n_sweep, len(self.rho))

    def revolution_mesh(self, n_sweep: int = 48):
        """Vertices and triangles of the surface of revolution about 0."""
        ang = np.linspace(0, 2 * math.pi, n_sweep)
        verts = []
        for a in ang:
            for r, l in zip(self.rho, self.lam):
                z = math.tanh(0.5 * r) * np.exp(1j * a)
                verts.append((z.real, z.imag, l))
        return np.array(verts), _grid_faces(n_sweep, len(self.rho))


def _grid_faces(nu: int, nv: int) -> np.ndarray:
    faces = []
    for i in range(nu - 1):
        for j in range(nv - 1):
            a = i * nv + j
            b, c, e = a + 1, a + nv, a + nv + 1
            faces.append((a, c, b))
            faces.append((b, c, e))
    return np.array(faces, dtype=int)


def sample_profile(d: float, rho_max: float, n: int = 200,
                   rho_min: Optional[float] = None) -> ProfileCurve:
    """Sample the ``M_d`` profile on ``n`` points up to ``rho_max``."""
    d = float(d)
    if rho_min is None:
        rho_min = math.acosh(d) if d > 1 else (1e-3 if d == 1 else -rho_max)
    rho = np.linspace(rho_min, rho_max, n)
    lam = profile_lambda_array(rho, d)
    if d > 1:
        height = float(height_H(d))
    elif d == 1:
        height = 0.0
    elif d == 0:
        height = 0.0
    else:
        height = float(height_G(d))
    return ProfileCurve("hyperbolic", d, rho, lam, height)


def sample_catenoid_profile(rho_neck: float, rho_max: float, n: int = 200) -> ProfileCurve:
    rho = np.linspace(rho_neck, rho_max, n)
    lam = catenoid_profile_array(rho, rho_neck)
    return ProfileCurve("catenoid", rho_neck, rho, lam, float(catenoid_height(rho_neck)))
