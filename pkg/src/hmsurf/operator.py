"""The minimal vertical graph operator in the disk and half-plane models.

For a graph ``t = u(x, y)`` over the disk with metric ``4|dz|^2/(1-r^2)^2``
the operator is

    D(u) = (1 + a u_x^2) u_yy + (1 + a u_y^2) u_xx - 2 a u_x u_y u_xy
           + (1 - r^2)/2 (x u_x + y u_y)(u_x^2 + u_y^2),   a = (1 - r^2)^2 / 4,

which equals ``W^3 div_E(grad u / W)`` with ``W^2 = 1 + a |grad u|^2``.
In the half-plane ``a = y^2`` and the lower order term is
``-y u_y (u_x^2 + u_y^2)``. The principal part has eigenvalues ``1`` and
``W^2``; the normalized residual divides by ``W^2`` so that steep regions
are compared on the same scale.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .geometry import DiskPoint, HalfPlanePoint, Isometry, to_halfplane

__all__ = [
    "ScalarField",
    "ResidualReport",
    "EvaluationError",
    "disk_operator",
    "halfplane_operator",
    "residual_disk",
    "residual_halfplane",
    "residual_grid",
    "compose_holomorphic",
    "compose_profile",
    "reports_to_csv",
]

Derivs = Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]


class EvaluationError(ArithmeticError):
    """Non-finite derivative data reached the operator."""


def disk_operator(x, y, ux, uy, uxx, uxy, uyy):
    """Disk-model operator ``D(u)`` from pointwise derivative data."""
    q = 1.0 - x * x - y * y
    a = 0.25 * q * q
    return ((1.0 + a * ux * ux) * uyy + (1.0 + a * uy * uy) * uxx
            - 2.0 * a * ux * uy * uxy
            + 0.5 * q * (x * ux + y * uy) * (ux * ux + uy * uy))


def halfplane_operator(x, y, ux, uy, uxx, uxy, uyy):
    """Half-plane operator from pointwise derivative data."""
    a = y * y
    return ((1.0 + a * ux * ux) * uyy + (1.0 + a * uy * uy) * uxx
            - 2.0 * a * ux * uy * uxy
            - y * uy * (ux * ux + uy * uy))


@dataclass(frozen=True)
class ScalarField:
    """Height function with first and second derivatives.

    Attributes
    ----------
    evaluator : callable
        ``(x, y) -> (u, u_x, u_y, u_xx, u_xy, u_yy)`` on arrays, in the
        coordinates of ``model``.
    model : {"disk", "halfplane"}
    provenance : {"closedForm", "gridInterpolant"}
    name : str
    """

    evaluator: Callable[[np.ndarray, np.ndarray], Derivs]
    model: str = "disk"
    provenance: str = "closedForm"
    name: str = ""

    def __call__(self, x, y) -> Derivs:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = self.evaluator(x, y)
        shape = np.broadcast(x, y).shape
        return tuple(np.broadcast_to(np.asarray(v, dtype=float), shape) for v in out)

    def value(self, x, y):
        return self(x, y)[0]

    def shifted(self, c: float) -> "ScalarField":
        """Vertical translation ``u + c``."""
        ev = self.evaluator

        def shifted_eval(x, y):
            u, *rest = ev(x, y)
            return (u + c, *rest)
        return ScalarField(shifted_eval, self.model, self.provenance, f"{self.name}+{c}")

    def negated(self) -> "ScalarField":
        """Vertical reflection ``-u``."""
        ev = self.evaluator

        def neg_eval(x, y):
            return tuple(-np.asarray(v) for v in ev(x, y))
        return ScalarField(neg_eval, self.model, self.provenance, f"-{self.name}")

    def pullback(self, iso: Isometry) -> "ScalarField":
        """Field ``u o iso`` in the disk model."""
        if self.model != "disk":
            raise ValueError("pullback by disk isometries needs a disk-model field")
        ev = self.evaluator

        def pulled(x, y):
            z = np.asarray(x) + 1j * np.asarray(y)
            w = np.asarray(iso(z))
            Fp, Fpp = iso.derivatives(z)
            out = compose_holomorphic(ev(w.real, w.imag), Fp, Fpp)
            if iso.reflect:
                u, ux, uy, uxx, uxy, uyy = out
                out = (u, ux, -uy, uxx, -uxy, uyy)
            return out
        return ScalarField(pulled, "disk", self.provenance, self.name)

    def to_disk(self) -> "ScalarField":
        """Express a half-plane field on the disk via the Cayley map."""
        if self.model == "disk":
            return self
        ev = self.evaluator

        def disk_eval(x, y):
            z = np.asarray(x) + 1j * np.asarray(y)
            w = to_halfplane(z)
            den = 1j * z + 1.0
            Fp = 2.0 / den ** 2
            Fpp = -4j / den ** 3
            return compose_holomorphic(ev(w.real, w.imag), Fp, Fpp)
        return ScalarField(disk_eval, "disk", self.provenance, self.name)


def compose_holomorphic(derivs: Derivs, Fp, Fpp) -> Derivs:
    """Derivatives of ``u(z) = U(F(z))`` for holomorphic ``F``.

    ``derivs`` are ``U`` and its real partials at ``F(z)``; ``Fp``, ``Fpp``
    are ``F'`` and ``F''`` at ``z``.
    """
    U, Ux, Uy, Uxx, Uxy, Uyy = derivs
    Uw = 0.5 * (Ux - 1j * Uy)
    Uww = 0.25 * (Uxx - Uyy - 2j * Uxy)
    Uwwb = 0.25 * (Uxx + Uyy)
    uz = Uw * Fp
    uzz = Uww * Fp ** 2 + Uw * Fpp
    uzzb = Uwwb * np.abs(Fp) ** 2
    return (np.asarray(U, dtype=float), 2.0 * uz.real, -2.0 * uz.imag,
            2.0 * uzz.real + 2.0 * uzzb, -2.0 * uzz.imag,
            -2.0 * uzz.real + 2.0 * uzzb)


def compose_profile(G, G1, G2, s, sx, sy, sxx, sxy, syy) -> Derivs:
    """Derivatives of ``G(s(x, y))`` from those of ``G`` and ``s``."""
    return (G, G1 * sx, G1 * sy,
            G2 * sx * sx + G1 * sxx,
            G2 * sx * sy + G1 * sxy,
            G2 * sy * sy + G1 * syy)


@dataclass
class ResidualReport:
    """Operator evaluation at one point or an array of points.

    ``residual`` is ``D(u)`` as written; ``normalized`` is ``D(u) / W^2``
    where ``W^2 = 1 + |grad_H u|^2`` is the larger ellipticity eigenvalue.
    """

    x: np.ndarray
    y: np.ndarray
    residual: np.ndarray
    grad_norm: np.ndarray
    W: np.ndarray
    model: str = "disk"

    @property
    def normalized(self):
        return self.residual / (self.W ** 2)

    @property
    def eigenvalues(self):
        return (np.ones_like(self.W), self.W ** 2)

    def rows(self):
        for x, y, r, w in zip(np.ravel(self.x), np.ravel(self.y),
                              np.ravel(self.residual), np.ravel(self.W)):
            yield float(x), float(y), float(r), float(w)


def _coords(p):
    if isinstance(p, (DiskPoint, HalfPlanePoint)):
        return np.float64(p.x), np.float64(p.y)
    x, y = p
    return np.asarray(x, dtype=float), np.asarray(y, dtype=float)


def _check_finite(vals):
    for v in vals:
        if not np.all(np.isfinite(v)):
            raise EvaluationError("non-finite derivative values")


def residual_disk(f: ScalarField, p) -> ResidualReport:
    """Disk-model residual of ``f`` at ``p``.

    ``p`` is a :class:`DiskPoint` or an ``(x, y)`` pair of arrays. Half-plane
    fields are converted through the Cayley map first. At ``|z| = 1`` the
    conformal factor vanishes and the operator reduces to the Laplacian.
    """
    x, y = _coords(p)
    if f.model != "disk":
        f = f.to_disk()
    _, ux, uy, uxx, uxy, uyy = f(x, y)
    _check_finite((ux, uy, uxx, uxy, uyy))
    res = disk_operator(x, y, ux, uy, uxx, uxy, uyy)
    q = 1.0 - x * x - y * y
    grad = 0.5 * q * np.hypot(ux, uy)
    return ResidualReport(x, y, res, grad, np.sqrt(1.0 + grad * grad), "disk")


def residual_halfplane(f: ScalarField, p) -> ResidualReport:
    """Half-plane residual of a half-plane field at ``p``."""
    if f.model != "halfplane":
        raise ValueError("residual_halfplane needs a half-plane field")
    x, y = _coords(p)
    _, ux, uy, uxx, uxy, uyy = f(x, y)
    _check_finite((ux, uy, uxx, uxy, uyy))
    res = halfplane_operator(x, y, ux, uy, uxx, uxy, uyy)
    grad = y * np.hypot(ux, uy)
    return ResidualReport(x, y, res, grad, np.sqrt(1.0 + grad * grad), "halfplane")


def residual_grid(g, node: Tuple[int, int], normalized: bool = False) -> float:
    """Discrete residual of a grid function at an interior node ``(i, j)``.

    Uses the solver's nine-point stencil, including cut-cell spacings next
    to the domain boundary.
    """
    from .grid import DomainError
    if not g.is_interior(node):
        raise DomainError(f"node {node} is not an interior node")
    return g.residual_at(node, normalized=normalized)


def reports_to_csv(report: ResidualReport, path) -> None:
    """Write ``x, y, residual, W`` rows."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "residual", "W"])
        for row in report.rows():
            w.writerow([f"{v:.17e}" for v in row])
