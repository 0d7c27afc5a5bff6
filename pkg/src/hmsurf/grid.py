"""Cartesian cut-cell grids over the closed disk and the discrete operator.

Every interior node carries a nine-point stencil: the four axis neighbours
and the four diagonal ones. When a stencil arm leaves the domain it is
shortened to the exact crossing with the boundary (a fraction ``t`` of the
arm), and the boundary value there enters as Dirichlet data
(Shortley-Weller). First and second derivatives use the nonuniform
three-point formulas on each arm pair; the mixed derivative uses one
diagonal chosen by the sign of the cross coefficient, so the frozen
coefficient linearization is monotone while ``|A12| <= min(A11, A22)``.
Past that bound (steep gradients oblique to the grid) the one-diagonal part
is capped at ``min(A11, A22)`` and the excess goes through the central
diagonal difference, which keeps the scheme consistent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from .geometry import DomainSpec

__all__ = [
    "DomainError",
    "INTERIOR",
    "FINITE_BOUNDARY",
    "ASYMPTOTIC_BOUNDARY",
    "EXCLUDED",
    "Discontinuity",
    "BoundaryData",
    "Grid",
    "Problem",
    "GridFunction",
    "build_problem",
]

INTERIOR, FINITE_BOUNDARY, ASYMPTOTIC_BOUNDARY, EXCLUDED = 0, 1, 2, 3
CLASS_NAMES = {INTERIOR: "interior", FINITE_BOUNDARY: "finiteBoundary",
               ASYMPTOTIC_BOUNDARY: "asymptoticBoundary", EXCLUDED: "excluded"}

# (di, dj) per arm; arms come in opposite pairs (0,1), (2,3), (4,5), (6,7).
OFFSETS = np.array([(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1)])
SNAP = 0.02


class DomainError(ValueError):
    """A setup or evaluation request incompatible with the grid domain."""


@dataclass(frozen=True)
class Discontinuity:
    """Boundary point where the data jumps from ``A`` to ``B``.

    ``point`` is a complex disk coordinate; ideal points lie on ``|z| = 1``.
    """

    point: complex
    A: float
    B: float

    def __post_init__(self):
        object.__setattr__(self, "point", complex(self.point))
        if self.A > self.B:
            a, b = self.B, self.A
            object.__setattr__(self, "A", a)
            object.__setattr__(self, "B", b)

    @property
    def asymptotic(self) -> bool:
        return abs(abs(self.point) - 1.0) < 1e-9

    def exclusion_value(self, data: "BoundaryData", h: float) -> float:
        """Value frozen at excluded nodes: the mean of the one-sided limits,
        or when one of them is infinite the mean of the data sampled one
        cell to either side along the circle."""
        if math.isfinite(self.A) and math.isfinite(self.B):
            return 0.5 * (self.A + self.B)
        if not self.asymptotic:
            raise DomainError("infinite one-sided limits need an ideal point")
        th = math.atan2(self.point.imag, self.point.real)
        vals = data.asymptotic_values(np.array([th - h, th + h]))
        return float(np.mean(vals))


def _zero_asymptotic(theta):
    return np.zeros(np.shape(theta))


def _zero_finite(z, comp):
    return np.zeros(np.shape(z))


@dataclass
class BoundaryData:
    """Dirichlet data on the finite boundary and at infinity.

    Attributes
    ----------
    asymptotic : callable
        ``g(theta)`` on the ideal circle, vectorized.
    finite : callable
        ``g(z, component)`` on finite boundary components, vectorized.
    discontinuities : sequence of Discontinuity
    lower, upper : float, optional
        Known ``inf g`` and ``sup g``; sampled when omitted.
    """

    asymptotic: Callable = _zero_asymptotic
    finite: Callable = _zero_finite
    discontinuities: Tuple[Discontinuity, ...] = ()
    lower: Optional[float] = None
    upper: Optional[float] = None
    description: dict = field(default_factory=dict)

    @classmethod
    def constant(cls, asymptotic: float = 0.0, finite: float = 0.0) -> "BoundaryData":
        return cls(lambda th: np.full(np.shape(th), float(asymptotic)),
                   lambda z, c: np.full(np.shape(z), float(finite)),
                   description={"asymptotic": asymptotic, "finite": finite})

    def asymptotic_values(self, theta):
        return np.asarray(self.asymptotic(np.asarray(theta, dtype=float)), dtype=float)

    def finite_values(self, z, comp):
        return np.asarray(self.finite(np.asarray(z, dtype=complex), np.asarray(comp)), dtype=float)

    def bounds(self, domain: DomainSpec, samples: int = 4096) -> Tuple[float, float]:
        """``(inf g, sup g)`` over the boundary seen by ``domain``."""
        if self.lower is not None and self.upper is not None:
            return float(self.lower), float(self.upper)
        vals = []
        th = np.linspace(0, 2 * math.pi, samples, endpoint=False) + 1e-7
        mask = domain.ideal_boundary_mask(th)
        if np.any(mask):
            vals.append(self.asymptotic_values(th[mask]))
        if domain.components:
            pts, _, ids = domain.boundary_samples(max(64, samples // 16))
            vals.append(self.finite_values(pts, ids))
        for d in self.discontinuities:
            vals.append(np.array([d.A, d.B]))
        allv = np.concatenate(vals) if vals else np.zeros(1)
        allv = allv[np.isfinite(allv)]
        g_lo = float(np.min(allv)) if self.lower is None else float(self.lower)
        g_hi = float(np.max(allv)) if self.upper is None else float(self.upper)
        return g_lo, g_hi


@dataclass(frozen=True)
class Grid:
    """Square node lattice ``x0 + i h``, ``y0 + j h`` with ``n`` nodes per side."""

    n: int
    x0: float = -1.0
    y0: float = -1.0
    h: float = 2.0 / 128

    @classmethod
    def disk(cls, n: int) -> "Grid":
        return cls(n, -1.0, -1.0, 2.0 / (n - 1))

    @classmethod
    def box(cls, n: int, xmin: float, xmax: float, ymin: float, ymax: float) -> "Grid":
        side = max(xmax - xmin, ymax - ymin)
        cx, cy = 0.5 * (xmin + xmax), 0.5 * (ymin + ymax)
        return cls(n, cx - 0.5 * side, cy - 0.5 * side, side / (n - 1))

    @property
    def xs(self):
        return self.x0 + self.h * np.arange(self.n)

    @property
    def ys(self):
        return self.y0 + self.h * np.arange(self.n)

    def mesh(self):
        X, Y = np.meshgrid(self.xs, self.ys, indexing="ij")
        return X, Y

    def node_of(self, z: complex) -> Tuple[int, int]:
        """Nearest node index to a point."""
        return (int(round((z.real - self.x0) / self.h)), int(round((z.imag - self.y0) / self.h)))


@dataclass
class Stencil:
    """Per-unknown stencil arrays; row ``m`` belongs to unknown ``m``."""

    nbr: np.ndarray      # (M, 8) unknown index of each arm end, or -1
    fixed: np.ndarray    # (M, 8) Dirichlet value where nbr == -1
    frac: np.ndarray     # (M, 8) arm length as a fraction of the full arm
    x: np.ndarray
    y: np.ndarray
    h: float
    scheme: str = "blend"
    index: Optional[np.ndarray] = None   # global unknown of each row, for subsets

    def __post_init__(self):
        if self.scheme not in ("blend", "monotone"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        h = self.h
        L = np.array([h, h, h, h, math.sqrt(2) * h, math.sqrt(2) * h,
                      math.sqrt(2) * h, math.sqrt(2) * h])
        d = self.frac * L
        self.first = []
        self.second = []
        for k in range(4):
            hp, hm = d[:, 2 * k], d[:, 2 * k + 1]
            tot = hp + hm
            wm, wp = -hp / (hm * tot), hm / (hp * tot)
            sm, spl = 2.0 / (hm * tot), 2.0 / (hp * tot)
            self.first.append((wm, -(wm + wp), wp))
            self.second.append((sm, -(sm + spl), spl))
        q = 1.0 - self.x ** 2 - self.y ** 2
        self.k = 0.5 * q
        self.a = 0.25 * q * q

    @property
    def size(self) -> int:
        return self.nbr.shape[0]

    def subset(self, rows: np.ndarray) -> "Stencil":
        """Stencil restricted to the rows of ``rows``.

        Its :meth:`evaluate` still takes the full unknown vector and its
        Jacobian has one column per global unknown.
        """
        rows = np.asarray(rows)
        return Stencil(self.nbr[rows], self.fixed[rows], self.frac[rows], self.x[rows],
                       self.y[rows], self.h, self.scheme, rows)

    def arm_values(self, U: np.ndarray) -> np.ndarray:
        idx = np.where(self.nbr >= 0, self.nbr, 0)
        return np.where(self.nbr >= 0, U[idx], self.fixed)

    def _pieces(self, U, V):
        def d1(k):
            wm, _, wp = self.first[k]
            return wm * (V[:, 2 * k + 1] - U) + wp * (V[:, 2 * k] - U)

        def d2(k):
            sm, _, spl = self.second[k]
            return sm * (V[:, 2 * k + 1] - U) + spl * (V[:, 2 * k] - U)

        p, q = d1(0), d1(1)
        Sxx, Syy, D11, D22 = d2(0), d2(1), d2(2), d2(3)
        return p, q, Sxx, Syy, D11, D22

    def evaluate(self, U: np.ndarray, jacobian: bool = False):
        """Discrete operator ``F(U)`` and optionally its sparse Jacobian.

        Returns ``(F, Fn)`` or ``(F, Fn, J)`` where ``Fn = F / W^2``.
        """
        V = self.arm_values(U)
        Uc = U if self.index is None else U[self.index]
        p, q, Sxx, Syy, D11, D22 = self._pieces(Uc, V)
        a, k = self.a, self.k
        A11 = 1.0 + a * q * q
        A22 = 1.0 + a * p * p
        A12 = -a * p * q
        sig = np.where(A12 >= 0, 1.0, -1.0)
        absA = np.abs(A12)
        m = np.minimum(A11, A22)
        c = np.minimum(absA, m)
        excess = absA - c if self.scheme == "blend" else np.zeros_like(c)
        cxx, cyy = A11 - c, A22 - c
        c11 = np.where(sig > 0, 2.0 * c, 0.0) + sig * excess
        c22 = np.where(sig < 0, 2.0 * c, 0.0) - sig * excess
        g2 = p * p + q * q
        radial = self.x * p + self.y * q
        F = cxx * Sxx + cyy * Syy + c11 * D11 + c22 * D22 + k * radial * g2
        W2 = 1.0 + a * g2
        Fn = F / W2
        if not jacobian:
            return F, Fn
        Dsig = np.where(sig > 0, D11, D22)
        Dm = D11 - D22
        # partials of A11, A22 in (p, q) are (0, 2aq), (2ap, 0); of |A12| (-s a q, -s a p)
        capped = absA > m
        use11 = A11 <= A22
        cp = np.where(capped, np.where(use11, 0.0, 2.0 * a * p), -sig * a * q)
        cq = np.where(capped, np.where(use11, 2.0 * a * q, 0.0), -sig * a * p)
        if self.scheme == "blend":
            ep = -sig * a * q - cp
            eq = -sig * a * p - cq
        else:
            ep = eq = np.zeros_like(cp)
        Bp = k * self.x * g2 + 2.0 * k * p * radial
        Bq = k * self.y * g2 + 2.0 * k * q * radial
        Fp = -cp * Sxx + (2.0 * a * p - cp) * Syy + 2.0 * cp * Dsig + sig * ep * Dm + Bp
        Fq = (2.0 * a * q - cq) * Sxx - cq * Syy + 2.0 * cq * Dsig + sig * eq * Dm + Bq
        M = self.size
        ncol = len(U)
        centre = np.arange(M) if self.index is None else self.index
        coef = (cxx, cyy, c11, c22)
        w_center = Fp * self.first[0][1] + Fq * self.first[1][1]
        for pair in range(4):
            w_center = w_center + coef[pair] * self.second[pair][1]
        rows, cols, vals = [np.arange(M)], [centre], [w_center]
        for arm in range(8):
            pair, side = divmod(arm, 2)
            # side 0 is the plus end (weight index 2), side 1 the minus end (index 0)
            wi = 2 if side == 0 else 0
            w = coef[pair] * self.second[pair][wi]
            if pair == 0:
                w = w + Fp * self.first[0][wi]
            elif pair == 1:
                w = w + Fq * self.first[1][wi]
            mask = self.nbr[:, arm] >= 0
            rows.append(np.nonzero(mask)[0])
            cols.append(self.nbr[mask, arm])
            vals.append(w[mask])
        J = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                          shape=(M, ncol))
        return F, Fn, J

    def laplacian(self):
        """Sparse five-point-plus-cut-cell Laplacian and its Dirichlet part."""
        M = self.size
        rows, cols, vals = [np.arange(M)], [np.arange(M)], [self.second[0][1] + self.second[1][1]]
        rhs = np.zeros(M)
        for arm in range(4):
            pair, side = divmod(arm, 2)
            wi = 2 if side == 0 else 0
            w = self.second[pair][wi]
            mask = self.nbr[:, arm] >= 0
            rows.append(np.nonzero(mask)[0])
            cols.append(self.nbr[mask, arm])
            vals.append(w[mask])
            rhs -= np.where(mask, 0.0, w * self.fixed[:, arm])
        L = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                          shape=(M, M))
        return L, rhs


@dataclass
class Problem:
    """Discretized Dirichlet problem.

    ``node_class`` and ``boundary_values`` are ``(n, n)`` arrays; unknowns
    are the ``INTERIOR`` nodes, numbered by ``index``.
    """

    domain: DomainSpec
    data: BoundaryData
    grid: Grid
    node_class: np.ndarray
    boundary_values: np.ndarray
    index: np.ndarray
    nodes: np.ndarray          # (M, 2) node indices of unknowns
    stencil: Stencil
    g_bounds: Tuple[float, float]
    crossings: dict            # boundary crossing records for verification
    excluded_nodes: np.ndarray # (K, 2) nodes frozen near discontinuities
    tolerances: dict = field(default_factory=dict)
    oracle: Optional[dict] = None
    name: str = ""

    @property
    def size(self) -> int:
        return self.stencil.size

    def empty_values(self) -> np.ndarray:
        return self.boundary_values.copy()

    def constant_function(self, c: float) -> "GridFunction":
        return GridFunction.from_unknowns(self, np.full(self.size, float(c)))


@dataclass
class GridFunction:
    """Node values over a problem's grid; NaN outside the closed domain."""

    problem: Problem
    values: np.ndarray

    @classmethod
    def from_unknowns(cls, problem: Problem, U: np.ndarray) -> "GridFunction":
        vals = problem.boundary_values.copy()
        vals[problem.nodes[:, 0], problem.nodes[:, 1]] = U
        return cls(problem, vals)

    @classmethod
    def sample(cls, problem: Problem, func) -> "GridFunction":
        """Evaluate ``func(x, y)`` at every unknown node; boundary nodes keep
        the problem's data."""
        X, Y = problem.grid.mesh()
        n = problem.nodes
        U = np.asarray(func(X[n[:, 0], n[:, 1]], Y[n[:, 0], n[:, 1]]), dtype=float)
        return cls.from_unknowns(problem, U)

    @property
    def unknowns(self) -> np.ndarray:
        n = self.problem.nodes
        return self.values[n[:, 0], n[:, 1]].copy()

    @property
    def node_class(self):
        return self.problem.node_class

    def is_interior(self, node) -> bool:
        i, j = node
        n = self.problem.grid.n
        return 0 <= i < n and 0 <= j < n and self.problem.node_class[i, j] == INTERIOR

    def residuals(self, normalized: bool = True) -> np.ndarray:
        F, Fn = self.problem.stencil.evaluate(self.unknowns)
        return Fn if normalized else F

    def residual_at(self, node, normalized: bool = False) -> float:
        m = self.problem.index[node]
        r = self.residuals(normalized)
        return float(r[m])

    def copy(self) -> "GridFunction":
        return GridFunction(self.problem, self.values.copy())

    def interpolate(self, z) -> np.ndarray:
        """Bilinear interpolation where all four cell corners are defined,
        otherwise the nearest defined node."""
        z = np.asarray(z, dtype=complex)
        g = self.problem.grid
        fx = (z.real - g.x0) / g.h
        fy = (z.imag - g.y0) / g.h
        i0 = np.clip(np.floor(fx).astype(int), 0, g.n - 2)
        j0 = np.clip(np.floor(fy).astype(int), 0, g.n - 2)
        tx, ty = fx - i0, fy - j0
        v = self.values
        c00, c10 = v[i0, j0], v[i0 + 1, j0]
        c01, c11 = v[i0, j0 + 1], v[i0 + 1, j0 + 1]
        bil = (c00 * (1 - tx) * (1 - ty) + c10 * tx * (1 - ty)
               + c01 * (1 - tx) * ty + c11 * tx * ty)
        bad = ~np.isfinite(bil)
        if np.any(bad):
            X, Y = g.mesh()
            ok = np.isfinite(v)
            pts = X[ok] + 1j * Y[ok]
            vals = v[ok]
            zb = z[bad]
            nearest = np.argmin(np.abs(zb[:, None] - pts[None, :]), axis=1)
            bil = bil.copy()
            bil[bad] = vals[nearest]
        return bil


# ---------------------------------------------------------------------------
# problem construction

def _unit_circle_crossing(z0, dz):
    A = np.abs(dz) ** 2
    B = 2.0 * (z0 * np.conj(dz)).real
    C = np.abs(z0) ** 2 - 1.0
    t = (-B + np.sqrt(np.maximum(B * B - 4 * A * C, 0.0))) / (2 * A)
    return np.where((t > 1e-12) & (t <= 1 + 1e-12), t, np.inf)


def build_problem(domain: DomainSpec, data: BoundaryData, resolution: int,
                  grid: Optional[Grid] = None, tolerances: Optional[dict] = None,
                  oracle: Optional[dict] = None, name: str = "",
                  scheme: str = "blend") -> Problem:
    """Discretize the Dirichlet problem for ``D(u) = 0`` on ``domain``.

    Parameters
    ----------
    domain : DomainSpec
    data : BoundaryData
    resolution : int
        Nodes per side of the grid over ``[-1, 1]^2`` (at least 33).
    grid : Grid, optional
        Custom lattice, e.g. a box around a small domain.
    scheme : {"blend", "monotone"}
        ``"monotone"`` drops the cross-derivative excess instead of sending
        it through the central diagonal difference.

    Returns
    -------
    Problem
    """
    if resolution < 33 and grid is None:
        raise DomainError("resolution must be at least 33")
    g = grid if grid is not None else Grid.disk(resolution)
    X, Y = g.mesh()
    Z = X + 1j * Y
    R = np.abs(Z)
    n = g.n
    h = g.h
    cls = np.full((n, n), EXCLUDED, dtype=np.int8)
    bvals = np.full((n, n), np.nan)

    on_circle = np.abs(R - 1.0) < 1e-12
    theta = np.angle(Z)
    if np.any(on_circle):
        seen = domain.ideal_boundary_mask(theta[on_circle])
        idx = np.argwhere(on_circle)[seen]
        cls[idx[:, 0], idx[:, 1]] = ASYMPTOTIC_BOUNDARY
        bvals[idx[:, 0], idx[:, 1]] = data.asymptotic_values(theta[idx[:, 0], idx[:, 1]])

    inside = (R < 1.0 - 1e-12) & domain.contains(Z)
    cls[inside] = INTERIOR
    arcs = domain.boundary_arcs()

    def arm_data(ii, jj):
        """Crossing fractions, values and points for all arms at given nodes."""
        zc = Z[ii, jj]
        frac = np.ones((len(ii), 8))
        val = np.full((len(ii), 8), np.nan)
        point = np.full((len(ii), 8), np.nan, dtype=complex)
        kind = np.full((len(ii), 8), -1, dtype=int)
        for arm, (di, dj) in enumerate(OFFSETS):
            ni, nj = ii + di, jj + dj
            inb = (ni >= 0) & (ni < n) & (nj >= 0) & (nj < n)
            nic, njc = np.clip(ni, 0, n - 1), np.clip(nj, 0, n - 1)
            good = inb & (cls[nic, njc] == INTERIOR)
            need = ~good
            if not np.any(need):
                continue
            z0 = zc[need]
            dz = complex(di * h, dj * h)
            t = _unit_circle_crossing(z0, dz)
            comp = np.full(z0.shape, -1)
            for ai, (arc, ci) in enumerate(arcs):
                ta = arc.first_crossing(z0, dz)
                better = ta < t
                t = np.where(better, ta, t)
                comp = np.where(better, ci, comp)
            miss = ~np.isfinite(t)
            if np.any(miss) and arcs:
                # no crossing found (tangency or a frozen neighbour): attribute
                # the neighbour node to the nearest boundary piece
                zm = z0[miss] + dz
                dist = np.stack([arc.distance(zm) for arc, _ in arcs])
                best = np.argmin(dist, axis=0)
                near_arc = dist[best, np.arange(len(zm))] < np.abs(1.0 - np.abs(zm))
                cm = comp[miss]
                cm[near_arc] = np.array([arcs[b][1] for b in best[near_arc]], dtype=int)
                comp[miss] = cm
            t = np.where(miss, 1.0, np.minimum(t, 1.0))
            pts = z0 + t * dz
            v = np.empty(z0.shape)
            circ = comp < 0
            v[circ] = data.asymptotic_values(np.angle(pts[circ]))
            if np.any(~circ):
                v[~circ] = data.finite_values(pts[~circ], comp[~circ])
            rows = np.nonzero(need)[0]
            frac[rows, arm] = t
            val[rows, arm] = v
            point[rows, arm] = pts
            kind[rows, arm] = comp
        return frac, val, point, kind

    ii, jj = np.nonzero(cls == INTERIOR)
    frac, val, point, kind = arm_data(ii, jj)
    # Snap nodes that sit almost on the boundary.
    close = np.nanmin(np.where(np.isnan(val), np.inf, frac), axis=1) < SNAP
    if np.any(close):
        fr = np.where(np.isnan(val), np.inf, frac)
        arm = np.argmin(fr, axis=1)
        sel = np.nonzero(close)[0]
        cls[ii[sel], jj[sel]] = FINITE_BOUNDARY
        bvals[ii[sel], jj[sel]] = val[sel, arm[sel]]
        ii, jj = np.nonzero(cls == INTERIOR)
        frac, val, point, kind = arm_data(ii, jj)

    # Freeze nodes near discontinuities.
    excluded = []
    radius = math.sqrt(2.0) * h * (1 + 1e-9)
    for d in data.discontinuities:
        v_s = d.exclusion_value(data, h)
        near = (np.abs(Z - d.point) <= radius) & ((cls == INTERIOR) | (cls == ASYMPTOTIC_BOUNDARY)
                                                  | (cls == FINITE_BOUNDARY))
        for i, j in np.argwhere(near):
            cls[i, j] = EXCLUDED
            bvals[i, j] = v_s
            excluded.append((i, j))
    if excluded:
        ii, jj = np.nonzero(cls == INTERIOR)
        frac, val, point, kind = arm_data(ii, jj)
        for d in data.discontinuities:
            v_s = d.exclusion_value(data, h)
            val = np.where(np.abs(point - d.point) <= radius, v_s, val)

    index = np.full((n, n), -1, dtype=int)
    M = len(ii)
    index[ii, jj] = np.arange(M)
    nbr = np.full((M, 8), -1, dtype=int)
    fixed = np.zeros((M, 8))
    for arm, (di, dj) in enumerate(OFFSETS):
        ni, nj = ii + di, jj + dj
        link = np.isnan(val[:, arm])
        nbr[link, arm] = index[ni[link], nj[link]]
        fixed[~link, arm] = val[~link, arm]
        # an arm ending exactly on a frozen or snapped node uses that node's value
        full = (~link) & (frac[:, arm] >= 1.0)
        if np.any(full):
            inb = (ni >= 0) & (ni < n) & (nj >= 0) & (nj < n)
            sel = full & inb
            nv = bvals[np.clip(ni, 0, n - 1), np.clip(nj, 0, n - 1)]
            use = sel & np.isfinite(nv)
            fixed[use, arm] = nv[use]
    if np.any(nbr[np.isnan(val)] < 0):
        raise DomainError("inconsistent stencil links")
    stencil = Stencil(nbr, fixed, frac, X[ii, jj], Y[ii, jj], h, scheme)
    crossings = {"point": point, "value": val, "component": kind, "frac": frac}
    problem = Problem(domain, data, g, cls, bvals, index, np.stack([ii, jj], axis=1),
                      stencil, data.bounds(domain), crossings,
                      np.array(excluded, dtype=int).reshape(-1, 2),
                      dict(tolerances or {}), oracle, name)
    return problem
