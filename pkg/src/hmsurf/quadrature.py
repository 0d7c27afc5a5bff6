"""Adaptive quadrature for integrals with an inverse square-root endpoint
singularity and exponentially decaying tails.

Every result is an :class:`Estimate`, a ``float`` that also carries an a
posteriori error bound. The bound is the sum over panels of the
Gauss-Kronrod discrepancy ``|K15 - G7|`` plus a rounding allowance, which
is pessimistic for smooth integrands by design.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

__all__ = [
    "Estimate",
    "QuadratureError",
    "SingularIntegral",
    "gauss_kronrod",
    "integrate_decaying_tail",
    "integrate_sqrt_singular",
    "check_sqrt_singularity",
]

DEFAULT_TOL = 1e-10

# 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_WK_FULL = np.concatenate([_WK[:-1], _WK[::-1]])
# Gauss nodes are the odd-indexed Kronrod abscissae.
_WG_FULL = np.zeros(15)
_WG_FULL[[1, 3, 5]] = _WG[:3]
_WG_FULL[7] = _WG[3]
_WG_FULL[[13, 11, 9]] = _WG[:3]

_EPS = np.finfo(float).eps


class Estimate(float):
    """A float carrying an error bound.

    Arithmetic on an ``Estimate`` returns a plain ``float``; the bound is
    only meaningful for the value as returned.
    """

    error: float
    evaluations: int

    def __new__(cls, value: float, error: float, evaluations: int = 0):
        obj = super().__new__(cls, value)
        obj.error = float(error)
        obj.evaluations = int(evaluations)
        return obj

    @property
    def value(self) -> float:
        return float(self)

    def __repr__(self) -> str:
        return f"Estimate({float(self)!r}, error={self.error!r})"

    def __reduce__(self):
        return (Estimate, (float(self), self.error, self.evaluations))


class QuadratureError(ArithmeticError):
    """Raised when a tolerance cannot be met. ``value`` and ``error`` hold
    the best estimate and its bound at the point of failure."""

    def __init__(self, message: str, value: float = math.nan,
                 error: float = math.inf):
        super().__init__(f"{message} (achieved bound {error:.3e})")
        self.value = value
        self.error = error


def _panel(g: Callable, a: float, b: float) -> Tuple[float, float, float]:
    c = 0.5 * (a + b)
    r = 0.5 * (b - a)
    fx = np.asarray(g(c + r * _NODES), dtype=float)
    if not np.all(np.isfinite(fx)):
        raise QuadratureError(f"non-finite integrand on [{a!r}, {b!r}]")
    k = r * float(np.dot(_WK_FULL, fx))
    gs = r * float(np.dot(_WG_FULL, fx))
    absk = abs(r) * float(np.dot(_WK_FULL, np.abs(fx)))
    err = abs(k - gs) + 50.0 * _EPS * absk
    return k, err, absk


def gauss_kronrod(g: Callable, a: float, b: float, tol: float = DEFAULT_TOL,
                  max_panels: int = 4000, initial_panels: int = 1) -> Estimate:
    """Globally adaptive G7/K15 quadrature of a vectorized integrand.

    Parameters
    ----------
    g : callable
        Vectorized integrand, evaluated on arrays of interior nodes only.
    a, b : float
        Finite limits.
    tol : float
        Absolute target for the error bound.
    max_panels : int
        Bisection budget.
    initial_panels : int
        Number of equal panels to start from.

    Returns
    -------
    Estimate
        Value with the summed panel error bound.

    Raises
    ------
    QuadratureError
        If the budget is exhausted before the bound drops below ``tol``.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("gauss_kronrod requires finite limits")
    if a == b:
        return Estimate(0.0, 0.0, 0)
    edges = np.linspace(a, b, initial_panels + 1)
    heap = []
    total = 0.0
    err_total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        k, e, _ = _panel(g, lo, hi)
        heapq.heappush(heap, (-e, lo, hi, k))
        total += k
        err_total += e
    evals = 15 * initial_panels
    while err_total > tol:
        if len(heap) >= max_panels:
            raise QuadratureError("panel budget exhausted", total, err_total)
        neg_e, lo, hi, k = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            heapq.heappush(heap, (neg_e, lo, hi, k))
            raise QuadratureError("panel width underflow", total, err_total)
        k1, e1, _ = _panel(g, lo, mid)
        k2, e2, _ = _panel(g, mid, hi)
        evals += 30
        total += k1 + k2 - k
        err_total += e1 + e2 + neg_e
        heapq.heappush(heap, (-e1, lo, mid, k1))
        heapq.heappush(heap, (-e2, mid, hi, k2))
    # Re-sum to avoid drift from the running updates.
    total = math.fsum(item[3] for item in heap)
    err_total = math.fsum(-item[0] for item in heap)
    return Estimate(total, err_total, evals)


def integrate_decaying_tail(f: Callable, a: float, rate: float, C: float = 1.0,
                            U0: Optional[float] = None,
                            tol: float = DEFAULT_TOL,
                            certify: int = 64) -> Estimate:
    """Integrate ``f`` over ``[a, inf)`` given ``|f(u)| <= C exp(-rate u)``
    for ``u >= U0``.

    The interval is truncated at the first ``T >= max(a, U0)`` whose tail
    bound ``C exp(-rate T) / rate`` is below ``tol / 2000``; half the
    budget goes to the finite part. The decay bound is spot-checked on
    ``certify`` points beyond ``U0`` and a violation raises.
    """
    if rate <= 0 or C <= 0:
        raise ValueError("decay rate and constant must be positive")
    start = a if U0 is None else max(a, U0)
    # the tail costs little, so push its bound far below the target
    T = max(start, math.log(2e3 * C / (rate * tol)) / rate)
    if certify:
        probe = np.linspace(start, T + 5.0 / rate, certify)
        vals = np.abs(np.asarray(f(probe), dtype=float))
        bound = C * np.exp(-rate * probe)
        if np.any(~np.isfinite(vals)) or np.any(vals > bound * (1 + 1e-9) + 1e-300):
            raise QuadratureError("decay certificate violated in sampling")
    tail = C * math.exp(-rate * T) / rate
    n0 = max(1, int(math.ceil((T - a) / 4.0)))
    body = gauss_kronrod(f, a, T, tol=0.5 * tol, initial_panels=min(n0, 64))
    return Estimate(float(body), body.error + tail, body.evaluations)


def check_sqrt_singularity(f: Callable, a: float, scale: float = 1.0) -> float:
    """Check that ``f(a + e) ~ c / sqrt(e)`` with ``c > 0`` as ``e -> 0+``.

    Returns the estimated coefficient ``c``; raises ``ValueError`` when the
    approach behaviour is not an inverse square root.
    """
    eps = scale * np.array([1e-4, 1e-5, 1e-6])
    v = np.sqrt(eps) * np.asarray(f(a + eps), dtype=float)
    if not np.all(np.isfinite(v)) or np.any(v <= 0):
        raise ValueError("integrand is not positive and finite near the endpoint")
    if abs(v[0] / v[2] - 1.0) > 0.05:
        raise ValueError(
            f"endpoint singularity is not of order -1/2 (sqrt(e) f(a+e) = {v})")
    return float(v[2])


@dataclass(frozen=True)
class SingularIntegral:
    """Integral of ``integrand`` over ``(a, b)`` with ``integrand ~ c/sqrt(u-a)``.

    Attributes
    ----------
    integrand : callable
        Vectorized ``f(u)``.
    a : float
        Singular lower endpoint.
    b : float
        Upper endpoint, ``math.inf`` allowed.
    tol : float
        Target absolute error.
    regularized : callable, optional
        Accurate implementation of ``2 s f(a + s**2)``. Supplying it avoids
        cancellation in ``u - a`` for small ``s``.
    decay : tuple, optional
        ``(C, rate, U0)`` with ``|f(u)| <= C exp(-rate u)`` for ``u >= U0``.
        Required when ``b`` is infinite.
    split : float, optional
        Where the substituted part hands over to the tail integrator.
    """

    integrand: Callable
    a: float
    b: float = math.inf
    tol: float = DEFAULT_TOL
    regularized: Optional[Callable] = None
    decay: Optional[Tuple[float, float, float]] = None
    split: Optional[float] = None
    check: bool = True


def integrate_sqrt_singular(si: SingularIntegral) -> Estimate:
    """Evaluate a :class:`SingularIntegral` with the substitution
    ``u = a + s**2``, which turns the endpoint singularity into a smooth
    integrand, followed by adaptive Gauss-Kronrod and, for infinite upper
    limits, a certified exponential tail."""
    f, a, b, tol = si.integrand, float(si.a), float(si.b), si.tol
    if not b > a:
        raise ValueError("upper limit must exceed the singular endpoint")
    if si.check:
        check_sqrt_singularity(f, a, scale=min(1.0, b - a))
    g = si.regularized
    if g is None:
        def g(s):
            return 2.0 * s * f(a + s * s)
    if math.isinf(b):
        if si.decay is None:
            raise ValueError("an infinite upper limit needs a decay certificate")
        C, rate, U0 = si.decay
        u_split = si.split if si.split is not None else max(a + 1.0, U0)
        head = gauss_kronrod(g, 0.0, math.sqrt(u_split - a), tol=0.5 * tol,
                             initial_panels=4)
        tail = integrate_decaying_tail(f, u_split, rate, C=C, U0=U0,
                                       tol=0.5 * tol)
        return Estimate(float(head) + float(tail), head.error + tail.error,
                        head.evaluations + tail.evaluations)
    return gauss_kronrod(g, 0.0, math.sqrt(b - a), tol=tol, initial_panels=4)
