"""Independent reference values for the test suite.

The brute-force oracle is a composite midpoint rule on 10**6 panels with
one Richardson step against 5 * 10**5 panels, applied after substituting
``u = a + s**2`` at a square-root endpoint. The integrands are written
out here from scratch (no code shared with the package) and factored so
that ``cosh^2 u - d^2`` and ``sinh^2 r - sinh^2 rho`` lose no digits near
the endpoint. Tails are cut where the integrand is below 1e-22.
"""

import math

import numpy as np
from scipy.special import ellipk

PANELS = 10 ** 6


def midpoint(g, a, b, n=PANELS):
    h = (b - a) / n
    x = a + h * (np.arange(n) + 0.5)
    return h * np.sum(g(x))


def brute_force(g, a, b, n=PANELS):
    """Midpoint rule with one Richardson step (error O(h^4))."""
    fine = midpoint(g, a, b, n)
    coarse = midpoint(g, a, b, n // 2)
    return fine + (fine - coarse) / 3.0


def oracle_H(d, cut=60.0):
    a = math.acosh(d)

    def g(s):
        t = s * s
        # cosh(a+t) - d = 2 sinh(a + t/2) sinh(t/2)
        lo = 2.0 * np.sinh(a + 0.5 * t) * np.sinh(0.5 * t)
        hi = np.cosh(a + t) + d
        return 2.0 * s * d / np.sqrt(lo * hi)
    return brute_force(g, 0.0, math.sqrt(cut))


def oracle_G(d, cut=60.0):
    def g(u):
        lo = 2.0 * np.sinh(0.5 * u) ** 2 + (1.0 - d)
        return d / np.sqrt(lo * (np.cosh(u) + d))
    return brute_force(g, 0.0, cut)


def oracle_f(rho, cut=60.0):
    sh = math.sinh(rho)

    def g(s):
        t = s * s
        return 2.0 * s * sh / np.sqrt(np.sinh(t) * np.sinh(2.0 * rho + t))
    return brute_force(g, 0.0, math.sqrt(cut))


def oracle_f_elliptic(rho):
    """Closed form ``tanh(rho) K(sech^2 rho)`` (parameter convention of
    ``scipy.special.ellipk``)."""
    return math.tanh(rho) * ellipk(1.0 / math.cosh(rho) ** 2)


def oracle_profile(rho, d):
    """``lambda(rho; d)`` for ``d > 1`` from ``acosh d``."""
    a = math.acosh(d)
    top = math.sqrt(rho - a)

    def g(s):
        t = s * s
        lo = 2.0 * np.sinh(a + 0.5 * t) * np.sinh(0.5 * t)
        hi = np.cosh(a + t) + d
        return 2.0 * s * d / np.sqrt(lo * hi)
    return brute_force(g, 0.0, top)


def elliptic_G(d):
    """Closed form ``G(d) = d K(d^2)`` (``ellipk`` takes the parameter
    ``m = k^2``); agrees with :func:`oracle_G` to 1e-14."""
    return d * ellipk(d * d)
