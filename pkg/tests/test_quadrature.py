import math

import numpy as np
import pytest

from hmsurf.families import height_G, height_H
from hmsurf.quadrature import (Estimate, QuadratureError, SingularIntegral, check_sqrt_singularity,
                               gauss_kronrod, integrate_decaying_tail, integrate_sqrt_singular)

from oracles import oracle_G, oracle_H

H2 = 1.68575035481257851
G05 = 0.8428751774062804


def test_inverse_sqrt_on_unit_interval():
    est = integrate_sqrt_singular(SingularIntegral(lambda v: 1.0 / np.sqrt(v), 0.0, 1.0))
    assert abs(est - 2.0) < 1e-12
    assert est.error <= 1e-10


@pytest.mark.parametrize("X", [1.5, 3.0, 10.0, 100.0])
def test_acosh_integral(X):
    si = SingularIntegral(lambda s: 1.0 / np.sqrt((s - 1.0) * (s + 1.0)), 1.0, X, tol=1e-12)
    est = integrate_sqrt_singular(si)
    assert abs(est - math.acosh(X)) <= max(est.error, 1e-13)


def test_exponential_tail():
    est = integrate_decaying_tail(lambda u: np.exp(-u), 0.0, 1.0)
    assert abs(est - 1.0) < 1e-12


def test_tail_of_H_from_twenty():
    d = 2.0

    def f(u):
        c = np.cosh(u)
        return d / np.sqrt((c - d) * (c + d))
    # d / sqrt(cosh^2 - d^2) <= 2.0001 d e^{-u} for u >= 20
    C = 2.0001 * d
    tail = integrate_decaying_tail(f, 20.0, 1.0, C=C, U0=20.0, tol=1e-14)
    assert tail < C * math.exp(-20.0)
    near = gauss_kronrod(f, 20.0, 40.0, tol=1e-16)
    assert abs(tail - near) < 1e-14 + C * math.exp(-40.0)


def test_decay_certificate_violation():
    with pytest.raises(QuadratureError):
        integrate_decaying_tail(lambda u: np.exp(-0.5 * u), 0.0, 1.0)


def test_infinite_limit_needs_certificate():
    with pytest.raises(ValueError):
        integrate_sqrt_singular(SingularIntegral(lambda u: np.exp(-u) / np.sqrt(u), 0.0))


def test_singularity_order_checked():
    with pytest.raises(ValueError):
        check_sqrt_singularity(lambda u: 1.0 / u, 0.0)
    assert check_sqrt_singularity(lambda u: 3.0 / np.sqrt(u), 0.0) == pytest.approx(3.0)


def test_unmet_tolerance_raises_with_bound():
    with pytest.raises(QuadratureError) as info:
        gauss_kronrod(lambda x: np.sin(1.0 / x), 1e-9, 1.0, tol=1e-15, max_panels=20)
    assert math.isfinite(info.value.error)


def test_H2_against_oracle():
    assert abs(oracle_H(2.0) - H2) < 1e-12
    assert abs(height_H(2.0) - H2) < 1e-8


def test_G_half_against_oracle():
    assert abs(oracle_G(0.5) - G05) < 1e-12
    assert abs(height_G(0.5) - G05) < 1e-8


@pytest.mark.parametrize("d", [1.01, 1.5, 2.0, 7.0, 300.0])
def test_substitutions_agree(d):
    s = height_H(d, substitution="s")
    v = height_H(d, substitution="v")
    assert abs(s - v) <= s.error + v.error


def test_estimate_behaves_like_float():
    e = Estimate(1.5, 1e-9, 30)
    assert e + 1 == 2.5 and type(e + 1) is float
    assert e.value == 1.5 and e.error == 1e-9 and e.evaluations == 30
    import pickle
    again = pickle.loads(pickle.dumps(e))
    assert again.error == e.error
