import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tricomi.model import NumericalFailure
from tricomi.special import (
    WrightParams,
    caputo_l1,
    negligible_radius,
    reciprocal_gamma,
    wright_e,
    wright_e_prime,
    wright_e_with_bound,
    wright_partial_sum,
    wright_table,
)


def mp_wright(z, beta, derivative=False, dps=200, terms=1500):
    with mpmath.workdps(dps):
        mu = 0 if derivative else mpmath.mpf(beta)
        b = mpmath.mpf(beta)
        zz = mpmath.mpf(z)
        return float(mpmath.nsum(lambda n: zz**n * mpmath.rgamma(mu - b * n) / mpmath.factorial(n), [0, terms]))


def test_reciprocal_gamma_values():
    assert reciprocal_gamma(1.0) == 1.0
    assert reciprocal_gamma(0.0) == 0.0
    assert reciprocal_gamma(-3.0) == 0.0
    assert reciprocal_gamma(0.5) == pytest.approx(0.5641895835477563, abs=1e-15)


@pytest.mark.parametrize("z", [0.5, 1.0, 1.5, 2.0, 3.25])
def test_reciprocal_gamma_times_gamma(z):
    assert reciprocal_gamma(z) * math.gamma(z) == pytest.approx(1.0, abs=1e-13)


def test_wright_at_zero():
    p = WrightParams(0.25)
    assert wright_e(0.0, p) == pytest.approx(1.0 / math.gamma(0.25), abs=1e-15)
    assert wright_e_prime(0.0, p) == 0.0


@pytest.mark.parametrize("beta", [0.1, 0.25, 0.45])
@pytest.mark.parametrize("z", [-1.0, -5.0, -10.0])
def test_wright_against_high_precision(beta, z):
    p = WrightParams(beta)
    assert wright_e(z, p) == pytest.approx(mp_wright(z, beta), abs=1e-12)
    assert wright_e_prime(z, p) == pytest.approx(mp_wright(z, beta, True), abs=1e-12)


def test_wright_tail_bound_reported():
    p = WrightParams(0.25)
    v, n, tail = wright_e_with_bound(-10.0, p)
    assert tail <= p.tail_tol
    assert abs(wright_partial_sum(-10.0, 0.25, n + 10) - v) <= 1e-12


def test_wright_rejects_positive_argument():
    with pytest.raises(ValueError):
        wright_e(0.5, WrightParams(0.25))


def test_wright_budget_exhausted():
    with pytest.raises(NumericalFailure):
        wright_e(-60.0, WrightParams(0.45, truncation=50))


def test_params_invariants():
    for bad in (dict(beta=0.0), dict(beta=0.5), dict(beta=0.2, truncation=0), dict(beta=0.2, tail_tol=0.0)):
        with pytest.raises(ValueError):
            WrightParams(**bad)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([0.1, 0.25, 0.45]), st.floats(min_value=-10.0, max_value=0.0))
def test_truncation_self_consistency(beta, z):
    v, n, _ = wright_e_with_bound(z, WrightParams(beta))
    assert abs(wright_partial_sum(z, beta, n + 10) - v) <= 1e-12


def test_table_matches_series():
    tab = wright_table(0.25)
    r = np.array([0.0, 0.3, 1.7, 4.0, 9.5, 15.0])
    ref = np.array([wright_e(-x, WrightParams(0.25)) for x in r])
    dref = np.array([wright_e_prime(-x, WrightParams(0.25)) for x in r])
    assert np.max(np.abs(tab.e(r) - ref)) < 1e-13
    assert np.max(np.abs(tab.de(r) - dref)) < 1e-13
    assert tab.e(np.array([tab.radius + 1.0]))[0] == 0.0


def test_negligible_radius_is_negligible():
    beta = 0.25
    R = negligible_radius(beta, 1e-18)
    assert abs(mp_wright(-R, beta, dps=400, terms=3000)) < 1e-18


def test_caputo_l1_constant_and_affine():
    t = np.linspace(0.0, 1.0, 11)
    assert caputo_l1(np.full(11, 2.5), 0.5) == 0.0
    exact = 1.0 / math.gamma(1.5)
    assert caputo_l1(3.0 * t + 1.0, 0.5) == pytest.approx(3.0 * exact, abs=1e-13)


def test_caputo_l1_quadratic():
    n = 400
    t = np.linspace(0.0, 1.0, n + 1)
    assert caputo_l1(t**2, 0.5) == pytest.approx(2.0 / math.gamma(2.5), abs=5e-4)


def test_caputo_l1_errors():
    with pytest.raises(ValueError):
        caputo_l1([1.0], 0.5)
    with pytest.raises(ValueError):
        caputo_l1([1.0, 2.0], 1.5)
