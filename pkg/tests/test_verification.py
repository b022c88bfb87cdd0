import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tricomi.model import GridSpec, ProblemSpec
from tricomi.solver import solve
from tricomi.verification import (
    check_uniqueness_hypotheses,
    compile_report,
    energy_identity,
    gluing_residual,
)

from conftest import const, constant_problem, example_q, smooth_problem

NAMES = [
    "boundary-phi1", "boundary-phi2", "characteristic-psi", "gluing", "wave-residual",
    "caputo-residual", "trace-eq8", "trace-eq10", "continuity-AB",
]


def problem(q, gamma2=1.0, q1=None):
    return ProblemSpec(0.5, 1.0, gamma2, const(0.0), const(0.0), const(0.0), q, q1=q1)


def test_example_kernel_passes():
    v = check_uniqueness_hypotheses(problem(example_q))
    assert v.gamma2_ok and v.factorization_ok and v.diagonal_positive_ok and v.overall
    s = np.linspace(0, 1, 9)
    assert np.max(np.abs(v.q1(s) - np.exp(-s))) < 1e-8


def test_supplied_factor_checked():
    assert check_uniqueness_hypotheses(problem(example_q, q1=lambda s: np.exp(-s))).overall
    v = check_uniqueness_hypotheses(problem(example_q, q1=lambda s: 1.01 * np.exp(-s)))
    assert not v.factorization_ok and v.factorization_residual > 1e-8


def test_negative_gamma2_fails():
    v = check_uniqueness_hypotheses(problem(example_q, gamma2=-1.0))
    assert not v.gamma2_ok and not v.overall
    assert v.factorization_ok


def test_linear_kernel_fails_factorization():
    v = check_uniqueness_hypotheses(problem(lambda x, t: x + t))
    assert not v.factorization_ok and not v.overall


def test_rank_two_kernel_fails():
    # dQ/dt = -(e^-x e^-t + x t): symmetric, nonnegative diagonal, rank two
    q = lambda x, t: np.exp(-x) * (1 + np.exp(-t)) - 0.5 * x * t**2  # noqa: E731
    assert not check_uniqueness_hypotheses(problem(q)).factorization_ok


def test_energy_zero_and_polynomial():
    v = check_uniqueness_hypotheses(problem(example_q))
    e = energy_identity(np.zeros(33), problem(example_q), v)
    assert e.total == 0.0
    x = np.linspace(0, 1, 65)
    spec = ProblemSpec(0.5, 1.0, 0.0, const(0.0), const(0.0), const(0.0), example_q)
    e = energy_identity(x * (1 - x), spec, v)
    assert e.total == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_energy_sine_against_fine_quadrature():
    spec = problem(example_q)
    v = check_uniqueness_hypotheses(spec)
    x = np.linspace(0, 1, 129)
    e = energy_identity(np.sin(np.pi * x), spec, v)
    t, w = np.polynomial.legendre.leggauss(60)
    s = (t + 1) / 2
    w = w / 2
    dir_ = np.sum(w * (np.pi * np.cos(np.pi * s)) ** 2)
    qd = np.sum(w * np.sin(np.pi * s) ** 2 * example_q(s, s))
    ph = 0.5 * np.sum(w * np.sin(np.pi * s) * np.exp(-s)) ** 2
    ref = dir_ + math.gamma(0.5) * (qd + ph)
    assert e.total > 0
    assert e.total == pytest.approx(ref, rel=1e-7)


def test_energy_precondition():
    v = check_uniqueness_hypotheses(problem(example_q))
    with pytest.raises(ValueError, match="tau1"):
        energy_identity(np.ones(33), problem(example_q), v)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-1.0, 1.0), min_size=4, max_size=4).filter(lambda c: max(map(abs, c)) > 1e-3))
def test_energy_positive(c):
    spec = problem(example_q)
    v = check_uniqueness_hypotheses(spec)
    x = np.linspace(0, 1, 65)
    tau = sum(ck * np.sin((k + 1) * np.pi * x) for k, ck in enumerate(c))
    assert energy_identity(tau, spec, v).total > 0


def test_report_constant_problem():
    sol = solve(constant_problem(0.3), GridSpec(21, 21, 11), 33)
    rep = compile_report(constant_problem(0.3), sol.field)
    assert rep.names() == NAMES
    assert all(e.max <= 1e-8 for e in rep.entries)


def test_report_zero_problem():
    spec = constant_problem(0.0)
    sol = solve(spec, GridSpec(21, 21, 11), 33)
    assert np.all(sol.field.plus == 0.0)
    assert np.nanmax(np.abs(sol.field.minus)) == 0.0
    assert all(e.max <= 1e-10 for e in compile_report(spec, sol.field).entries)


def test_report_deterministic():
    spec = smooth_problem()
    a = compile_report(spec, solve(spec, GridSpec(11, 11, 6), 33).field).to_dict()
    b = compile_report(spec, solve(spec, GridSpec(11, 11, 6), 33).field).to_dict()
    assert a == b


def test_gluing_integral_only():
    """gamma1 = 0: the gluing right side is the integral term alone."""
    spec = smooth_problem(gamma1=0.0)
    r = [np.max(np.abs(gluing_residual(solve(spec, GridSpec(nx, nx, (nx + 1) // 2), n).field, spec)))
         for nx, n in ((11, 33), (21, 65))]
    assert r[1] < r[0] / 2
