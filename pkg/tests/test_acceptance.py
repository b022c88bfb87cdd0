"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

Tolerances are pinned here; the summary lines are printed at the end of the
pytest run under "acceptance criteria".
"""

import math
import time

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from tricomi.cli import FLOOR
from tricomi.field import fd_oracle_plus
from tricomi.model import GridSpec, ProblemSpec
from tricomi.solver import solve
from tricomi.special import WrightParams, wright_e_prime, wright_e_with_bound, wright_partial_sum
from tricomi.traces import assemble_fredholm, bvp_oracle, green_g0, solve_tau1
from tricomi.verification import check_uniqueness_hypotheses, compile_report, energy_identity

from conftest import const, constant_problem, example_q, smooth_problem

TOL_CONSTANT = 1e-8
TOL_ZERO_TRACE = 1e-12
TOL_ZERO_FIELD = 1e-10
TOL_G0 = 1e-8
TOL_NYSTROM = 1e-6
WAVE_RATIO = (3.0, 5.0)
TOL_ORACLE = 5e-3
MIN_ORDER = 1.0
TOL_WRIGHT_TAIL = 1e-12
TOL_WRIGHT_FD = 1e-6


def test_criterion_01_constant_solution(record):
    t0 = time.perf_counter()
    sol = solve(constant_problem(0.3), GridSpec(41, 41, 21))
    elapsed = time.perf_counter() - t0
    f = sol.field
    err = max(np.max(np.abs(f.plus - 0.3)), np.nanmax(np.abs(f.minus - 0.3)))
    ok = err <= TOL_CONSTANT and elapsed < 60.0
    assert record(1, ok, f"max|u-0.3| = {err:.2e} (<= {TOL_CONSTANT:g}), {elapsed:.1f} s (< 60 s)")


def test_criterion_02_zero_data(record):
    spec = ProblemSpec(0.5, 1.0, 1.0, const(0.0), const(0.0), const(0.0), example_q)
    sol = solve(spec, GridSpec(21, 21, 11))
    et = float(np.max(np.abs(sol.trace.tau1)))
    ef = max(np.max(np.abs(sol.field.plus)), np.nanmax(np.abs(sol.field.minus)))
    ok = et <= TOL_ZERO_TRACE and ef <= TOL_ZERO_FIELD
    assert record(2, ok, f"max|tau1| = {et:.1e}, max|u| = {ef:.1e}")


def test_criterion_03_hypothesis_checker(record):
    def spec(q, g2):
        return ProblemSpec(0.5, 1.0, g2, const(0.0), const(0.0), const(0.0), q)

    example = check_uniqueness_hypotheses(spec(example_q, 1.0))
    negative = check_uniqueness_hypotheses(spec(example_q, -1.0))
    linear = check_uniqueness_hypotheses(spec(lambda x, t: x + t, 1.0))
    ok = (
        example.overall
        and not negative.overall and not negative.gamma2_ok and negative.factorization_ok
        and not linear.overall and not linear.factorization_ok and linear.gamma2_ok
    )
    assert record(3, ok, f"example {example.overall}, gamma2=-1 {negative.overall}, Q=x+t {linear.overall}")


_energies = []


@settings(max_examples=20, deadline=None, derandomize=True)
@given(st.lists(st.floats(-1.0, 1.0), min_size=5, max_size=5).filter(lambda c: max(map(abs, c)) > 1e-2))
def _energy_trial(c):
    spec = ProblemSpec(0.5, 1.0, 1.0, const(0.0), const(0.0), const(0.0), example_q)
    v = check_uniqueness_hypotheses(spec)
    x = np.linspace(0.0, 1.0, 65)
    # smooth, zero at both ends
    tau = sum(ck * np.sin((k + 1) * np.pi * x) for k, ck in enumerate(c))
    _energies.append(energy_identity(tau, spec, v).total)


def test_criterion_04_energy_positive(record):
    _energies.clear()
    _energy_trial()
    ok = len(_energies) >= 20 and min(_energies) > 0.0
    assert record(4, ok, f"{len(_energies)} trials, min energy {min(_energies):.3e}")


def _g0_apply(A, F, m):
    x = np.linspace(0.0, 1.0, m + 1)
    t, w = np.polynomial.legendre.leggauss(30)
    out = np.zeros_like(x)
    for i, xv in enumerate(x):
        for a, b in ((0.0, xv), (xv, 1.0)):
            if b > a:
                xi = a + 0.5 * (b - a) * (t + 1)
                out[i] += 0.5 * (b - a) * np.sum(w * green_g0(xv, xi, A) * F(xi))
    return out


def test_criterion_05_green_function(record):
    A = math.gamma(0.5)
    forcings = [lambda s: np.cos(3 * s) + s**2, lambda s: np.exp(s) * np.sin(2 * s), lambda s: 1.0 / (1.0 + s)]
    errs = []
    for F in forcings:
        _, uo = bvp_oracle(A, F(np.linspace(0.0, 1.0, 4001)), 0.0, 0.0)
        errs.append(float(np.max(np.abs(_g0_apply(A, F, 2000) - uo))))
    ok = max(errs) <= TOL_G0
    assert record(5, ok, "max |int G0 F - oracle| = " + ", ".join(f"{e:.1e}" for e in errs))


def test_criterion_06_nystrom(record):
    spec = smooth_problem()
    t33, _ = solve_tau1(assemble_fredholm(spec, 33))
    t65, _ = solve_tau1(assemble_fredholm(spec, 65))
    d = float(np.max(np.abs(t65[::2] - t33)))
    assert record(6, d <= TOL_NYSTROM, f"max|tau1(33) - tau1(65)| = {d:.2e}")


def test_criterion_07_wave_order(record):
    # hx != hy, so the five-point check is not exact on d'Alembert fields
    spec = smooth_problem()
    r = [compile_report(spec, solve(spec, GridSpec(*g), 129).field)["wave-residual"].max
         for g in ((41, 3, 11), (81, 3, 21))]
    ratio = r[0] / r[1]
    ok = WAVE_RATIO[0] <= ratio <= WAVE_RATIO[1]
    assert record(7, ok, f"residuals {r[0]:.2e} -> {r[1]:.2e}, ratio {ratio:.2f}")


def test_criterion_08_representation_vs_oracle(record):
    spec = smooth_problem()
    diffs = []
    for nx, n in ((51, 65), (101, 129)):
        sol = solve(spec, GridSpec(nx, nx, 3), n)
        tr = sol.trace
        V = fd_oracle_plus(spec, tr.x, tr.tau1, sol.field.x, sol.field.y_plus)
        diffs.append(float(np.max(np.abs(sol.field.plus - V))))
    ok = diffs[1] <= TOL_ORACLE and diffs[1] < diffs[0]
    assert record(8, ok, f"max diff 51x51 {diffs[0]:.2e}, 101x101 {diffs[1]:.2e}")


def test_criterion_09_report_orders(record):
    spec = smooth_problem()
    reps = [compile_report(spec, solve(spec, GridSpec(nx, nx, (nx + 1) // 2), n).field)
            for nx, n in ((21, 33), (41, 65))]
    bad, parts = [], []
    for name in reps[0].names():
        a, b = reps[0][name].max, reps[1][name].max
        if a <= FLOOR and b <= FLOOR:
            parts.append(f"{name} floor")
            continue
        order = math.log2(a / b) if b > 0 else math.inf
        parts.append(f"{name} {order:.2f}")
        if order < MIN_ORDER:
            bad.append(name)
    assert record(9, not bad, "orders: " + ", ".join(parts))


def test_criterion_10_wright(record):
    worst_tail = worst_fd = 0.0
    h = 1e-6
    for beta in (0.1, 0.25, 0.45):
        p = WrightParams(beta)
        for z in np.linspace(-10.0, 0.0, 41):
            for deriv in (False, True):
                _, N, _ = wright_e_with_bound(z, p, derivative=deriv)
                a = wright_partial_sum(z, beta, N, deriv)
                b = wright_partial_sum(z, beta, N + 10, deriv)
                worst_tail = max(worst_tail, abs(a - b))
            if z < 0.0:  # the series is only evaluated for z <= 0
                fd = (wright_e_with_bound(z + h, p)[0] - wright_e_with_bound(z - h, p)[0]) / (2 * h)
                worst_fd = max(worst_fd, abs(fd - wright_e_prime(z, p)))
    ok = worst_tail <= TOL_WRIGHT_TAIL and worst_fd <= TOL_WRIGHT_FD
    assert record(10, ok, f"N vs N+10 {worst_tail:.1e}, derivative vs FD {worst_fd:.1e}")
