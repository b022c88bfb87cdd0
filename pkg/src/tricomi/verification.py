"""Executable uniqueness hypotheses, the energy functional and the residual report."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import quad
from .field import PlusRepresentation, fd_oracle_minus, trace_spline
from .model import GridSpec, ProblemSpec, ResidualReport, SolutionField, TraceSet
from .special import l1_weights
from .traces import dq_dt


@dataclass(frozen=True)
class HypothesisVerdict:
    gamma2_ok: bool
    factorization_ok: bool
    factorization_residual: float
    diagonal_positive_ok: bool
    diagonal_min: float
    q1: Optional[Callable] = None

    @property
    def overall(self) -> bool:
        return self.gamma2_ok and self.factorization_ok and self.diagonal_positive_ok

    def lines(self) -> list[str]:
        flag = {True: "pass", False: "FAIL"}
        return [
            f"gamma2 >= 0: {flag[self.gamma2_ok]}",
            f"factorization dQ/dt = -Q1(x)Q1(t): {flag[self.factorization_ok]} "
            f"(max residual {self.factorization_residual:.3e})",
            f"diagonal Q(x,x) > 0: {flag[self.diagonal_positive_ok]} (min {self.diagonal_min:.6g})",
            f"overall: {flag[self.overall]}",
        ]


def _rank_one(M: Callable, n: int, rng: np.random.Generator, tol: float):
    """Rank-one test of a symmetric kernel M(x, t) = Q1(x) Q1(t).

    Returns (ok, residual, Q1) where residual is the worst relative 2x2-minor
    mismatch over random quadruples and the symmetric/diagonal checks.
    """
    x = np.linspace(0.0, 1.0, n)
    diag = np.asarray(M(x, x), dtype=float) * np.ones(n)
    if not np.all(np.isfinite(diag)) or diag.min() < -tol:
        return False, float(-diag.min()) if np.all(np.isfinite(diag)) else math.inf, None
    a, b, c, d = rng.uniform(0.0, 1.0, size=(4, 200))
    lhs = M(a, b) * M(c, d)
    rhs = M(a, d) * M(c, b)
    scale = np.maximum(np.abs(lhs) + np.abs(rhs), 1.0)
    minor = float(np.max(np.abs(lhs - rhs) / scale))
    sym = float(np.max(np.abs(M(a, b) - M(b, a)) / np.maximum(np.abs(M(a, b)), 1.0)))
    res = max(minor, sym)
    if res > tol:
        return False, res, None
    # pick the anchor where the diagonal is largest; Q1(x) = M(x, x0)/sqrt(M(x0, x0))
    x0 = float(x[int(np.argmax(diag))])
    m00 = float(np.asarray(M(np.array(x0), np.array(x0))))
    if m00 <= 0.0:
        # M vanishes on the diagonal, hence identically: Q is independent of t
        return True, res, (lambda s: np.zeros_like(np.asarray(s, float)))
    r = math.sqrt(m00)
    return True, res, (lambda s: np.asarray(M(np.asarray(s, float), np.full_like(np.asarray(s, float), x0))) / r)


def check_uniqueness_hypotheses(spec: ProblemSpec, n: int = 65, tol: float = 1e-8, seed: int = 0) -> HypothesisVerdict:
    """Check gamma2 >= 0, the factorization of dQ/dt and positivity of Q(x, x)."""
    x = np.linspace(0.0, 1.0, n)
    g2 = spec.gamma2 >= 0.0
    with np.errstate(all="ignore"):
        qd = np.asarray(spec.bigQ(x, x), dtype=float) * np.ones(n)
    dmin = float(np.min(qd)) if np.all(np.isfinite(qd)) else -math.inf
    dq = dq_dt(spec, use_factor=False)
    if spec.q1 is not None:
        X, T = np.meshgrid(x, x, indexing="ij")
        with np.errstate(all="ignore"):
            r = np.asarray(dq(X, T), float) + np.asarray(spec.q1(X), float) * np.asarray(spec.q1(T), float)
        res = float(np.max(np.abs(r))) if np.all(np.isfinite(r)) else math.inf
        ok, q1 = res <= tol, spec.q1
    else:
        with np.errstate(all="ignore"):
            ok, res, q1 = _rank_one(lambda a, b: -np.asarray(dq(a, b), float), n,
                                    np.random.default_rng(seed), tol)
    return HypothesisVerdict(g2, bool(ok), float(res), dmin > 0.0, dmin, q1 if ok else None)


@dataclass(frozen=True)
class EnergyReport:
    dirichlet_term: float
    q_diag_term: float
    phi_term: float
    total: float


def energy_identity(tau1, spec: ProblemSpec, verdict: HypothesisVerdict, tol: float = 1e-10) -> EnergyReport:
    """Discrete left side of the energy identity for the homogeneous trace problem.

    total = int tau'^2 + Gamma(alpha) gamma2 [int tau^2 Q(x,x) + Phi(1)^2/2],
    Phi(x) = int_0^x tau Q1. Needs an odd number of uniform samples.
    """
    tau = np.asarray(tau1, dtype=float)
    if abs(tau[0]) > tol or abs(tau[-1]) > tol:
        raise ValueError("energy identity needs tau1(0) = tau1(1) = 0 (homogeneous case)")
    n = tau.size
    x = np.linspace(0.0, 1.0, n)
    h = x[1] - x[0]
    w = quad.simpson_weights(n, h)
    dtau = quad.diff_uniform(tau, h, 1)
    dirichlet = float(w @ dtau**2)
    qd = np.asarray(spec.bigQ(x, x), dtype=float) * np.ones(n)
    qterm = float(w @ (tau**2 * qd))
    q1 = verdict.q1 if verdict.q1 is not None else spec.q1
    if q1 is None:
        phi = 0.0
    else:
        phi = 0.5 * float(w @ (tau * np.asarray(q1(x), float))) ** 2
    total = dirichlet + math.gamma(spec.alpha) * spec.gamma2 * (qterm + phi)
    return EnergyReport(dirichlet, qterm, phi, total)


# --------------------------------------------------------------------------- residuals


def probe_heights(alpha: float, x_min: float, ratio: float = 40.0) -> tuple[float, float]:
    """Two heights y with y^beta <= x_min/ratio.

    The kernel width of the upper equation is y^beta (beta = alpha/2), so the
    corner layers at x = 0 and x = 1 reach a distance ~ y^beta into the
    rectangle. Below these heights the layers are negligible at every
    interior grid node and the expansion u = tau + c y^alpha + O(y^(2 alpha))
    holds there.
    """
    y0 = (x_min / ratio) ** (2.0 / alpha)
    return y0, 0.5 * y0


def weighted_limit(rep: PlusRepresentation, x, alpha: float, x_min: float) -> np.ndarray:
    """lim_{y->0+} y^(1-alpha) u_y at the points ``x``.

    Uses D(y) = alpha (u(x, y) - tau(x)) / y^alpha, which has the same limit,
    at two probe heights; the y^alpha correction is eliminated.
    """
    x = np.asarray(x, dtype=float)
    tau = rep.linear(x) + rep.tau_v(x)
    D = [alpha * (rep(x, np.full_like(x, y)) - tau) / y**alpha for y in probe_heights(alpha, x_min)]
    q = 0.5**alpha
    return (D[1] - q * D[0]) / (1.0 - q)


def upper_limit(rep: PlusRepresentation, x, alpha: float, x_min: float) -> np.ndarray:
    """u(x, 0+) from the representation at the probe heights (y^alpha eliminated)."""
    x = np.asarray(x, dtype=float)
    u = [rep(x, np.full_like(x, y)) for y in probe_heights(alpha, x_min)]
    q = 0.5**alpha
    return (u[1] - q * u[0]) / (1.0 - q)


def representation(spec: ProblemSpec, trace: TraceSet) -> PlusRepresentation:
    return PlusRepresentation(spec.alpha, trace.x, trace.tau1, spec.phi1, spec.phi2)


def gluing_rhs(trace: TraceSet, spec: ProblemSpec, x, order: int = 24) -> np.ndarray:
    """gamma1 nu2(x) + gamma2 int_0^x nu2(t) Q(x, t) dt, nu2 interpolated from the traces."""
    x = np.asarray(x, dtype=float)
    nu2 = trace_spline(trace.x, trace.nu2)
    out = spec.gamma1 * nu2(x)
    if spec.gamma2 != 0.0:
        t, w = quad.gl_nodes(0.0, x, order)
        out = out + spec.gamma2 * np.sum(w * nu2(t) * spec.bigQ(x[:, None], t), axis=-1)
    return out


def gluing_residual(field: SolutionField, spec: ProblemSpec, rep: PlusRepresentation | None = None) -> np.ndarray:
    """Pointwise gluing mismatch at interior x nodes."""
    rep = rep or representation(spec, field.trace)
    x = field.x[1:-1]
    lim = weighted_limit(rep, x, spec.alpha, x[0])
    return lim - gluing_rhs(field.trace, spec, x)


def caputo_residual(field: SolutionField, alpha: float, y_min: float = 0.25) -> np.ndarray:
    """u_xx - D^alpha u at interior points with y >= y_min (L1 in y, central in x)."""
    U = field.plus
    y = field.y_plus
    hx = field.x[1] - field.x[0]
    rows = [k for k in range(1, y.size) if y[k] >= y_min - 1e-12]
    out = []
    for k in rows:
        c = l1_weights(y, alpha, k)
        dcap = c @ np.diff(U[: k + 1], axis=0)
        uxx = (U[k, 2:] - 2 * U[k, 1:-1] + U[k, :-2]) / hx**2
        out.append(uxx - dcap[1:-1])
    return np.array(out)


def compile_report(spec: ProblemSpec, field: SolutionField, grid: GridSpec | None = None) -> ResidualReport:
    """Nine named residuals of the boundary, gluing, interior and trace relations."""
    grid = grid or field.grid
    tr = field.trace
    x = field.x
    rep = ResidualReport()
    yp = field.y_plus
    rep.add("boundary-phi1", field.plus[:, 0] - spec.phi1(yp), grid)
    rep.add("boundary-phi2", field.plus[:, -1] - spec.phi2(yp), grid)

    # characteristic y = -x: columns where (x, -x) is a lower grid point
    ym = field.y_minus
    hits = [(j, int(np.argmin(np.abs(ym + xv)))) for j, xv in enumerate(x) if xv <= 0.5 + 1e-12]
    hits = [(j, i) for j, i in hits if abs(ym[i] + x[j]) < 1e-12]
    xs = np.array([x[j] for j, _ in hits])
    rep.add("characteristic-psi", np.array([field.minus[i, j] for j, i in hits]) - spec.psi(xs), grid)

    upper = representation(spec, tr)
    xi = x[1:-1]
    lim = weighted_limit(upper, xi, spec.alpha, xi[0])
    rep.add("gluing", lim - gluing_rhs(tr, spec, xi), grid)

    hx = x[1] - x[0]
    hy = ym[1] - ym[0]
    try:
        _, _, r = fd_oracle_minus(field.minus, hx, hy)
    except ValueError:
        r = np.array([])  # grid too coarse for a full stencil inside the triangle
    rep.add("wave-residual", r, grid)
    rep.add("caputo-residual", caputo_residual(field, spec.alpha), grid)

    # the upper equation at y -> 0+: tau'' = Gamma(alpha) * (weighted limit), tau'' from the AB row
    if x.size >= 6:
        d2 = quad.diff_uniform(field.plus[0], hx, 2)[1:-1]
    else:
        d2 = trace_spline(tr.x, tr.tau1).derivative(2)(xi)
    rep.add("trace-eq8", d2 - math.gamma(spec.alpha) * lim, grid)
    nu1 = trace_spline(tr.x, tr.nu1)(xi)
    rep.add("trace-eq10", nu1 - gluing_rhs(tr, spec, xi), grid)

    # one-sided limits: representation above, quadratic extrapolation of the rows below
    down = 2.0 * field.minus[-2] - field.minus[-3]
    rep.add("continuity-AB", upper_limit(upper, xi, spec.alpha, xi[0]) - down[1:-1], grid)
    return rep
