"""Reduction to the interface trace and its Fredholm equation.

On the interface y = 0 the traces satisfy

    tau'' - A tau' = F1,   A = Gamma(alpha) * gamma1,
    F1(x) = gamma2 Gamma(alpha) int_0^x tau'(t) Q(x, t) dt
            - Gamma(alpha) [gamma1 psi'(x/2) + gamma2 int_0^x psi'(t/2) Q(x, t) dt],

with tau(0) = psi(0), tau(1) = phi2(0). Inverting the two-point operator
with its Green's function and integrating the tau' term by parts yields a
second-kind Fredholm equation tau - K tau = F2, solved here by a Nystrom
method whose row weights respect the kink of the Green's function at xi = x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .model import NumericalFailure, ProblemSpec
from . import quad

_SMALL_A = 1e-6


def _g(c, A: float):
    """(exp(c A) - 1) / A, continued analytically to A = 0."""
    c = np.asarray(c, dtype=float)
    if abs(A) < _SMALL_A:
        return c + 0.5 * c * c * A + c**3 * A * A / 6.0
    return np.expm1(c * A) / A


def g0_left(x, xi, A: float):
    """Branch xi <= x of the Green's function, valid (as an analytic formula) for all xi."""
    return _g(-np.asarray(xi, float), A) * _g(np.asarray(x, float) - 1.0, A) / _g(-1.0, A)


def g0_right(x, xi, A: float):
    """Branch xi >= x of the Green's function."""
    xi = np.asarray(xi, dtype=float)
    return -_g(np.asarray(x, float), A) * _g(xi - 1.0, A) * np.exp(-A * xi) / _g(-1.0, A)


def green_g0(x, xi, bigA: float, variant: str = "self-consistent"):
    """Green's function of tau'' - A tau' = F with tau(0) = tau(1) = 0.

    ``variant="printed-formula"`` evaluates the printed formula with the
    x-dependent normalisation A[e^{Ax} - e^{A(x-1)}]; it is kept for
    comparison output only.
    """
    x, xi = np.broadcast_arrays(np.asarray(x, float), np.asarray(xi, float))
    A = float(bigA)
    if variant == "self-consistent":
        out = np.where(xi <= x, g0_left(x, xi, A), g0_right(x, xi, A))
    elif variant == "printed-formula":
        den = np.exp(A * x) * _g(-1.0, A)
        left = -_g(xi, A) * _g(x - 1.0, A) / den
        right = -_g(xi - 1.0, A) * _g(x, A) / den
        out = np.where(xi <= x, left, right)
    else:
        raise ValueError(f"unknown Green's function variant {variant!r}")
    return out if out.ndim else float(out)


def homogeneous_part(x, a: float, b: float, bigA: float):
    """Solution of u'' - A u' = 0 with u(0) = a, u(1) = b."""
    x = np.asarray(x, dtype=float)
    return a + (b - a) * _g(x, bigA) / _g(1.0, bigA)


@dataclass(frozen=True)
class ReducedOde:
    bigA: float
    alpha: float
    gamma1: float
    gamma2: float

    @classmethod
    def from_spec(cls, spec: ProblemSpec) -> "ReducedOde":
        return cls(math.gamma(spec.alpha) * spec.gamma1, spec.alpha, spec.gamma1, spec.gamma2)


@dataclass(frozen=True)
class FredholmSystem:
    """Discrete form of tau - int K tau = F2.

    ``kernel_matrix[i, j]`` is K(x_i, xi_j); ``operator`` is the Nystrom
    matrix actually used (row-dependent split weights applied to the two
    smooth branches of K). ``weights`` are the plain composite Simpson
    weights of the node set.
    """

    nodes: np.ndarray
    weights: np.ndarray
    kernel_matrix: np.ndarray
    operator: np.ndarray
    rhs: np.ndarray
    bigA: float


def dq_dt(spec: ProblemSpec, use_factor: bool = True):
    """dQ/dt as a vectorised callable of (x, t).

    Preference: closed form, then -Q1(x)Q1(t) (unless ``use_factor`` is off,
    as when the factorization itself is being checked), then differences.
    """
    if spec.dq_dt is not None:
        return spec.dq_dt
    if use_factor and spec.q1 is not None:
        q1 = spec.q1
        return lambda x, t: -np.asarray(q1(x)) * np.asarray(q1(t))

    def fd(x, t):
        with np.errstate(all="ignore"):
            return quad.derivative(spec.bigQ, t, x=x)

    return fd


def dpsi(spec: ProblemSpec):
    if spec.dpsi is not None:
        return spec.dpsi

    def fd(s):
        with np.errstate(all="ignore"):
            return quad.derivative(spec.psi, s, lo=0.0, hi=0.5)

    return fd


def psi_forcing(spec: ProblemSpec, xi, order: int = 24):
    """-Gamma(alpha) [gamma1 psi'(xi/2) + gamma2 int_0^xi psi'(t/2) Q(xi, t) dt]."""
    xi = np.asarray(xi, dtype=float)
    dp = dpsi(spec)
    out = spec.gamma1 * np.asarray(dp(0.5 * xi), dtype=float)
    if spec.gamma2 != 0.0:
        t, w = quad.gl_nodes(0.0, xi, order)
        inner = np.sum(w * dp(0.5 * t) * spec.bigQ(xi[..., None], t), axis=-1)
        out = out + spec.gamma2 * inner
    return -math.gamma(spec.alpha) * out


def _branch_kernels(spec: ProblemSpec, x: np.ndarray, A: float, order: int):
    """K on both smooth branches, each continued over the whole square."""
    c = spec.gamma2 * math.gamma(spec.alpha)
    n = x.size
    X = x[:, None] * np.ones((1, n))
    Xi = np.ones((n, 1)) * x[None, :]
    diagQ = np.asarray(spec.bigQ(x, x), dtype=float) * np.ones(n)
    GL = g0_left(X, Xi, A)
    GR = g0_right(X, Xi, A)
    if c == 0.0:
        z = np.zeros((n, n))
        return z, z.copy()
    q = dq_dt(spec)
    # int_{xi}^{x} G0_left(x, s) q(s, xi) ds   (signed)
    s, w = quad.gl_nodes(Xi, X, order)
    I_mid = np.sum(w * g0_left(X[..., None], s, A) * q(s, Xi[..., None]), axis=-1)
    # int_{x}^{1} G0_right(x, s) q(s, xi) ds
    s, w = quad.gl_nodes(X, 1.0, order)
    I_tail = np.sum(w * g0_right(X[..., None], s, A) * q(s, Xi[..., None]), axis=-1)
    # int_{xi}^{1} G0_right(x, s) q(s, xi) ds
    s, w = quad.gl_nodes(Xi, 1.0, order)
    I_right = np.sum(w * g0_right(X[..., None], s, A) * q(s, Xi[..., None]), axis=-1)
    KL = c * (GL * diagQ[None, :] - (I_mid + I_tail))
    KR = c * (GR * diagQ[None, :] - I_right)
    return KL, KR


def assemble_fredholm(spec: ProblemSpec, n: int = 65, order: int = 20) -> FredholmSystem:
    if n < 9 or n % 2 == 0:
        raise ValueError("node count must be odd and >= 9")
    A = math.gamma(spec.alpha) * spec.gamma1
    x = np.linspace(0.0, 1.0, n)
    h = 1.0 / (n - 1)
    KL, KR = _branch_kernels(spec, x, A, order)
    if not (np.all(np.isfinite(KL)) and np.all(np.isfinite(KR))):
        raise NumericalFailure("kernel assembly produced non-finite values")
    op = np.zeros((n, n))
    for i in range(n):
        wl, wr = quad.split_row_weights(n, i, h)
        op[i] = wl * KL[i] + wr * KR[i]
    K = np.where(np.arange(n)[None, :] <= np.arange(n)[:, None], KL, KR)

    a = float(np.asarray(spec.psi(np.array(0.0))))
    b = float(np.asarray(spec.phi2(np.array(0.0))))
    rhs = homogeneous_part(x, a, b, A)
    # int_0^1 G0(x, xi) F_psi(xi) dxi, split at the kink xi = x
    xl, wl = quad.gl_nodes(0.0, x, 24)
    xr, wr = quad.gl_nodes(x, 1.0, 24)
    rhs = rhs + np.sum(wl * g0_left(x[:, None], xl, A) * psi_forcing(spec, xl), axis=-1)
    rhs = rhs + np.sum(wr * g0_right(x[:, None], xr, A) * psi_forcing(spec, xr), axis=-1)
    # boundary term of the parts integration: -tau(0) int K(x, xi) dxi, discretised
    # with the same operator so that constants are reproduced exactly
    rhs = rhs - a * op.sum(axis=1)
    return FredholmSystem(
        nodes=x,
        weights=quad.simpson_weights(n, h),
        kernel_matrix=K,
        operator=op,
        rhs=rhs,
        bigA=A,
    )


def solve_tau1(sys: FredholmSystem, max_cond: float = 1e12) -> tuple[np.ndarray, float]:
    """Solve (I - K W) tau = F2; returns (tau, 2-norm condition number)."""
    n = sys.nodes.size
    M = np.eye(n) - sys.operator
    cond = float(np.linalg.cond(M))
    if not np.isfinite(cond) or cond > max_cond:
        raise NumericalFailure(
            f"Nystrom matrix ill-conditioned (cond={cond:.3g}); the data may violate "
            "the uniqueness hypotheses"
        )
    return linalg.solve(M, sys.rhs), cond


def recover_nu(tau1, spec: ProblemSpec, x=None) -> tuple[np.ndarray, np.ndarray]:
    """nu1 = tau''/Gamma(alpha), nu2 = tau' - psi'(x/2) on a uniform grid."""
    tau1 = np.asarray(tau1, dtype=float)
    if tau1.size < 6:
        raise ValueError("recover_nu needs at least 6 samples")
    x = np.linspace(0.0, 1.0, tau1.size) if x is None else np.asarray(x, float)
    h = x[1] - x[0]
    d1 = quad.diff_uniform(tau1, h, 1)
    d2 = quad.diff_uniform(tau1, h, 2)
    nu2 = d1 - np.asarray(dpsi(spec)(0.5 * x), dtype=float)
    nu1 = d2 / math.gamma(spec.alpha)
    return nu1, nu2


def bvp_oracle(bigA: float, forcing, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Solve u'' - A u' = F, u(0) = a, u(1) = b by central differences.

    ``forcing`` holds F on 2m + 1 equispaced nodes of [0, 1]. The problem is
    solved with steps h and 2h and combined by Richardson extrapolation;
    the result is returned on the m + 1 coarse nodes.
    """
    F = np.asarray(forcing, dtype=float)
    if F.size < 5 or F.size % 2 == 0:
        raise ValueError("forcing needs an odd number (>= 5) of samples")

    def fd(Fs):
        N = Fs.size - 1
        h = 1.0 / N
        m = N - 1
        lo = 1.0 / h**2 + bigA / (2 * h)
        di = -2.0 / h**2
        up = 1.0 / h**2 - bigA / (2 * h)
        ab = np.zeros((3, m))
        ab[0, 1:] = up
        ab[1, :] = di
        ab[2, :-1] = lo
        r = Fs[1:-1].copy()
        r[0] -= lo * a
        r[-1] -= up * b
        u = np.empty(N + 1)
        u[0], u[-1] = a, b
        u[1:-1] = linalg.solve_banded((1, 1), ab, r)
        return u

    fine = fd(F)
    coarse = fd(F[::2])
    x = np.linspace(0.0, 1.0, coarse.size)
    return x, (4.0 * fine[::2] - coarse) / 3.0
