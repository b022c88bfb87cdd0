"""Special functions: reciprocal gamma, the Wright-type kernel function and
discrete Caputo operators.

The Wright-type function used throughout is

    e(z) = sum_{n>=0} z**n / (n! * Gamma(beta - beta*n)),   0 < beta < 1/2,

together with its derivative e'(z) = sum_{m>=0} z**m / (m! * Gamma(-beta*m)).
Both are entire; for large negative ``z`` the partial sums cancel heavily, so
the series is summed in double precision only while the largest term is
harmless and in arbitrary precision (mpmath) otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy import special as sp

from .model import NumericalFailure

__all__ = [
    "WrightParams",
    "reciprocal_gamma",
    "wright_e",
    "wright_e_prime",
    "wright_e_with_bound",
    "wright_partial_sum",
    "negligible_radius",
    "WrightTable",
    "caputo_l1",
    "l1_weights",
]

_EPS = np.finfo(float).eps


def reciprocal_gamma(z):
    """1/Gamma(z) as an entire function (exact zeros at 0, -1, -2, ...)."""
    out = sp.rgamma(z)
    if np.ndim(out) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class WrightParams:
    beta: float
    truncation: int = 400
    tail_tol: float = 1e-13

    def __post_init__(self):
        if not 0.0 < self.beta < 0.5:
            raise ValueError(f"beta={self.beta} must lie in (0, 1/2)")
        if self.truncation < 1:
            raise ValueError("truncation must be >= 1")
        if not self.tail_tol > 0.0:
            raise ValueError("tail_tol must be positive")

    @classmethod
    def from_alpha(cls, alpha: float, **kw) -> "WrightParams":
        return cls(beta=alpha / 2.0, **kw)


def _mu(beta: float, derivative: bool) -> float:
    # e uses 1/Gamma(beta - beta*n); e' uses 1/Gamma(-beta*m)
    return 0.0 if derivative else beta


def _log_majorant(z: float, beta: float, mu: float, n: np.ndarray) -> np.ndarray:
    # |1/Gamma(w)| <= Gamma(1-w)/pi for w < 1 (reflection formula)
    if z == 0.0:
        zpow = np.where(n == 0, 0.0, -np.inf)
    else:
        zpow = n * math.log(abs(z))
    return zpow + sp.gammaln(1.0 - mu + beta * n) - sp.gammaln(n + 1.0) - math.log(math.pi)


def _choose_terms(z: float, beta: float, mu: float, p: WrightParams) -> tuple[int, float, float]:
    """Return (N, tail bound, log of the largest majorant term)."""
    budget = p.truncation
    n = np.arange(budget + 2, dtype=float)
    logm = _log_majorant(z, beta, mu, n)
    if z == 0.0:
        return 1, 0.0, float(logm[0])
    peak = int(np.argmax(logm))
    ratios = np.exp(np.diff(logm))
    for N in range(max(peak + 1, 2), budget + 1):
        r = ratios[N]
        if r <= 0.5:
            tail = math.exp(logm[N]) / (1.0 - r)
            if tail <= p.tail_tol:
                return N, tail, float(logm[peak])
    raise NumericalFailure(
        f"Wright series did not reach tail_tol={p.tail_tol:g} within "
        f"{budget} terms at z={z:g}, beta={beta:g}"
    )


def _float_terms(z: float, beta: float, mu: float, N: int) -> np.ndarray:
    n = np.arange(N, dtype=float)
    w = mu - beta * n
    rg = sp.rgamma(w)
    with np.errstate(divide="ignore"):
        logabs = np.where(rg == 0.0, -np.inf, -sp.gammaln(w))
    sign = np.sign(rg)
    if z == 0.0:
        zpow_log = np.where(n == 0, 0.0, -np.inf)
        zsign = np.ones_like(n)
    else:
        zpow_log = n * math.log(abs(z))
        zsign = np.where((z < 0) & (n % 2 == 1), -1.0, 1.0)
    return sign * zsign * np.exp(logabs + zpow_log - sp.gammaln(n + 1.0))


@lru_cache(maxsize=64)
def _mp_coeffs(beta: float, mu: float, N: int, dps: int) -> tuple:
    with mpmath.workdps(dps):
        b = mpmath.mpf(beta)
        m = mpmath.mpf(mu)
        out = []
        fact = mpmath.mpf(1)
        for n in range(N):
            if n:
                fact *= n
            out.append(mpmath.rgamma(m - b * n) / fact)
        return tuple(out)


def _mp_sum(z: float, beta: float, mu: float, N: int, log_peak: float) -> float:
    dps = 20 + max(0, int(math.ceil(log_peak / math.log(10.0))))
    dps = 10 * ((dps + 9) // 10)
    # reuse one coefficient table per precision bucket
    Ncache = 50 * ((N + 49) // 50)
    coeffs = _mp_coeffs(beta, mu, Ncache, dps)
    with mpmath.workdps(dps):
        zz = mpmath.mpf(z)
        s = mpmath.mpf(0)
        zn = mpmath.mpf(1)
        for n in range(N):
            s += coeffs[n] * zn
            zn *= zz
        return float(s)


def wright_partial_sum(z: float, beta: float, n_terms: int, derivative: bool = False) -> float:
    """Partial sum of the first ``n_terms`` series terms, summed accurately."""
    mu = _mu(beta, derivative)
    n = np.arange(max(n_terms, 1), dtype=float)
    log_peak = float(np.max(_log_majorant(float(z), beta, mu, n)))
    if n_terms * math.exp(min(log_peak, 700.0)) * _EPS <= 1e-15:
        return float(np.sum(_float_terms(float(z), beta, mu, n_terms)))
    return _mp_sum(float(z), beta, mu, n_terms, log_peak)


def wright_e_with_bound(z: float, p: WrightParams, derivative: bool = False) -> tuple[float, int, float]:
    """Evaluate e(z) (or e'(z)); returns (value, terms used, tail bound)."""
    z = float(z)
    if z > 0.0:
        raise ValueError("Wright-type function is only evaluated for z <= 0")
    mu = _mu(p.beta, derivative)
    N, tail, log_peak = _choose_terms(z, p.beta, mu, p)
    if N * math.exp(min(log_peak, 700.0)) * _EPS <= 0.1 * p.tail_tol:
        value = float(np.sum(_float_terms(z, p.beta, mu, N)))
    else:
        value = _mp_sum(z, p.beta, mu, N, log_peak)
    return value, N, tail


def wright_e(z: float, p: WrightParams) -> float:
    return wright_e_with_bound(z, p)[0]


def wright_e_prime(z: float, p: WrightParams) -> float:
    return wright_e_with_bound(z, p, derivative=True)[0]


def negligible_radius(beta: float, tol: float = 1e-18) -> float:
    """Radius beyond which |e(-r)| and |e'(-r)| fall below ``tol``.

    Uses the leading exponential decay exp(-s * r**(1/(1-beta))) with
    s = (1-beta) * beta**(beta/(1-beta)), padded for the algebraic prefactor.
    """
    s = (1.0 - beta) * beta ** (beta / (1.0 - beta))
    target = -math.log(tol) + 8.0
    return (target / s) ** (1.0 - beta)


class WrightTable:
    """Piecewise Chebyshev interpolants of r -> e(-r) and r -> e'(-r) on [0, R].

    Values beyond R are returned as zero (below ``tol`` by construction).
    Table nodes are evaluated with :func:`wright_e_with_bound`, so the table
    inherits its accuracy.
    """

    def __init__(self, beta: float, panel: float = 0.5, degree: int = 16, tol: float = 1e-18):
        self.beta = beta
        self.params = WrightParams(beta=beta, truncation=2000, tail_tol=1e-16)
        self.radius = negligible_radius(beta, tol)
        self.npanel = int(math.ceil(self.radius / panel))
        self.panel = self.radius / self.npanel
        self.degree = degree
        k = np.arange(degree + 1)
        self._cheb = np.cos(np.pi * (k + 0.5) / (degree + 1))  # Chebyshev points of the first kind
        self.coef_e = np.empty((degree + 1, self.npanel))
        self.coef_de = np.empty((degree + 1, self.npanel))
        for j in range(self.npanel):
            a = j * self.panel
            r = a + 0.5 * self.panel * (self._cheb + 1.0)
            ve = [wright_e_with_bound(-ri, self.params)[0] for ri in r]
            vd = [wright_e_with_bound(-ri, self.params, derivative=True)[0] for ri in r]
            self.coef_e[:, j] = np.polynomial.chebyshev.chebfit(self._cheb, ve, degree)
            self.coef_de[:, j] = np.polynomial.chebyshev.chebfit(self._cheb, vd, degree)

    def _eval(self, coef: np.ndarray, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        flat = r.ravel()
        out = np.zeros_like(flat)
        inside = (flat >= 0.0) & (flat < self.radius)
        ri = flat[inside]
        j = np.minimum((ri / self.panel).astype(int), self.npanel - 1)
        t = 2.0 * (ri - j * self.panel) / self.panel - 1.0
        c = coef[:, j]
        # Clenshaw recurrence, vectorised over points
        b1 = np.zeros_like(t)
        b2 = np.zeros_like(t)
        for k in range(self.degree, 0, -1):
            b1, b2 = 2.0 * t * b1 - b2 + c[k], b1
        out[inside] = t * b1 - b2 + c[0]
        return out.reshape(r.shape)

    def e(self, r):
        """e(-r) for r >= 0."""
        return self._eval(self.coef_e, r)

    def de(self, r):
        """e'(-r) for r >= 0."""
        return self._eval(self.coef_de, r)


@lru_cache(maxsize=16)
def wright_table(beta: float) -> WrightTable:
    return WrightTable(beta)


def l1_weights(t: np.ndarray, alpha: float, n: int) -> np.ndarray:
    """L1 coefficients c_j with D^alpha f(t_n) ~= sum_j c_j (f_{j+1} - f_j), j < n.

    Works on arbitrary (nonuniform) increasing nodes ``t``.
    """
    tn = t[n]
    a = (tn - t[:n]) ** (1.0 - alpha)
    b = (tn - t[1 : n + 1]) ** (1.0 - alpha)
    return (a - b) / ((t[1 : n + 1] - t[:n]) * math.gamma(2.0 - alpha))


def caputo_l1(samples, alpha: float, y: float | None = None) -> float:
    """L1 approximation of the Caputo derivative at the last node of a uniform grid.

    ``samples`` are f(t_0), ..., f(t_n) on a uniform grid of [0, y]; ``y``
    defaults to 1.
    """
    f = np.asarray(samples, dtype=float)
    if f.size < 2:
        raise ValueError("caputo_l1 needs at least 2 samples")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha out of range (0, 1)")
    y = 1.0 if y is None else float(y)
    t = np.linspace(0.0, y, f.size)
    n = f.size - 1
    return float(np.dot(l1_weights(t, alpha, n), np.diff(f)))
