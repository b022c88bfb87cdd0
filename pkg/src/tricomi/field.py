"""Solution field on both sides of the interface, plus finite-difference oracles.

Lower triangle: d'Alembert form of the Cauchy problem with data (tau, nu2).
Upper rectangle: the Green's-function representation

    u = int_0^y G_xi(x,y,0,eta) phi1(eta) deta - int_0^y G_xi(x,y,1,eta) phi2(eta) deta
        + int_0^1 Gbar(x, xi, y) tau(xi) dxi,

with the image-series Green's function built from the Wright-type function.
Each integral is evaluated after a change of variables that makes the
Wright argument the integration variable (its profile does not depend on
the point), so the kernel is tabulated once per order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import interpolate, linalg
from scipy.special import roots_jacobi

from .model import NumericalFailure, ProblemSpec, TraceSet, in_minus_closure
from . import quad
from .special import WrightParams, l1_weights, negligible_radius, wright_e, wright_table


def trace_spline(x, values, k: int = 5):
    return interpolate.make_interp_spline(np.asarray(x, float), np.asarray(values, float), k=k)


# --------------------------------------------------------------------------- lower triangle


class MinusSolution:
    """u(x, y) = (tau(x+y) + tau(x-y))/2 + (1/2) int_{x-y}^{x+y} nu2(t) dt for y <= 0."""

    def __init__(self, x, tau, nu2, k: int = 5):
        self.tau = trace_spline(x, tau, k)
        self.nu2_int = trace_spline(x, nu2, k).antiderivative()

    def __call__(self, x, y, check: bool = True):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if check and not np.all(in_minus_closure(x, y)):
            raise ValueError("point outside the closed lower triangle")
        a = np.clip(x + y, 0.0, 1.0)
        b = np.clip(x - y, 0.0, 1.0)
        u = 0.5 * (self.tau(a) + self.tau(b)) + 0.5 * (self.nu2_int(a) - self.nu2_int(b))
        return u if u.ndim else float(u)


def solve_minus(tau, nu2, point, x=None) -> float:
    tau = np.asarray(tau, dtype=float)
    x = np.linspace(0.0, 1.0, tau.size) if x is None else x
    return MinusSolution(x, tau, nu2)(*point)


def fd_oracle_minus(values, hx: float, hy: float) -> tuple[float, float, np.ndarray]:
    """Five-point residual u_xx - u_yy at points whose whole stencil is sampled.

    ``values`` has rows indexed by y and columns by x, NaN where unsampled.
    Returns (max norm, discrete L2 norm, residual array with NaN elsewhere).
    """
    u = np.asarray(values, dtype=float)
    r = np.full_like(u, np.nan)
    c = u[1:-1, 1:-1]
    uxx = (u[1:-1, 2:] - 2 * c + u[1:-1, :-2]) / hx**2
    uyy = (u[2:, 1:-1] - 2 * c + u[:-2, 1:-1]) / hy**2
    r[1:-1, 1:-1] = uxx - uyy
    ok = np.isfinite(r)
    if ok.sum() < 1:
        raise ValueError("too few interior points for the wave residual")
    v = r[ok]
    return float(np.max(np.abs(v))), float(np.sqrt(hx * hy * np.sum(v**2))), r


# --------------------------------------------------------------------------- Green's function


def _sign_images(n_max: int) -> np.ndarray:
    return np.arange(-n_max, n_max + 1)


def green_parabolic(x, y, xi, eta, p: WrightParams, n_max: int = 8, exact: bool = False, return_tail: bool = False):
    """First-boundary-problem Green's function on the strip 0 < x < 1.

    Image series truncated to n in [-n_max, n_max]. ``exact=True`` evaluates
    each Wright term by its series; otherwise the cached Chebyshev table is
    used (vectorised). The tail estimate is the size of the outermost pair.
    """
    t = np.asarray(y, dtype=float) - np.asarray(eta, dtype=float)
    if np.any(t <= 0.0):
        raise ValueError("green_parabolic requires eta < y")
    return green_lag(x, t, xi, p, n_max, exact, return_tail)


def green_lag(x, t, xi, p: WrightParams, n_max: int = 8, exact: bool = False, return_tail: bool = False):
    """The Green's function as a function of the lag t = y - eta > 0."""
    t = np.asarray(t, dtype=float)
    beta = p.beta
    x, t, xi = np.broadcast_arrays(np.asarray(x, float), t, np.asarray(xi, float))
    n = _sign_images(n_max).reshape((-1,) + (1,) * x.ndim)
    tb = t**beta
    r1 = np.abs(x - xi + 2 * n) / tb
    r2 = np.abs(x + xi + 2 * n) / tb
    if exact:
        rad = negligible_radius(beta)
        ef = np.vectorize(lambda r: 0.0 if r > rad else wright_e(-r, p))
        terms = ef(r1) - ef(r2)
    else:
        tab = wright_table(beta)
        terms = tab.e(r1) - tab.e(r2)
    pref = 0.5 * t ** (beta - 1.0)
    val = pref * terms.sum(axis=0)
    tail = pref * (np.abs(terms[0]) + np.abs(terms[-1]))
    val = val if val.ndim else float(val)
    if return_tail:
        return val, (tail if np.ndim(tail) else float(tail))
    return val


def green_xi_boundary(x, t, side: int, beta: float, n_max: int = 8):
    """dG/dxi at xi = 0 (side=0) or xi = 1 (side=1), as a function of t = y - eta."""
    tab = wright_table(beta)
    x, t = np.broadcast_arrays(np.asarray(x, float), np.asarray(t, float))
    n = _sign_images(n_max).reshape((-1,) + (1,) * x.ndim)
    d = x + 2 * n - side
    sgn = np.sign(d)
    sgn = np.where(d == 0, 1.0 if side == 0 else -1.0, sgn)
    return (sgn * tab.de(np.abs(d) / t**beta)).sum(axis=0) / t


def gbar(x: float, xi: float, y: float, alpha: float, n_max: int = 8, levels: int = 36, order: int = 10) -> float:
    """(1/Gamma(1-alpha)) int_0^y eta^(-alpha) G(x, y, xi, eta) deta.

    The lower half is graded geometrically toward eta = 0 (eta^(-alpha)), the
    upper half toward eta = y in the lag variable t = y - eta, so the
    (y - eta)^(beta - 1) scale is resolved without cancellation.
    """
    if not 0.0 < y <= 1.0:
        raise ValueError("gbar needs 0 < y <= 1")
    p = WrightParams.from_alpha(alpha)
    eta, we = quad.graded_rule(0.0, 0.5 * y, n=order, ratio=0.25, levels=levels, side="left")
    lo = np.sum(we * eta ** (-alpha) * green_parabolic(x, y, xi, eta, p, n_max=n_max))
    t, wt = quad.graded_rule(0.0, 0.5 * y, n=order, ratio=0.25, levels=levels, side="left")
    hi = np.sum(wt * (y - t) ** (-alpha) * green_lag(x, t, xi, p, n_max=n_max))
    val = (lo + hi) / math.gamma(1.0 - alpha)
    if not np.isfinite(val):
        raise NumericalFailure("gbar quadrature produced a non-finite value")
    return float(val)


# --------------------------------------------------------------------------- upper rectangle


@dataclass
class PlusSettings:
    s_nodes: int = 32          # Gauss-Jacobi nodes for the memory variable
    z_panel: float = 0.125     # panel width in the scaled space variable
    z_order: int = 8
    lam_panel: float = 2.0     # panel width in log-time for the boundary terms
    lam_order: int = 10
    chunk: int = 64
    ext_points: int = 1 << 16  # samples per unit length of the tabulated extension


def _cubic_weights(f):
    """Lagrange weights of nodes -1, 0, 1, 2 at fractional offset f in [0, 1)."""
    return (
        -f * (f - 1.0) * (f - 2.0) / 6.0,
        (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
        -(f + 1.0) * f * (f - 2.0) / 2.0,
        (f + 1.0) * f * (f - 1.0) / 6.0,
    )


class PlusRepresentation:
    """Evaluates the Green's-function representation on the upper rectangle.

    With ``subtract_linear`` the exact solution l(x) = tau(0)(1-x) + tau(1)x
    is split off first and the representation is applied to the remainder,
    whose data vanish at the corners (0, 0) and (1, 0).
    """

    def __init__(self, alpha: float, x_nodes, tau, phi1, phi2, subtract_linear: bool = True,
                 settings: PlusSettings | None = None):
        self.alpha = alpha
        self.beta = alpha / 2.0
        self.settings = settings or PlusSettings()
        self.table = wright_table(self.beta)
        tau = np.asarray(tau, dtype=float)
        x_nodes = np.asarray(x_nodes, dtype=float)
        if subtract_linear:
            self.l0, self.l1 = float(tau[0]), float(tau[-1])
        else:
            self.l0 = self.l1 = 0.0
        self.tau_v = trace_spline(x_nodes, tau - self.linear(x_nodes))
        self.phi1 = phi1
        self.phi2 = phi2
        s = self.settings
        u, w = roots_jacobi(s.s_nodes, -alpha, 0.0)
        sn = 0.5 * (u + 1.0)
        hfac = ((1.0 - sn) / (1.0 - sn ** (1.0 / alpha))) ** alpha
        self._s = sn
        self._sw = w * 2.0 ** (alpha - 1.0) * hfac / (alpha * math.gamma(1.0 - alpha))
        R = self.table.radius
        npan = int(math.ceil(R / s.z_panel))
        self._z, self._zw = quad.composite_gl(np.linspace(0.0, R, npan + 1), s.z_order)
        self._kz = 0.5 * self.table.e(self._z)

    def linear(self, x):
        return self.l0 * (1.0 - np.asarray(x, float)) + self.l1 * np.asarray(x, float)

    def tau_ext(self, s):
        """Odd, 2-periodic extension of the remainder trace."""
        r = np.mod(s, 2.0)
        upper = r > 1.0
        rr = np.where(upper, 2.0 - r, r)
        v = self.tau_v(rr)
        return np.where(upper, -v, v)

    def _ext_spectrum(self):
        if not hasattr(self, "_fext"):
            m = self.settings.ext_points
            g = np.arange(2 * m) / m
            self._fext = np.fft.rfft(self.tau_ext(g))
        return self._fext

    def _trace_row(self, yv: float) -> np.ndarray:
        """Trace term for one y level on the table grid of [0, 2).

        The double integral is a correlation of the tabulated extension with
        a kernel depending on y only. Cubic interpolation of the table is
        turned into a deposit of the quadrature weights on the four
        neighbouring table nodes, and the correlation is done by FFT.
        """
        m = self.settings.ext_points
        N = 2 * m
        off = (yv**self.beta * np.sqrt(self._s))[:, None] * self._z[None, :]
        w = (self._sw[:, None] * (self._kz * self._zw)[None, :]).ravel()
        off = off.ravel() * m
        c = np.zeros(N)
        for p in (off, -off):
            j = np.floor(p)
            L = _cubic_weights(p - j)
            j = j.astype(np.int64)
            for k in range(4):
                c += np.bincount((j + k - 1) % N, w * L[k], minlength=N)
        return np.fft.irfft(self._ext_spectrum() * np.conj(np.fft.rfft(c)), n=N)

    def trace_term(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        m = self.settings.ext_points
        N = 2 * m
        out = np.empty(x.shape)
        levels, inv = np.unique(y, return_inverse=True)
        for k, yv in enumerate(levels):
            sel = inv == k
            row = self._trace_row(float(yv))
            p = np.mod(x[sel], 2.0) * m
            j = np.floor(p)
            L = _cubic_weights(p - j)
            j = j.astype(np.int64)
            out[sel] = sum(L[q] * row[(j + q - 1) % N] for q in range(4))
        return out

    def _boundary(self, x, y, side: int):
        data = self.phi1 if side == 0 else self.phi2
        shift = self.l0 if side == 0 else self.l1
        R = self.table.radius
        s = self.settings
        out = np.zeros(x.shape)
        nmax = int(math.ceil(R * float(np.max(y, initial=0.0)) ** self.beta / 2.0)) + 2
        n = np.arange(-nmax, nmax + 1)
        d = x[:, None] + 2.0 * n[None, :] - side                               # (P, N)
        # delta-like limit when the point sits on the boundary itself
        on = d == 0.0
        if np.any(on):
            rows = np.nonzero(on.any(axis=1))[0]
            sg = 1.0 if side == 0 else -1.0
            out[rows] += sg * (np.asarray(data(y[rows]), float) - shift)
        ad = np.abs(d)
        lam_hi = np.log(y)[:, None] * np.ones_like(ad)
        with np.errstate(divide="ignore"):
            lam_lo = np.log(ad / R) / self.beta
        live = (~on) & (lam_lo < lam_hi)
        if not np.any(live):
            return out
        pi, ni = np.nonzero(live)
        lo, hi = lam_lo[pi, ni], lam_hi[pi, ni]
        sgn = np.sign(d[pi, ni])
        adl = ad[pi, ni]
        npan = max(1, int(math.ceil(float(np.max(hi - lo)) / s.lam_panel)))
        u, w = quad.composite_gl(np.linspace(0.0, 1.0, npan + 1), s.lam_order)
        for a in range(0, pi.size, 4 * s.chunk):
            b = a + 4 * s.chunk
            L = lo[a:b, None] + (hi - lo)[a:b, None] * u[None, :]
            W = (hi - lo)[a:b, None] * w[None, :]
            t = np.exp(L)
            f = self.table.de(adl[a:b, None] * np.exp(-self.beta * L))
            f = f * (np.asarray(data(y[pi[a:b], None] - t), float) - shift)
            np.add.at(out, pi[a:b], sgn[a:b] * np.sum(W * f, axis=1))
        return out

    def boundary_terms(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self._boundary(x, y, 0) - self._boundary(x, y, 1)

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        shape = x.shape
        xf, yf = x.ravel().copy(), y.ravel().copy()
        out = self.linear(xf) + self.tau_v(xf)
        pos = yf > 0.0
        if np.any(pos):
            xp, yp = xf[pos], yf[pos]
            out[pos] = self.linear(xp) + self.trace_term(xp, yp) + self.boundary_terms(xp, yp)
        if not np.all(np.isfinite(out)):
            raise NumericalFailure("non-finite value in the upper-field representation")
        out = out.reshape(shape)
        return out if out.ndim else float(out)


def solve_plus(spec: ProblemSpec, trace: TraceSet, point, subtract_linear: bool = True) -> float:
    x, y = point
    if not (0.0 <= x <= 1.0 and 0.0 < y <= 1.0):
        raise ValueError("point must lie in the upper rectangle with y > 0")
    rep = PlusRepresentation(spec.alpha, trace.x, trace.tau1, spec.phi1, spec.phi2, subtract_linear)
    return float(rep(np.array([x]), np.array([y]))[0])


# --------------------------------------------------------------------------- upper oracle


def oracle_mesh(y_grid, alpha: float, points: int | None = None) -> np.ndarray:
    """Graded mesh t_j = (j/N)^r, r = (2-alpha)/alpha (capped at 6), merged with the grid rows.

    The grading matches the y^alpha behaviour of the solution at y = 0;
    grid rows are kept as mesh points so no interpolation in y is needed.
    """
    y_grid = np.asarray(y_grid, dtype=float)
    if points is None:
        points = max(400, 16 * (y_grid.size - 1))
    r = min((2.0 - alpha) / alpha, 6.0)
    top = float(y_grid[-1])
    graded = top * (np.arange(points + 1) / points) ** r
    t = np.union1d(graded, y_grid)
    # drop graded points that nearly duplicate a grid row
    keep = np.concatenate([[True], np.diff(t) > 1e-9 * top])
    t = t[keep]
    t[np.searchsorted(t, y_grid - 1e-9 * top)] = y_grid
    return t


def fd_oracle_plus(spec: ProblemSpec, tau_x, tau1, x_grid, y_grid, points: int | None = None,
                   x_refine: int = 1) -> np.ndarray:
    """Implicit L1-in-y / central-in-x solution of u_xx = D^alpha u on [0,1]^2.

    Returns samples on ``y_grid`` x ``x_grid`` (rows = y); see
    :func:`oracle_mesh` for the y mesh.
    """
    x_grid = np.asarray(x_grid, float)
    y_grid = np.asarray(y_grid, float)
    nxf = (x_grid.size - 1) * x_refine + 1
    xf = np.linspace(0.0, 1.0, nxf)
    hx = xf[1] - xf[0]
    t = oracle_mesh(y_grid, spec.alpha, points)
    U = np.empty((t.size, nxf))
    U[0] = trace_spline(tau_x, tau1)(xf)
    U[0, 0], U[0, -1] = tau1[0], tau1[-1]
    m = nxf - 2
    for n in range(1, t.size):
        c = l1_weights(t, spec.alpha, n)
        hist = np.zeros(nxf)
        if n > 1:
            hist = c[:-1] @ np.diff(U[:n], axis=0)
        cn = c[-1]
        ab = np.zeros((3, m))
        ab[0, 1:] = -1.0 / hx**2
        ab[1, :] = cn + 2.0 / hx**2
        ab[2, :-1] = -1.0 / hx**2
        left = float(np.asarray(spec.phi1(np.array(t[n]))))
        right = float(np.asarray(spec.phi2(np.array(t[n]))))
        rhs = cn * U[n - 1, 1:-1] - hist[1:-1]
        rhs[0] += left / hx**2
        rhs[-1] += right / hx**2
        U[n, 0], U[n, -1] = left, right
        U[n, 1:-1] = linalg.solve_banded((1, 1), ab, rhs)
    if not np.all(np.isfinite(U)):
        raise NumericalFailure("L1 oracle produced non-finite values")
    rows = np.searchsorted(t, y_grid - 1e-12)
    return U[rows][:, ::x_refine]
