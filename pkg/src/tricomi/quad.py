"""Quadrature rules and finite-difference helpers shared by the solvers."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gl_nodes(a, b, n: int = 20):
    """Gauss-Legendre nodes/weights on [a, b]; a, b may be arrays (broadcast).

    Returns arrays with a trailing axis of length ``n``. Reversed intervals
    give negative weights, i.e. signed integrals.
    """
    x, w = gauss_legendre(n)
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def composite_gl(breaks: np.ndarray, n: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on consecutive panels given by ``breaks``."""
    breaks = np.asarray(breaks, dtype=float)
    t, w = gl_nodes(breaks[:-1], breaks[1:], n)
    return t.ravel(), w.ravel()


def geometric_breaks(a: float, b: float, ratio: float = 0.25, levels: int = 36, side: str = "both") -> np.ndarray:
    """Panel breakpoints on [a, b] refined geometrically toward the end(s)."""
    if side == "both":
        mid = 0.5 * (a + b)
        left = geometric_breaks(a, mid, ratio, levels, "left")
        right = geometric_breaks(mid, b, ratio, levels, "right")
        return np.concatenate([left, right[1:]])
    L = b - a
    g = L * ratio ** np.arange(levels, 0, -1)
    if side == "left":
        return np.concatenate([[a], a + g, [b]])
    return np.concatenate([[a], b - g[::-1], [b]])


def graded_rule(a: float, b: float, n: int = 10, ratio: float = 0.25, levels: int = 36, side: str = "both"):
    return composite_gl(geometric_breaks(a, b, ratio, levels, side), n)


def simpson_weights(n: int, h: float) -> np.ndarray:
    """Composite Simpson weights on ``n`` (odd) equispaced nodes."""
    if n < 3 or n % 2 == 0:
        raise ValueError("composite Simpson needs an odd node count >= 3")
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * h / 3.0


def panel_weights(m: int, h: float) -> np.ndarray:
    """Weights for m equal intervals (m + 1 nodes), fifth-order local accuracy.

    Simpson for even m, Simpson plus a closing 3/8 panel for odd m >= 3.
    m = 1 is not handled here (see :func:`split_row_weights`).
    """
    w = np.zeros(m + 1)
    if m == 0:
        return w
    if m % 2 == 0:
        w[:] = simpson_weights(m + 1, h)
        return w
    if m < 3:
        raise ValueError("panel_weights needs m == 0, m even, or m >= 3")
    k = m - 3
    if k:
        w[: k + 1] += simpson_weights(k + 1, h)
    w[k:] += 3.0 * h / 8.0 * np.array([1.0, 3.0, 3.0, 1.0])
    return w


_AM4 = np.array([9.0, 19.0, -5.0, 1.0]) / 24.0  # cubic through 4 nodes, integrated over the first interval


def split_row_weights(n: int, i: int, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Weights integrating over [x_0, x_i] and [x_i, x_{n-1}] separately.

    Each side uses only values of a function smooth on that side; a single
    interval borrows three extra nodes of the smooth continuation.
    """
    wl = np.zeros(n)
    wr = np.zeros(n)
    if i == 1:
        wl[:4] = h * _AM4
    elif i > 1:
        wl[: i + 1] = panel_weights(i, h)
    m = n - 1 - i
    if m == 1:
        wr[n - 4 :] = h * _AM4[::-1]
    elif m > 1:
        wr[i:] = panel_weights(m, h)
    return wl, wr


def diff_uniform(f: np.ndarray, h: float, order: int = 1) -> np.ndarray:
    """Fourth-order finite differences on equispaced samples, one-sided at ends."""
    f = np.asarray(f, dtype=float)
    n = f.size
    if n < 6:
        raise ValueError("need at least 6 samples for fourth-order differences")
    d = np.empty(n)
    if order == 1:
        d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
        c0 = np.array([-25, 48, -36, 16, -3]) / (12 * h)
        c1 = np.array([-3, -10, 18, -6, 1]) / (12 * h)
        d[0] = c0 @ f[:5]
        d[1] = c1 @ f[:5]
        d[-1] = -(c0 @ f[::-1][:5])
        d[-2] = -(c1 @ f[::-1][:5])
    elif order == 2:
        d[2:-2] = (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (12 * h * h)
        c0 = np.array([45, -154, 214, -156, 61, -10]) / (12 * h * h)
        c1 = np.array([10, -15, -4, 14, -6, 1]) / (12 * h * h)
        d[0] = c0 @ f[:6]
        d[1] = c1 @ f[:6]
        d[-1] = c0 @ f[::-1][:6]
        d[-2] = c1 @ f[::-1][:6]
    else:
        raise ValueError("order must be 1 or 2")
    return d


_C6 = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
_F6 = np.array([-49.0 / 20, 6.0, -15.0 / 2, 20.0 / 3, -15.0 / 4, 6.0 / 5, -1.0 / 6])


def derivative(f, t, lo: float = 0.0, hi: float = 1.0, h: float = 1e-4, x=None):
    """Sixth-order difference of a vectorised callable, one-sided near [lo, hi] ends.

    ``f`` is only ever evaluated inside [lo, hi]. With ``x`` given, ``f`` is
    called as f(x, t) with x broadcast against t (a partial derivative in t).
    """
    t = np.asarray(t, dtype=float)
    if x is not None:
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), t)
        xf = x.ravel()
        g = f
        f = lambda tt, sel=None: g(xf[sel], tt)  # noqa: E731
    else:
        g = f
        f = lambda tt, sel=None: g(tt)  # noqa: E731
    flat = t.ravel()
    out = np.empty_like(flat)
    fwd = flat - 3 * h < lo
    bwd = (flat + 3 * h > hi) & ~fwd
    mid = ~(fwd | bwd)
    if np.any(mid):
        tm = flat[mid]
        out[mid] = sum(c * f(tm + k * h, mid) for c, k in zip(_C6, range(-3, 4))) / h
    if np.any(fwd):
        tf = flat[fwd]
        out[fwd] = sum(c * f(tf + k * h, fwd) for k, c in enumerate(_F6)) / h
    if np.any(bwd):
        tb = flat[bwd]
        out[bwd] = -sum(c * f(tb - k * h, bwd) for k, c in enumerate(_F6)) / h
    return out.reshape(t.shape)
