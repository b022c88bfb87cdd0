import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tricomi import quad


def test_gl_signed_interval():
    t, w = quad.gl_nodes(1.0, 0.0, 10)
    assert np.sum(w * t**3) == pytest.approx(-0.25, abs=1e-15)


@given(st.integers(min_value=1, max_value=40))
def test_split_weights_integrate_cubics(i):
    n = 41
    h = 1.0 / (n - 1)
    x = np.linspace(0.0, 1.0, n)
    if i > n - 2:
        i = n - 2
    wl, wr = quad.split_row_weights(n, i, h)
    f = x**3 - 2 * x**2 + x
    F = lambda s: s**4 / 4 - 2 * s**3 / 3 + s**2 / 2  # noqa: E731
    assert wl @ f == pytest.approx(F(x[i]), abs=1e-14)
    assert wr @ f == pytest.approx(F(1.0) - F(x[i]), abs=1e-14)


def test_panel_weights_odd_intervals():
    h = 0.1
    w = quad.panel_weights(5, h)
    x = np.arange(6) * h
    assert w @ x**3 == pytest.approx(x[-1] ** 4 / 4, abs=1e-15)


def test_diff_uniform_order():
    errs = []
    for n in (21, 41):
        x = np.linspace(0.0, 1.0, n)
        d2 = quad.diff_uniform(np.sin(2 * x), x[1], 2)
        errs.append(np.max(np.abs(d2 + 4 * np.sin(2 * x))))
    assert errs[0] / errs[1] > 10


def test_derivative_stays_in_range():
    seen = []

    def f(s):
        seen.append(np.asarray(s).copy())
        return np.exp(s)

    t = np.linspace(0.0, 0.5, 9)
    d = quad.derivative(f, t, 0.0, 0.5)
    assert np.max(np.abs(d - np.exp(t))) < 1e-10
    allv = np.concatenate([s.ravel() for s in seen])
    assert allv.min() >= 0.0 and allv.max() <= 0.5
