"""Problem datum, grids and solution containers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

Func1 = Callable[[np.ndarray], np.ndarray]
Func2 = Callable[[np.ndarray, np.ndarray], np.ndarray]


class ValidationError(ValueError):
    """Inconsistent or out-of-range problem input."""


class NumericalFailure(RuntimeError):
    """Non-convergence or ill-conditioning during a solve."""


@dataclass(frozen=True)
class ProblemSpec:
    """Data of the mixed problem.

    ``phi1``/``phi2`` are the lateral data u(0, y), u(1, y) for y in [0, 1];
    ``psi`` is given on the characteristic, u(x, -x) = psi(x) for x in
    [0, 1/2]; ``bigQ(x, t)`` is the gluing kernel. ``q1`` optionally supplies
    the factor with dQ/dt(x, t) = -q1(x) q1(t). ``dq_dt`` and ``dpsi`` may be
    given in closed form; otherwise they are differenced numerically.
    All callables must accept numpy arrays.
    """

    alpha: float
    gamma1: float
    gamma2: float
    phi1: Func1
    phi2: Func1
    psi: Func1
    bigQ: Func2
    q1: Optional[Func1] = None
    dq_dt: Optional[Func2] = None
    dpsi: Optional[Func1] = None


def _scalar(f, *args) -> float:
    return float(np.asarray(f(*[np.asarray(a, dtype=float) for a in args]), dtype=float))


def validate_problem(spec: ProblemSpec, tol: float = 1e-10) -> ProblemSpec:
    if not 0.0 < spec.alpha < 1.0:
        raise ValidationError(f"alpha out of range: alpha={spec.alpha} must lie in (0, 1)")
    if spec.gamma1 == 0.0 and spec.gamma2 == 0.0:
        raise ValidationError("gamma1 and gamma2 vanish together (gamma1^2 + gamma2^2 = 0)")
    for name in ("gamma1", "gamma2"):
        if not np.isfinite(getattr(spec, name)):
            raise ValidationError(f"{name} is not finite")
    p0 = _scalar(spec.phi1, 0.0)
    s0 = _scalar(spec.psi, 0.0)
    if not (np.isfinite(p0) and np.isfinite(s0)):
        raise ValidationError("phi1(0) or psi(0) is not finite")
    if abs(p0 - s0) > tol:
        raise ValidationError(
            f"compatibility phi1(0)=psi(0) violated: phi1(0)={p0:.17g}, psi(0)={s0:.17g}"
        )
    return spec


@dataclass(frozen=True)
class GridSpec:
    nx: int
    ny_plus: int
    ny_minus: int

    def __post_init__(self):
        for name in ("nx", "ny_plus", "ny_minus"):
            v = getattr(self, name)
            if int(v) != v or v < 3:
                raise ValidationError(f"grid count {name}={v} must be an integer >= 3")

    def as_dict(self) -> dict:
        return {"nx": self.nx, "ny_plus": self.ny_plus, "ny_minus": self.ny_minus}


@dataclass(frozen=True)
class GridArrays:
    x: np.ndarray
    y_plus: np.ndarray
    y_minus: np.ndarray
    # points of the open triangle -y < x < y + 1 (y < 0), flattened
    minus_points: np.ndarray


def make_grid(g: GridSpec) -> GridArrays:
    x = np.linspace(0.0, 1.0, g.nx)
    yp = np.linspace(0.0, 1.0, g.ny_plus)
    ym = np.linspace(-0.5, 0.0, g.ny_minus)
    X, Y = np.meshgrid(x, ym[:-1])
    inside = (-Y < X) & (X < Y + 1.0)
    pts = np.column_stack([X[inside], Y[inside]])
    return GridArrays(x=x, y_plus=yp, y_minus=ym, minus_points=pts)


def in_minus_closure(x, y, tol: float = 1e-12):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return (y <= tol) & (y >= -0.5 - tol) & (x >= -y - tol) & (x <= y + 1.0 + tol)


@dataclass(frozen=True)
class TraceSet:
    """Interface traces sampled on ``x``; tau is the common value u(x, +-0)."""

    x: np.ndarray
    tau1: np.ndarray
    tau2: np.ndarray
    nu1: np.ndarray
    nu2: np.ndarray


@dataclass(frozen=True)
class SolutionField:
    """u on the upper rectangle (``plus``, rows = y levels) and lower triangle.

    ``minus`` has shape (ny_minus, nx); entries outside the closed triangle are
    NaN. The y = 0 row is shared by both arrays.
    """

    grid: GridSpec
    x: np.ndarray
    y_plus: np.ndarray
    y_minus: np.ndarray
    plus: np.ndarray
    minus: np.ndarray
    trace: TraceSet


@dataclass(frozen=True)
class ResidualEntry:
    name: str
    max: float
    l2: float
    grid: dict = field(default_factory=dict)


@dataclass
class ResidualReport:
    entries: list[ResidualEntry] = field(default_factory=list)

    def add(self, name: str, values, grid: GridSpec, weight: float | None = None) -> ResidualEntry:
        v = np.abs(np.asarray(values, dtype=float)).ravel()
        v = v[np.isfinite(v)]
        mx = float(v.max()) if v.size else 0.0
        if v.size == 0:
            l2 = 0.0
        elif weight is None:
            l2 = float(np.sqrt(np.mean(v**2)))
        else:
            l2 = float(np.sqrt(weight * np.sum(v**2)))
        entry = ResidualEntry(name=name, max=mx, l2=l2, grid=grid.as_dict())
        self.entries.append(entry)
        return entry

    def __getitem__(self, name: str) -> ResidualEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def to_dict(self) -> dict:
        return {e.name: {"max": e.max, "l2": e.l2, "grid": dict(e.grid)} for e in self.entries}
