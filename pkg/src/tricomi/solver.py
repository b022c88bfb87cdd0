"""End-to-end pipeline: traces, then the field on both sides of the interface."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import MinusSolution, PlusRepresentation, PlusSettings
from .model import GridSpec, ProblemSpec, SolutionField, TraceSet, in_minus_closure, make_grid, validate_problem
from .traces import FredholmSystem, assemble_fredholm, recover_nu, solve_tau1


@dataclass(frozen=True)
class Solution:
    field: SolutionField
    system: FredholmSystem
    cond: float

    @property
    def trace(self) -> TraceSet:
        return self.field.trace


def solve_traces(spec: ProblemSpec, n: int = 65) -> tuple[TraceSet, FredholmSystem, float]:
    sys = assemble_fredholm(spec, n)
    tau, cond = solve_tau1(sys)
    nu1, nu2 = recover_nu(tau, spec, sys.nodes)
    return TraceSet(sys.nodes, tau, tau.copy(), nu1, nu2), sys, cond


def sample_field(spec: ProblemSpec, trace: TraceSet, grid: GridSpec,
                 settings: PlusSettings | None = None) -> SolutionField:
    g = make_grid(grid)
    rep = PlusRepresentation(spec.alpha, trace.x, trace.tau1, spec.phi1, spec.phi2, settings=settings)
    X, Y = np.meshgrid(g.x, g.y_plus)
    plus = rep(X, Y)
    minus = np.full((g.y_minus.size, g.x.size), np.nan)
    Xm, Ym = np.meshgrid(g.x, g.y_minus)
    inside = in_minus_closure(Xm, Ym)
    low = MinusSolution(trace.x, trace.tau1, trace.nu2)
    minus[inside] = low(Xm[inside], Ym[inside], check=False)
    # the shared row y = 0 takes the trace itself on both sides
    minus[-1] = plus[0]
    return SolutionField(grid, g.x, g.y_plus, g.y_minus, plus, minus, trace)


def solve(spec: ProblemSpec, grid: GridSpec, n: int = 65, settings: PlusSettings | None = None,
          tol: float = 1e-10) -> Solution:
    validate_problem(spec, tol)
    trace, sys, cond = solve_traces(spec, n)
    return Solution(sample_field(spec, trace, grid, settings), sys, cond)
