"""Tricomi problem for u_xx - D^alpha_y u = 0 (y > 0), u_xx - u_yy = 0 (y < 0)
with an integral gluing condition on the interface y = 0."""

from .model import (
    GridSpec,
    NumericalFailure,
    ProblemSpec,
    ResidualReport,
    SolutionField,
    TraceSet,
    ValidationError,
    make_grid,
    validate_problem,
)
from .solver import Solution, solve

__all__ = [
    "GridSpec",
    "NumericalFailure",
    "ProblemSpec",
    "ResidualReport",
    "Solution",
    "SolutionField",
    "TraceSet",
    "ValidationError",
    "make_grid",
    "solve",
    "validate_problem",
]
