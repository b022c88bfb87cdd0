import numpy as np
import pytest

from tricomi.model import ProblemSpec


def example_q(x, t):
    return np.exp(-x) * (1.0 + np.exp(-t))


def const(c):
    return lambda s: c + 0.0 * np.asarray(s, dtype=float)


def smooth_problem(alpha=0.5, gamma1=1.0, gamma2=1.0):
    return ProblemSpec(
        alpha=alpha,
        gamma1=gamma1,
        gamma2=gamma2,
        phi1=lambda y: 0.1 + 0.2 * np.sin(y),
        phi2=lambda y: 0.2 - 0.1 * y,
        psi=lambda x: 0.5 * np.sin(np.pi * x) + 0.1,
        bigQ=example_q,
        q1=lambda s: np.exp(-s),
        dpsi=lambda x: 0.5 * np.pi * np.cos(np.pi * x),
    )


def constant_problem(c=0.3, gamma1=1.0, gamma2=1.0):
    return ProblemSpec(0.5, gamma1, gamma2, const(c), const(c), const(c), example_q)


@pytest.fixture
def smooth():
    return smooth_problem()


# one line per acceptance criterion, printed after the run
CRITERIA: dict[int, str] = {}


@pytest.fixture
def record():
    def _record(number: int, ok: bool, detail: str) -> bool:
        CRITERIA[number] = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[k])
