"""INI-style run configuration.

Example::

    [problem]
    alpha  = 0.5
    gamma1 = 1
    gamma2 = 1
    phi1   = 0.1 + 0.2*sin(y)      # u(0, y)
    phi2   = 0.2 - 0.1*y           # u(1, y)
    psi    = 0.5*sin(pi*x) + 0.1   # u(x, -x), x in [0, 1/2]
    Q      = exp(-x)*(1 + exp(-t))
    Q1     = exp(-x)               # optional: dQ/dt = -Q1(x) Q1(t)

    [grid]
    nx = 41
    ny_plus = 41
    ny_minus = 21

    [numerics]
    n = 65

    [output]
    dir = out
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .expr import ExprError, Expression
from .model import GridSpec, ProblemSpec, ValidationError

PSI_DOMAIN = (0.0, 0.5)

# key -> argument names of the expression
_EXPR_KEYS = {"phi1": ("y",), "phi2": ("y",), "psi": ("x",), "Q": ("x", "t"), "Q1": ("x",)}
_NUM_KEYS = ("alpha", "gamma1", "gamma2")


class ConfigError(ValidationError):
    """Problem with a configuration file; the message names key and line."""


@dataclass(frozen=True)
class Numerics:
    n: int = 65
    n_max: int = 8
    tail_tol: float = 1e-13
    compat_tol: float = 1e-10


@dataclass(frozen=True)
class Output:
    dir: str = "out"
    field: str = "field.csv"
    report: str = "report.json"


@dataclass(frozen=True)
class RunConfig:
    problem: dict
    grid: GridSpec
    numerics: Numerics = field(default_factory=Numerics)
    output: Output = field(default_factory=Output)
    path: str = ""

    def spec(self) -> ProblemSpec:
        """The problem datum; psi is guarded to its domain [0, 1/2]."""
        p = self.problem
        psi = p["psi"]

        def guarded_psi(x):
            xa = np.asarray(x, dtype=float)
            lo, hi = PSI_DOMAIN
            if np.any(xa < lo - 1e-12) or np.any(xa > hi + 1e-12):
                raise ValidationError("psi evaluated outside its domain [0, 1/2]")
            return psi(xa)

        return ProblemSpec(
            alpha=p["alpha"],
            gamma1=p["gamma1"],
            gamma2=p["gamma2"],
            phi1=p["phi1"],
            phi2=p["phi2"],
            psi=guarded_psi,
            bigQ=p["Q"],
            q1=p.get("Q1"),
        )


def _line_index(text: str) -> dict:
    """(section, key) -> 1-based line number of its assignment."""
    out = {}
    section = None
    for no, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip()
            continue
        m = re.match(r"([^=:#\s][^=:]*?)\s*[=:]", s)
        if m and section is not None:
            out.setdefault((section, m.group(1).strip().lower()), no)
    return out


def loads(text: str, path: str = "<string>") -> RunConfig:
    lines = _line_index(text)
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), comment_prefixes=("#",),
                                   interpolation=None)
    try:
        cp.read_string(text, source=path)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: cannot parse config: {exc}") from None

    def where(section, key):
        no = lines.get((section, key.lower()))
        return f"{path}:{no}" if no else path

    def get(section, key, required=True):
        if cp.has_option(section, key):
            return cp.get(section, key).strip()
        if required:
            raise ConfigError(f"{path}: missing key {section}.{key}")
        return None

    def number(section, key, kind=float, default=None):
        raw = get(section, key, required=default is None)
        if raw is None:
            return default
        try:
            v = kind(raw)
        except ValueError:
            raise ConfigError(f"{where(section, key)}: {section}.{key} = {raw!r} is not a valid {kind.__name__}") from None
        if not math.isfinite(v):
            raise ConfigError(f"{where(section, key)}: {section}.{key} must be finite")
        return v

    if not cp.has_section("problem"):
        raise ConfigError(f"{path}: missing section [problem]")
    prob = {k: number("problem", k) for k in _NUM_KEYS}
    if not 0.0 < prob["alpha"] < 1.0:
        raise ConfigError(f"{where('problem', 'alpha')}: alpha out of range: alpha = {prob['alpha']} must lie in (0, 1)")
    if prob["gamma1"] == 0.0 and prob["gamma2"] == 0.0:
        raise ConfigError(f"{where('problem', 'gamma2')}: gamma1 and gamma2 vanish together")
    for key, args in _EXPR_KEYS.items():
        raw = get("problem", key, required=key != "Q1")
        if raw is None:
            continue
        try:
            prob[key] = Expression(raw, args)
        except ExprError as exc:
            raise ConfigError(f"{where('problem', key)}: problem.{key}: {exc}") from None

    sec = "grid"
    grid_kw = {}
    for key, default in (("nx", 41), ("ny_plus", 41), ("ny_minus", 21)):
        v = number(sec, key, int, default) if cp.has_section(sec) else default
        if v < 3:
            raise ConfigError(f"{where(sec, key)}: grid.{key} = {v} must be >= 3")
        grid_kw[key] = v

    sec = "numerics"
    d = Numerics()
    if cp.has_section(sec):
        num = Numerics(
            n=number(sec, "n", int, d.n),
            n_max=number(sec, "n_max", int, d.n_max),
            tail_tol=number(sec, "tail_tol", float, d.tail_tol),
            compat_tol=number(sec, "compat_tol", float, d.compat_tol),
        )
    else:
        num = d
    if num.n < 9 or num.n % 2 == 0:
        raise ConfigError(f"{where(sec, 'n')}: numerics.n = {num.n} must be odd and >= 9")
    if num.n_max < 1 or num.tail_tol <= 0 or num.compat_tol <= 0:
        raise ConfigError(f"{path}: numerics.n_max must be >= 1 and tolerances positive")

    o = Output()
    if cp.has_section("output"):
        o = Output(
            dir=get("output", "dir", False) or o.dir,
            field=get("output", "field", False) or o.field,
            report=get("output", "report", False) or o.report,
        )

    cfg = RunConfig(prob, GridSpec(**grid_kw), num, o, path)
    spec = cfg.spec()
    p0 = float(spec.phi1(np.array(0.0)))
    s0 = float(spec.psi(np.array(0.0)))
    if abs(p0 - s0) > num.compat_tol:
        raise ConfigError(
            f"{where('problem', 'psi')}: compatibility phi1(0)=psi(0) violated: "
            f"phi1(0)={p0:.17g}, psi(0)={s0:.17g}"
        )
    return cfg


def load_config(path) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
    return loads(text, str(p))
