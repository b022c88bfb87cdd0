"""Command line: ``tricomi solve|check|verify --config FILE``.

Exit codes: 0 success, 1 configuration or validation error, 2 numerical
failure, 3 uniqueness hypotheses not satisfied (``check`` only).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .config import RunConfig, load_config
from .io import write_field_csv, write_report
from .model import GridSpec, NumericalFailure, ValidationError
from .solver import solve
from .verification import check_uniqueness_hypotheses, compile_report

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_HYPOTHESIS = 0, 1, 2, 3
FLOOR = 1e-10


def _err(msg: str) -> None:
    print(f"tricomi: {msg}", file=sys.stderr)


def run_solve(cfg: RunConfig, out: str | None = None) -> tuple[Path, Path]:
    spec = cfg.spec()
    sol = solve(spec, cfg.grid, cfg.numerics.n, tol=cfg.numerics.compat_tol)
    report = compile_report(spec, sol.field)
    d = Path(out or cfg.output.dir)
    d.mkdir(parents=True, exist_ok=True)
    f = write_field_csv(sol.field, d / cfg.output.field)
    r = write_report(report, d / cfg.output.report)
    print(f"condition number of the trace system: {sol.cond:.3e}")
    for e in report.entries:
        print(f"{e.name:18s} max {e.max:.3e}  l2 {e.l2:.3e}")
    print(f"wrote {f} and {r}")
    return f, r


def run_check(cfg: RunConfig) -> int:
    verdict = check_uniqueness_hypotheses(cfg.spec(), cfg.numerics.n)
    for line in verdict.lines():
        print(line)
    return EXIT_OK if verdict.overall else EXIT_HYPOTHESIS


def refine_grid(g: GridSpec, level: int) -> GridSpec:
    k = 2**level
    return GridSpec((g.nx - 1) * k + 1, (g.ny_plus - 1) * k + 1, (g.ny_minus - 1) * k + 1)


def convergence_table(reports: list[dict]) -> dict:
    """Per entry: the max norms by level, successive ratios and orders."""
    out = {}
    for name in reports[0]:
        vals = [r[name]["max"] for r in reports]
        ratios, orders = [], []
        for a, b in zip(vals, vals[1:]):
            if a <= FLOOR and b <= FLOOR:
                ratios.append(None)
                orders.append(None)
            else:
                rt = a / b if b > 0 else math.inf
                ratios.append(rt)
                orders.append(math.log2(rt) if rt > 0 else -math.inf)
        out[name] = {"max": vals, "ratio": ratios, "order": orders}
    return out


def run_verify(cfg: RunConfig, levels: int, out: str | None = None) -> dict:
    spec = cfg.spec()
    reports = []
    for j in range(levels):
        g = refine_grid(cfg.grid, j)
        n = (cfg.numerics.n - 1) * 2**j + 1
        sol = solve(spec, g, n, tol=cfg.numerics.compat_tol)
        reports.append(compile_report(spec, sol.field).to_dict())
        print(f"level {j}: nx={g.nx} ny_plus={g.ny_plus} ny_minus={g.ny_minus} n={n}")
    table = convergence_table(reports)
    for name, row in table.items():
        ords = " ".join("floor" if o is None else f"{o:5.2f}" for o in row["order"])
        print(f"{name:18s} " + " ".join(f"{v:.3e}" for v in row["max"]) + f"  orders: {ords}")
    d = Path(out or cfg.output.dir)
    d.mkdir(parents=True, exist_ok=True)
    (d / "convergence.json").write_text(json.dumps(table, indent=2) + "\n", encoding="utf-8")
    return table


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tricomi", description="Tricomi problem with a Caputo derivative and integral gluing")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", help="solve and write the field CSV and residual report")
    s.add_argument("--config", required=True)
    s.add_argument("--out", help="output directory (overrides [output] dir)")
    c = sub.add_parser("check", help="check the uniqueness hypotheses")
    c.add_argument("--config", required=True)
    v = sub.add_parser("verify", help="solve on k refined grids and report convergence")
    v.add_argument("--config", required=True)
    v.add_argument("--refine", type=int, default=2, metavar="K")
    v.add_argument("--out")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "solve":
            run_solve(cfg, args.out)
        elif args.command == "check":
            return run_check(cfg)
        else:
            if args.refine < 2:
                raise ValidationError("--refine needs at least 2 levels")
            run_verify(cfg, args.refine, args.out)
    except ValidationError as exc:
        _err(str(exc))
        return EXIT_INVALID
    except NumericalFailure as exc:
        _err(f"numerical failure: {exc}")
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
