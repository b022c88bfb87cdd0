"""Field CSV and report JSON writers (deterministic byte output)."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .model import ResidualReport, SolutionField


def field_rows(field: SolutionField) -> np.ndarray:
    """(x, y, u) rows of both regions, sorted by y then x; y = 0 appears once."""
    Xp, Yp = np.meshgrid(field.x, field.y_plus)
    Xm, Ym = np.meshgrid(field.x, field.y_minus[:-1])
    xs = np.concatenate([Xm.ravel(), Xp.ravel()])
    ys = np.concatenate([Ym.ravel(), Yp.ravel()])
    us = np.concatenate([field.minus[:-1].ravel(), field.plus.ravel()])
    keep = np.isfinite(us)
    rows = np.column_stack([xs[keep], ys[keep], us[keep]])
    order = np.lexsort((rows[:, 0], rows[:, 1]))
    return rows[order]


def write_field_csv(field: SolutionField, path) -> Path:
    path = Path(path)
    lines = ["x,y,u"]
    lines += [f"{x:.17g},{y:.17g},{u:.17g}" for x, y, u in field_rows(field)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_report(report: ResidualReport, path, extra: dict | None = None) -> Path:
    path = Path(path)
    doc = report.to_dict()
    if extra:
        doc = {**doc, **extra}
    path.write_text(json.dumps(doc, indent=2, sort_keys=False) + "\n", encoding="utf-8")
    return path
