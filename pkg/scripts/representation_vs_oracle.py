"""Upper field from the series representation against the L1 finite-difference solver.

Both use the same computed trace tau1; the difference is printed per grid.
"""

import argparse
import time

import numpy as np

from tricomi.config import load_config
from tricomi.field import fd_oracle_plus
from tricomi.model import GridSpec
from tricomi.solver import solve


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config", nargs="?", default="configs/smooth.ini")
    ap.add_argument("--sizes", type=int, nargs="+", default=[26, 51, 101])
    ap.add_argument("--n", type=int, default=129, help="Nystrom nodes for the trace")
    args = ap.parse_args()
    spec = load_config(args.config).spec()
    prev = None
    for m in args.sizes:
        n = args.n
        t0 = time.perf_counter()
        sol = solve(spec, GridSpec(m, m, 3), n)
        t1 = time.perf_counter()
        V = fd_oracle_plus(spec, sol.trace.x, sol.trace.tau1, sol.field.x, sol.field.y_plus)
        t2 = time.perf_counter()
        d = np.abs(sol.field.plus - V)
        k, j = np.unravel_index(np.argmax(d), d.shape)
        note = "" if prev is None else f"  ratio {prev / d.max():.2f}"
        print(f"{m:4d}x{m:<4d} n={n:4d}  max diff {d.max():.3e} at (x={sol.field.x[j]:.3f}, "
              f"y={sol.field.y_plus[k]:.3f})  representation {t1 - t0:5.1f} s, oracle {t2 - t1:4.1f} s{note}")
        prev = d.max()


if __name__ == "__main__":
    main()
