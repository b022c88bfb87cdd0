"""Residual report on successively refined grids for a config file.

    python scripts/refinement_study.py configs/smooth.ini --levels 3

Each level halves the grid spacing and doubles the Nystrom interval count.
"""

import argparse

from tricomi.cli import run_verify
from tricomi.config import load_config


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--levels", type=int, default=3)
    ap.add_argument("--out", default="out/refinement")
    args = ap.parse_args()
    run_verify(load_config(args.config), args.levels, args.out)


if __name__ == "__main__":
    main()
