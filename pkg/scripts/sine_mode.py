"""Exact check with a single sine mode at alpha = 1/2.

With zero side data and tau = sin(pi x) the upper solution is
E_{1/2}(-pi^2 sqrt(y)) sin(pi x), and E_{1/2}(-z) = erfcx(z). The script
prints the error of the representation and of the L1 solver row by row.
"""

import argparse

import numpy as np
from scipy.special import erfcx

from tricomi.field import PlusRepresentation, fd_oracle_plus
from tricomi.model import ProblemSpec


def zero(s):
    return 0.0 * np.asarray(s, dtype=float)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=51, help="grid points per direction")
    ap.add_argument("--rows", type=int, default=6)
    args = ap.parse_args()
    g = np.linspace(0.0, 1.0, args.n)
    X, Y = np.meshgrid(g, g)
    exact = erfcx(np.pi**2 * np.sqrt(Y)) * np.sin(np.pi * X)
    xn = np.linspace(0.0, 1.0, 129)
    rep = PlusRepresentation(0.5, xn, np.sin(np.pi * xn), zero, zero)
    spec = ProblemSpec(0.5, 1.0, 1.0, zero, zero, zero, lambda x, t: np.exp(-x) * (1 + np.exp(-t)))
    U = rep(X, Y)
    V = fd_oracle_plus(spec, g, np.sin(np.pi * g), g, g)
    print("     y     representation   L1 solver")
    for k in range(min(args.rows, g.size)):
        print(f"{g[k]:8.4f}   {np.max(np.abs(U[k] - exact[k])):.3e}     {np.max(np.abs(V[k] - exact[k])):.3e}")
    print(f"all rows   {np.max(np.abs(U - exact)):.3e}     {np.max(np.abs(V - exact)):.3e}")


if __name__ == "__main__":
    main()
