#!/usr/bin/env python3
"""Halve the nonlinearity length repeatedly and watch the full nonlinear term
vanish linearly on a smooth density: the constraint cal_E L^2 = hbar^2/4m at
work."""

import argparse

import numpy as np

from infonls import Density, Grid, NonlinearParams, PhysConstants, nonlinear_term_F


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eta", type=float, default=0.5)
    ap.add_argument("--halvings", type=int, default=4)
    args = ap.parse_args()

    consts = PhysConstants()
    sigma = 1.0
    n = 2000
    g = Grid(x_min=-5 * sigma, dx=10 * sigma / n, n_points=n, boundary="periodic")
    p = np.exp(-(g.x**2) / sigma**2)
    dens = Density(g, p / np.sum(p * g.quad_weights()))
    window = np.abs(g.x) <= 4 * sigma

    Ls = [0.64 / 2**k for k in range(args.halvings + 1)]
    maxes = []
    print(f"{'L':>10}  {'max|F| (|x|<4 sigma)':>22}")
    for L in Ls:
        params = NonlinearParams.for_length(L, args.eta, consts)
        f = nonlinear_term_F(dens, params, consts)
        m = np.abs(f.values[window]).max()
        maxes.append(m)
        print(f"{L:10.4f}  {m:22.6e}")
    slope = np.polyfit(np.log(Ls), np.log(maxes), 1)[0]
    print(f"log-log slope: {slope:.4f}  (linear limit: slope ~ 1)")


if __name__ == "__main__":
    main()
