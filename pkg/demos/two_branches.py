"""Trace the two solution branches and locate the fold.

With both a concave and a convex term on the right-hand side the solution
set over lambda is not a single curve: below a critical value lambda* the
shooting scan finds two positive solutions (a small one that vanishes as
lambda -> 0 and a large one that blows up), and above lambda* it finds
none.  This script sweeps a coarse lambda grid, prints the branch diagram,
then sharpens the fold location by bisection on the solution count.
"""

import numpy as np

from phibvp import (FConstants, G1Constants, G2Constants, Grid, GridFunction,
                    ProblemSpec, compute_lambda1, lambda_star_bisect,
                    make_power, sweep)


def build_problem(n_nodes=129):
    grid = Grid.uniform(0.0, 1.0, n_nodes)
    ones = GridFunction(grid, np.ones(n_nodes))
    return ProblemSpec(
        grid=grid, phi=make_power(1.0), m=ones, n=ones, lam=1.0, mu=1.0,
        f=lambda t: np.sqrt(t), g=lambda t: t ** 2,
        f_constants=FConstants(1.0, 1.0, 0.5),
        g1_constants=G1Constants(1.0, 1.0, 2.0),
        g2_constants=G2Constants(1.0, 1.0, 2.0),
    )


def main():
    spec = build_problem()

    lambda1, rho = compute_lambda1(spec, R=4.0)
    print("small-branch comparison: lambda1 = %.4f, ceiling rho = %.4f"
          % (lambda1, rho))
    print("(for swept lambda < lambda1 the large solution must exceed rho)")
    print()

    lam_grid = np.geomspace(0.05, 20.0, 9)
    diagram = sweep(spec, lam_grid, s_max=100.0, count=60)

    print("%10s %8s %14s %14s %9s" % ("lambda", "branch", "sup norm",
                                      "slope at 0", "in cone"))
    for point in diagram.points:
        sols = sorted(point.solutions, key=lambda s: s.sup_norm)
        if not sols:
            print("%10.4f %8s" % (point.lam, "none"))
        for k, sol in enumerate(sols):
            print("%10.4f %8s %14.6e %14.6e %9s"
                  % (point.lam, ("lower", "upper", "extra")[min(k, 2)],
                     sol.sup_norm, sol.initial_slope, sol.in_cone))

    print()
    print("fold estimate from the coarse sweep: lambda* ~ %.3f"
          % diagram.lambda_star_estimate)

    refined = lambda_star_bisect(spec, lo=5.0, hi=20.0, tol=1e-3,
                                 s_max=100.0, count=60)
    print("bisection refinement:               lambda* = %.4f" % refined)


if __name__ == "__main__":
    main()
