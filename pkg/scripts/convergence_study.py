#!/usr/bin/env python3
"""Print the Richardson error-estimate decay per mesh doubling for a few
model problems (a second-order scheme should shrink estimates by ~4x).

Usage:
    python3 scripts/convergence_study.py [--levels 5]
"""

import argparse

from spectral_gap.eigensolver import Backend, SolverConfig, refine, solve_neumann_first
from spectral_gap.model import (
    KahlerParams,
    RiemannParams,
    kroger_problem,
    li_wang_problem,
)

CASES = [
    ("flat D=1", li_wang_problem(KahlerParams(m=1, kappa1=0.0, kappa2=0.0), 1.0)),
    ("kahler m=2 k=0.5 D=1.2",
     li_wang_problem(KahlerParams(m=2, kappa1=0.5, kappa2=0.5), 1.2)),
    ("riemann n=3 K=-1 D=2", kroger_problem(RiemannParams(n=3, K=-1.0), 2.0)),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=int, default=4)
    args = ap.parse_args()

    cfg = SolverConfig(mesh_points=65, rel_tol=0.9, max_refinements=0,
                       backend=Backend.FINITE_DIFFERENCE)
    for name, prob in CASES:
        sol = solve_neumann_first(prob, cfg)
        print(f"{name}: mu ~ {sol.mu:.12g}")
        prev = sol.est_error
        print(f"  cells {sol.nodes.size - 1:7d}  est {prev:.3e}")
        for _ in range(args.levels):
            sol = refine(sol, prob, cfg)
            ratio = prev / sol.est_error
            print(f"  cells {sol.nodes.size - 1:7d}  est {sol.est_error:.3e}"
                  f"  ratio {ratio:.2f}")
            prev = sol.est_error


if __name__ == "__main__":
    main()
