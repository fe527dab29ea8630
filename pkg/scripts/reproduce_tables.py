"""Reproduce the published MAE and AE tables for the five built-in examples.

    python3 scripts/reproduce_tables.py            # all examples
    python3 scripts/reproduce_tables.py --example 4 --grid paper11

Each example uses the boundary treatment its published values were computed
with. The ratio column is measured / published.
"""

import argparse
import time

from mcpbvp import builtin
from mcpbvp.bvp import GRID11, error_report, solve, uniform_grid
from mcpbvp.examples import EXAMPLE_IDS


def mae_table(k, grid):
    ex = builtin(k)
    pts = GRID11 if grid == "paper11" else uniform_grid(201)
    print(f"example {k} ({ex.description}), boundary {ex.published_boundary}, grid {grid}")
    print(f"{'N':>4} {'MAE':>12} {'published':>12} {'ratio':>7} {'iters':>5} {'seconds':>8}")
    for N, pub in ex.published_mae:
        t0 = time.perf_counter()
        sol = solve(ex.problem, N, boundary=ex.published_boundary)
        dt = time.perf_counter() - t0
        m = error_report(sol, ex.exact, pts).mae
        print(f"{N:>4} {m:>12.4e} {pub:>12.4e} {m / pub:>7.2f} {sol.report.iterations:>5} {dt:>8.4f}")
    print()


def ae_table(k):
    ex = builtin(k)
    if not ex.published_ae:
        return
    rep = error_report(solve(ex.problem, 10, boundary=ex.published_boundary), ex.exact, GRID11)
    print(f"example {k}: pointwise AE at N = 10")
    print(f"{'z':>5} {'AE':>12} {'published':>12}")
    for (z, pub), got in zip(ex.published_ae, rep.absolute_errors):
        print(f"{z:>5.1f} {got:>12.6e} {pub:>12.6e}")
    print()


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--example", type=int, choices=EXAMPLE_IDS)
    p.add_argument("--grid", choices=("paper11", "uniform201"), default="uniform201")
    args = p.parse_args()
    for k in [args.example] if args.example else EXAMPLE_IDS:
        mae_table(k, args.grid)
        ae_table(k)


if __name__ == "__main__":
    main()
