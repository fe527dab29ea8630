"""Compare the two boundary-row treatments on every example.

``replace`` overwrites collocation rows with the boundary conditions and
solves a square system. ``append`` keeps all N + 1 collocation rows, adds the
conditions below them, and solves in the least-squares sense. The published
figures for example 1 follow the second; the others follow the first.
"""

import numpy as np

from mcpbvp import builtin
from mcpbvp.bvp import error_report, solve
from mcpbvp.examples import EXAMPLE_IDS


def bc_violation(ex, sol):
    worst = 0.0
    for c in ex.problem.conditions:
        z = -1.0 if c.endpoint == "left" else 1.0
        worst = max(worst, abs(sol(z, c.derivative_order) - c.value))
    return worst


def main():
    print(f"{'ex':>2} {'N':>3} {'published':>11} {'replace':>11} {'append':>11} {'BC err (append)':>16}")
    for k in EXAMPLE_IDS:
        ex = builtin(k)
        for N, pub in ex.published_mae:
            rep = solve(ex.problem, N, boundary="replace")
            app = solve(ex.problem, N, boundary="append")
            m_rep = error_report(rep, ex.exact).mae
            m_app = error_report(app, ex.exact).mae
            print(f"{k:>2} {N:>3} {pub:>11.3e} {m_rep:>11.3e} {m_app:>11.3e} {bc_violation(ex, app):>16.3e}")
        print()
    coeffs = solve(builtin(1).problem, 20).coefficients
    print("example 1, N = 20 coefficient magnitudes:")
    print(np.array2string(np.abs(coeffs), precision=2, max_line_width=100))


if __name__ == "__main__":
    main()
