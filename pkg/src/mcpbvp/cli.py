"""Command-line front end.

::

    mcpbvp list
    mcpbvp solve --example 1 --n 10 --grid paper11 --format text
    mcpbvp sweep --example 5 --n 12,14,16 --format csv
    mcpbvp sweep --file problem.json --n 8,12

Exit status is 0 when every requested N converged, 2 if any did not, and 1
on input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .bvp import SpectralSolution, error_report, solve
from .errors import BvpError, SingularMatrixError
from .examples import EXAMPLE_IDS, builtin
from .numerics import NewtonConfig
from .problem_io import load_problem

EXIT_OK, EXIT_INPUT, EXIT_NOT_CONVERGED = 0, 1, 2


def fmt_err(v) -> str:
    return "" if v is None or not math.isfinite(v) else f"{v:.5e}"


def fmt_val(v) -> str:
    return "" if v is None or not math.isfinite(v) else f"{v:.10f}"


def _num(v, kind):
    # JSON mirrors the text rendering so repeated runs are byte-identical
    s = fmt_err(v) if kind == "err" else fmt_val(v)
    return float(s) if s else None


@dataclass
class Source:
    label: str
    problem: object
    exact: object | None
    interval: tuple[float, float]
    default_n: tuple[int, ...] = ()
    boundary: str = "replace"
    published: dict = field(default_factory=dict)


@dataclass
class RunSpec:
    source: Source
    n_values: tuple[int, ...]
    output_format: str = "text"
    output_grid: str = "paper11"
    newton: NewtonConfig = field(default_factory=NewtonConfig)
    boundary: str = "replace"


@dataclass
class Run:
    N: int
    solution: SpectralSolution | None
    converged: bool
    iterations: int
    residual_inf: float
    points: np.ndarray
    exact: np.ndarray | None
    approx: np.ndarray | None
    error: str = ""

    @property
    def ae(self):
        if self.exact is None or self.approx is None:
            return None
        return np.abs(self.exact - self.approx)

    @property
    def mae(self):
        ae = self.ae
        return None if ae is None else float(ae.max())


def parse_n_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise BvpError(f"--n expects a comma-separated list of integers, got {text!r}") from None
    if not values:
        raise BvpError("--n needs at least one value")
    return values


def parse_grid(text: str, interval) -> np.ndarray:
    a, b = interval
    if text == "paper11":
        return np.linspace(a, b, 11)
    if text.startswith("uniform:"):
        try:
            k = int(text.split(":", 1)[1])
        except ValueError:
            k = 0
        if k >= 2:
            return np.linspace(a, b, k)
    raise BvpError(f"--grid must be 'paper11' or 'uniform:<k>' with k >= 2, got {text!r}")


def load_source(args) -> Source:
    if (args.example is None) == (args.file is None):
        raise BvpError("give exactly one of --example or --file")
    if args.example is not None:
        try:
            ex = builtin(args.example)
        except KeyError as exc:
            raise BvpError(str(exc.args[0])) from None
        return Source(
            f"example {ex.id}", ex.problem, ex.exact, ex.problem.native_interval,
            ex.published_n, ex.published_boundary, dict(ex.published_mae),
        )
    pf = load_problem(args.file)
    return Source(args.file, pf.problem, pf.exact, pf.problem.native_interval)


def run_one(spec: RunSpec, N: int) -> Run:
    src = spec.source
    pts = parse_grid(spec.output_grid, src.interval)
    try:
        sol = solve(src.problem, N, spec.newton, spec.boundary)
    except SingularMatrixError as exc:
        return Run(N, None, False, 0, math.nan, pts, None, None, str(exc))
    exact = approx = None
    if src.exact is not None:
        rep = error_report(sol, src.exact, pts)
        exact, approx = rep.exact_values, rep.approx_values
    else:
        approx = np.asarray(sol(pts), dtype=float)
    return Run(N, sol, sol.report.converged, sol.report.iterations, sol.residual_inf,
               pts, exact, approx)


def validate(spec: RunSpec):
    order = spec.source.problem.order
    for N in spec.n_values:
        if N < order:
            raise BvpError(
                f"N = {N} is too small for {spec.source.label}: N must be at least the "
                f"order {order} (N + 1 > {order} with {order} conditions)"
            )


def render_solve(spec: RunSpec, runs: list[Run]) -> str:
    src = spec.source
    coord = "z" if src.interval == (-1.0, 1.0) else "x"
    if spec.output_format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", coord, "exact", "approximate", "ae"])
        for r in runs:
            for i, x in enumerate(r.points):
                ae = r.ae
                w.writerow([
                    r.N, fmt_val(x),
                    fmt_val(r.exact[i]) if r.exact is not None else "",
                    fmt_val(r.approx[i]) if r.approx is not None else "",
                    fmt_err(ae[i]) if ae is not None else "",
                ])
        return buf.getvalue()
    if spec.output_format == "json":
        doc = {"source": src.label, "boundary": spec.boundary, "grid": spec.output_grid, "runs": []}
        for r in runs:
            ae = r.ae
            doc["runs"].append({
                "N": r.N,
                "mae": _num(r.mae, "err"),
                "converged": r.converged,
                "newton_iters": r.iterations,
                "residual_inf": _num(r.residual_inf, "err"),
                "points": [
                    {
                        coord: _num(x, "val"),
                        "exact": _num(r.exact[i], "val") if r.exact is not None else None,
                        "approximate": _num(r.approx[i], "val") if r.approx is not None else None,
                        "ae": _num(ae[i], "err") if ae is not None else None,
                    }
                    for i, x in enumerate(r.points)
                ],
            })
        return json.dumps(doc, indent=2) + "\n"
    lines = [f"{src.label}: order {src.problem.order}, boundary rows {spec.boundary}"]
    for r in runs:
        status = "converged" if r.converged else "NOT converged"
        lines.append("")
        lines.append(f"N = {r.N}: {status}, iterations {r.iterations}, "
                     f"residual {fmt_err(r.residual_inf) or '-'}")
        if r.error:
            lines.append(f"  {r.error}")
            continue
        lines.append(f"{coord:>14}  {'exact':>14}  {'approximate':>14}  {'AE':>12}")
        ae = r.ae
        for i, x in enumerate(r.points):
            ex = fmt_val(r.exact[i]) if r.exact is not None else "-"
            e = fmt_err(ae[i]) if ae is not None else "-"
            lines.append(f"{fmt_val(x):>14}  {ex:>14}  {fmt_val(r.approx[i]):>14}  {e:>12}")
    lines.append("")
    lines.append(f"{'N':>4}  {'MAE':>12}")
    for r in runs:
        lines.append(f"{r.N:>4}  {fmt_err(r.mae) or '-':>12}")
    return "\n".join(lines) + "\n"


def render_sweep(spec: RunSpec, runs: list[Run]) -> str:
    if spec.output_format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "mae", "newton_iters", "residual_inf"])
        for r in runs:
            w.writerow([r.N, fmt_err(r.mae), r.iterations, fmt_err(r.residual_inf)])
        return buf.getvalue()
    published = spec.source.published
    if spec.output_format == "json":
        rows = [
            {
                "N": r.N,
                "mae": _num(r.mae, "err"),
                "newton_iters": r.iterations,
                "residual_inf": _num(r.residual_inf, "err"),
                "converged": r.converged,
                "published_mae": published.get(r.N),
            }
            for r in runs
        ]
        doc = {"source": spec.source.label, "boundary": spec.boundary,
               "grid": spec.output_grid, "rows": rows}
        return json.dumps(doc, indent=2) + "\n"
    lines = [f"{spec.source.label}: order {spec.source.problem.order}, "
             f"boundary rows {spec.boundary}, grid {spec.output_grid}",
             f"{'N':>4}  {'MAE':>12}  {'published':>12}  {'iters':>5}  {'residual':>12}  status"]
    for r in runs:
        pub = fmt_err(published.get(r.N)) or "-"
        lines.append(
            f"{r.N:>4}  {fmt_err(r.mae) or '-':>12}  {pub:>12}  {r.iterations:>5}  "
            f"{fmt_err(r.residual_inf) or '-':>12}  {'ok' if r.converged else 'NOT converged'}"
        )
    return "\n".join(lines) + "\n"


def cmd_list() -> str:
    lines = []
    for k in EXAMPLE_IDS:
        ex = builtin(k)
        a, b = ex.problem.native_interval
        lines.append(
            f"example {k}: order {ex.order}, {ex.kind}, interval [{a:g}, {b:g}], "
            f"exact y = {ex.exact_text}"
        )
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mcpbvp", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list the built-in examples")
    for name, grid in (("solve", "paper11"), ("sweep", "uniform:201")):
        sp = sub.add_parser(name, help=f"{name} a problem file or built-in example")
        sp.add_argument("--example", type=int, help=f"built-in example id {EXAMPLE_IDS}")
        sp.add_argument("--file", help="JSON problem file")
        sp.add_argument("--n", help="comma-separated truncation orders (default: published list)")
        sp.add_argument("--grid", default=grid, help=f"paper11 or uniform:<k> (default {grid})")
        sp.add_argument("--format", default="text", choices=("text", "csv", "json"))
        sp.add_argument("--boundary", choices=("replace", "append"),
                        help="boundary-row treatment (default: as published for examples, "
                             "else replace)")
        sp.add_argument("--newton-tol", type=float, default=None)
        sp.add_argument("--newton-max-iters", type=int, default=None)
        sp.add_argument("--out", help="write output here instead of stdout")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        sys.stdout.write(cmd_list())
        return EXIT_OK
    try:
        src = load_source(args)
        if args.n is not None:
            n_values = parse_n_list(args.n)
        elif src.default_n:
            n_values = src.default_n
        else:
            raise BvpError("--n is required for problem files")
        cfg = {}
        if args.newton_tol is not None:
            cfg["residual_tolerance"] = args.newton_tol
        if args.newton_max_iters is not None:
            cfg["max_iterations"] = args.newton_max_iters
        spec = RunSpec(
            src,
            tuple(sorted(set(n_values))),
            args.format,
            args.grid,
            NewtonConfig(**cfg),
            args.boundary or src.boundary,
        )
        parse_grid(spec.output_grid, src.interval)
        validate(spec)
        runs = [run_one(spec, N) for N in spec.n_values]
    except (BvpError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = render_solve(spec, runs) if args.command == "solve" else render_sweep(spec, runs)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(r.converged for r in runs) else EXIT_NOT_CONVERGED


if __name__ == "__main__":
    sys.exit(main())
