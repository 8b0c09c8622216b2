"""Command-line interface: one-shot projections, single solver runs, batches.

Matrix files are plain text: the first line holds "m n", followed by m
whitespace-separated rows. Floating-point output uses 17 significant
digits so files round-trip exactly.
"""

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import _kernels
from .affine import make_affine_set, project_bistochastic, project_eigenpair, project_unit_sums
from .box import make_box
from .harness import ExperimentSpec, draw_start, emit_outputs, run_experiment
from .linalg import as_matrix, as_vector, spectral_norm
from .operator import ScaledMarginalOperator, unit_operator
from .solvers import SolverConfig, run

DEFAULT_CONFIG = "demo_4x5.json"


def _fmt(x):
    return f"{x:.17g}"


def read_matrix(path):
    """Read a matrix file ("m n" header, then m rows)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SystemExit(f"cannot read matrix file {path}: {exc}")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise SystemExit(f"matrix file {path} is empty")
    try:
        m, n = (int(tok) for tok in lines[0].split())
        rows = [[float(tok) for tok in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise SystemExit(f"matrix file {path} is malformed: {exc}")
    if len(rows) != m or any(len(row) != n for row in rows):
        raise SystemExit(f"matrix file {path} does not contain {m}x{n} entries")
    try:
        return as_matrix(rows, name=f"matrix from {path}")
    except ValueError as exc:
        raise SystemExit(str(exc))


def format_matrix(T):
    m, n = T.shape
    lines = [f"{m} {n}"]
    lines += [" ".join(_fmt(v) for v in row) for row in T]
    return "\n".join(lines) + "\n"


def write_matrix(T, path=None):
    text = format_matrix(T)
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _parse_vector(text, name):
    try:
        return as_vector([float(tok) for tok in text.replace(",", " ").split()], name=name)
    except ValueError as exc:
        raise SystemExit(str(exc))


def load_config(path=None):
    if path is None:
        with resources.files("rowcolproj.data").joinpath(DEFAULT_CONFIG).open() as fh:
            return json.load(fh)
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SystemExit(f"cannot load config {path}: {exc}")


def _targets_from_args(args, shape):
    cfg = load_config(getattr(args, "config", None))
    s = _parse_vector(args.row_sums, "row sums") if args.row_sums else np.asarray(cfg["s"])
    r = _parse_vector(args.col_sums, "column sums") if args.col_sums else np.asarray(cfg["r"])
    if shape is not None and (s.shape[0], r.shape[0]) != shape:
        raise SystemExit(
            f"targets imply shape {(s.shape[0], r.shape[0])} but the matrix is {shape[0]}x{shape[1]}"
        )
    return s, r


def cmd_project(args):
    T = read_matrix(args.input)
    m, n = T.shape
    if args.spec == "bistochastic":
        result = project_bistochastic(T)
    elif args.spec == "ghr":
        e = _parse_vector(args.col_weights, "col weights") if args.col_weights else np.ones(n)
        f = _parse_vector(args.row_weights, "row weights") if args.row_weights else np.ones(m)
        result = project_eigenpair(e, f, args.gamma, T)
    else:
        s, r = _targets_from_args(args, (m, n))
        if args.spec == "unit-sums":
            result = project_unit_sums(s, r, T)
        else:
            e = _parse_vector(args.col_weights, "col weights") if args.col_weights else np.ones(n)
            f = _parse_vector(args.row_weights, "row weights") if args.row_weights else np.ones(m)
            op = ScaledMarginalOperator(e, f)
            result = make_affine_set(op, s, r).project(T)
    write_matrix(result, args.output)
    return 0


def _build_problem(s, r, case):
    affine_set = make_affine_set(unit_operator(s.shape[0], r.shape[0]), s, r)
    s_bar, r_bar = affine_set.projected_target
    box = make_box(s_bar, r_bar, integer_restricted=(case == "integer"))
    return affine_set, box


def cmd_solve(args):
    s, r = _targets_from_args(args, None)
    affine_set, box = _build_problem(s, r, args.case)
    if args.input:
        T0 = read_matrix(args.input)
        if T0.shape != affine_set.shape:
            raise SystemExit(f"start matrix is {T0.shape}, targets imply {affine_set.shape}")
    else:
        spec = ExperimentSpec(s=s, r=r, case=args.case, num_runs=1, seed=args.seed)
        T0 = draw_start(spec, 0)
    cfg = SolverConfig(algorithm=args.alg.upper(), max_iterations=args.iters,
                       feasibility_tol=args.tol)
    trace = run(affine_set, box, T0, cfg)
    for k, delta in enumerate(trace.deltas):
        print(f"{k} {_fmt(delta)}")
    if trace.converged:
        print(f"feasible at iteration {trace.first_feasible_iteration}")
        print(f"distance to start (spectral): {_fmt(spectral_norm(T0 - trace.first_feasible_matrix))}")
        sys.stdout.write(format_matrix(trace.first_feasible_matrix))
        return 0
    print(f"no feasible point within {cfg.max_iterations} iterations "
          f"(final delta {_fmt(trace.deltas[-1])})")
    return 1


def cmd_experiment(args):
    cfg = load_config(args.config)
    spec = ExperimentSpec.from_config(
        cfg,
        seed=args.seed,
        num_runs=args.runs,
        max_iterations=args.iters,
        feasibility_tol=args.tol,
        case=args.case,
    )
    records, summary = run_experiment(spec, jobs=args.jobs)
    out_dir = Path(args.out_dir)
    paths = emit_outputs(records, summary, out_dir)
    print(f"backend: {summary['backend']}")
    for name, count in summary["convergence_counts"].items():
        print(f"{name} converged: {count}/{spec.num_runs}")
    if "solutions" in summary:
        census = summary["solutions"]
        print(f"solutions found: {census['total_found']}, unique: {census['total_unique']}")
    for path in paths:
        print(f"wrote {path}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rowcolproj",
        description="Projections onto matrices with prescribed scaled row/column sums, "
                    "and feasibility solvers over box and integer constraints.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_proj = sub.add_parser("project", help="project a matrix file onto a constraint set")
    p_proj.add_argument("input", help="matrix file (first line 'm n', then m rows)")
    p_proj.add_argument("--spec", choices=["general", "unit-sums", "ghr", "bistochastic"],
                        default="unit-sums", help="which projection to apply")
    p_proj.add_argument("--row-sums", help="target row sums, comma or space separated")
    p_proj.add_argument("--col-sums", help="target column sums")
    p_proj.add_argument("--row-weights", help="row weight vector f (general/ghr)")
    p_proj.add_argument("--col-weights", help="column weight vector e (general/ghr)")
    p_proj.add_argument("--gamma", type=float, default=1.0, help="scale for the ghr spec")
    p_proj.add_argument("--config", help="JSON config supplying default targets")
    p_proj.add_argument("--output", help="write result here instead of stdout")
    p_proj.set_defaults(func=cmd_project)

    p_solve = sub.add_parser("solve", help="run one algorithm from a single start matrix")
    p_solve.add_argument("--input", help="start matrix file; omit to draw a random start")
    p_solve.add_argument("--alg", choices=["dr", "map", "dyk"], default="dr")
    p_solve.add_argument("--seed", type=int, default=1, help="seed for the random start")
    p_solve.add_argument("--iters", type=int, default=250)
    p_solve.add_argument("--tol", type=float, default=1e-9)
    p_solve.add_argument("--case", choices=["convex", "integer"], default="convex")
    p_solve.add_argument("--row-sums", help="target row sums (default: bundled 4x5 instance)")
    p_solve.add_argument("--col-sums", help="target column sums")
    p_solve.add_argument("--config", help="JSON config supplying default targets")
    p_solve.set_defaults(func=cmd_solve)

    p_exp = sub.add_parser("experiment", help="random-start batch over all three algorithms")
    p_exp.add_argument("--config", help="JSON experiment config (default: bundled 4x5 instance)")
    p_exp.add_argument("--seed", type=int)
    p_exp.add_argument("--runs", type=int)
    p_exp.add_argument("--iters", type=int)
    p_exp.add_argument("--tol", type=float)
    p_exp.add_argument("--case", choices=["convex", "integer"])
    p_exp.add_argument("--out-dir", default="experiment-out")
    p_exp.add_argument("--jobs", type=int, default=1, help="worker processes")
    p_exp.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
