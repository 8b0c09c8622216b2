"""Batch experiment driver: random starts, three solvers, order census, files.

Each run draws one start matrix with entries uniform on the half-open
interval [init_low, init_high) and executes DR, MAP, and Dykstra from
it. Runs are classified by the order in which the algorithms reach
feasibility (iteration count) and by how close their first feasible
points are to the start (spectral norm, with a tie tolerance); labels
look like ``DR<MAP=Dyk``, omit non-converged algorithms, and degrade to
``None`` when nothing converges. Integer-case runs also collect the
found matrices for exact deduplication.

Randomness: run ``i`` uses numpy's PCG64 seeded with
``SeedSequence(seed, spawn_key=(i,))``, so each run has an independent
substream and changing ``num_runs`` never reshuffles earlier runs.
Results are sorted by run index before emission, which keeps output
byte-identical regardless of worker scheduling.
"""

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .affine import make_affine_set
from .box import ROUNDING_TIE_RULE, make_box
from .linalg import as_vector, spectral_norm
from .operator import unit_operator
from .solvers import SolverConfig, run

SCHEMA_VERSION = 1

ALGORITHM_KEYS = ("DR", "MAP", "DYK")
DISPLAY_NAMES = {"DR": "DR", "MAP": "MAP", "DYK": "Dyk"}

RUNS_CSV = "runs.csv"
SUMMARY_JSON = "summary.json"
DELTAS_CSV = "deltas.csv"
SCHEMA_JSON = "schema.json"


@dataclass(frozen=True)
class ExperimentSpec:
    """Configuration for one batch; dimensions are implied by the targets."""

    s: np.ndarray
    r: np.ndarray
    case: str = "convex"
    num_runs: int = 1000
    init_low: float = -100.0
    init_high: float = 100.0
    seed: int = 1
    max_iterations: int = 250
    feasibility_tol: float = 1e-9
    distance_tie_tol: float = 1e-15

    def __post_init__(self):
        s = as_vector(self.s, name="s")
        r = as_vector(self.r, name="r")
        s.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "r", r)
        if self.case not in ("convex", "integer"):
            raise ValueError(f"case must be 'convex' or 'integer', got {self.case!r}")
        if self.num_runs < 1:
            raise ValueError("num_runs must be >= 1")
        if not self.init_low < self.init_high:
            raise ValueError("init_low must be strictly below init_high")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")

    @property
    def m(self):
        return self.s.shape[0]

    @property
    def n(self):
        return self.r.shape[0]

    @classmethod
    def from_config(cls, cfg, **overrides):
        """Build a spec from a plain dict (e.g. a loaded JSON config)."""
        merged = dict(cfg)
        merged.update({k: v for k, v in overrides.items() if v is not None})
        merged.pop("m", None)
        merged.pop("n", None)
        return cls(**merged)


@dataclass
class AlgorithmResult:
    converged: bool
    iterations: Optional[int]
    distance: Optional[float]
    deltas: np.ndarray
    solution: Optional[np.ndarray] = None  # int64 matrix, integer case only


@dataclass
class RunRecord:
    run_index: int
    results: dict
    feasibility_order: str = ""
    distance_order: str = ""


def draw_start(spec, run_index):
    """Start matrix for one run, from that run's private PCG64 substream."""
    seq = np.random.SeedSequence(int(spec.seed), spawn_key=(int(run_index),))
    rng = np.random.Generator(np.random.PCG64(seq))
    return rng.uniform(spec.init_low, spec.init_high, size=(spec.m, spec.n))


def _order_label(entries, tie_tol):
    """Chain label like 'DR<MAP=Dyk' over the converged algorithms.

    ``entries`` holds (display_name, value) pairs in canonical algorithm
    order; the sort is stable, so exact ties keep that order. Adjacent
    values within ``tie_tol`` are joined with '='.
    """
    if not entries:
        return "None"
    ordered = sorted(entries, key=lambda t: t[1])
    parts = [ordered[0][0]]
    for prev, cur in zip(ordered, ordered[1:]):
        parts.append("=" if cur[1] - prev[1] <= tie_tol else "<")
        parts.append(cur[0])
    return "".join(parts)


def _classify(record, spec):
    feas = []
    dist = []
    for key in ALGORITHM_KEYS:
        res = record.results[key]
        if res.converged:
            feas.append((DISPLAY_NAMES[key], res.iterations))
            dist.append((DISPLAY_NAMES[key], res.distance))
    record.feasibility_order = _order_label(feas, 0)
    record.distance_order = _order_label(dist, spec.distance_tie_tol)


def _build_problem(spec):
    op = unit_operator(spec.m, spec.n)
    affine_set = make_affine_set(op, spec.s, spec.r)
    s_bar, r_bar = affine_set.projected_target
    box = make_box(s_bar, r_bar, integer_restricted=(spec.case == "integer"))
    return affine_set, box


def _execute_run(spec, affine_set, box, run_index):
    T0 = draw_start(spec, run_index)
    results = {}
    for key in ALGORITHM_KEYS:
        cfg = SolverConfig(algorithm=key, max_iterations=spec.max_iterations,
                           feasibility_tol=spec.feasibility_tol)
        trace = run(affine_set, box, T0, cfg)
        distance = None
        solution = None
        if trace.converged:
            distance = spectral_norm(T0 - trace.first_feasible_matrix)
            if spec.case == "integer":
                solution = trace.first_feasible_matrix.astype(np.int64)
        results[key] = AlgorithmResult(
            converged=trace.converged,
            iterations=trace.first_feasible_iteration,
            distance=distance,
            deltas=trace.deltas,
            solution=solution,
        )
    record = RunRecord(run_index=run_index, results=results)
    _classify(record, spec)
    return record


def _run_chunk(spec, indices):
    affine_set, box = _build_problem(spec)
    return [_execute_run(spec, affine_set, box, i) for i in indices]


def run_experiment(spec, jobs=1):
    """Execute the batch; returns (records sorted by run index, summary dict)."""
    indices = list(range(spec.num_runs))
    if jobs <= 1 or spec.num_runs == 1:
        records = _run_chunk(spec, indices)
    else:
        _kernels.warmup()  # compile before forking so workers inherit the JIT
        chunks = [indices[k::jobs] for k in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(_run_chunk, [spec] * len(chunks), chunks)
            records = [rec for part in parts for rec in part]
    records.sort(key=lambda rec: rec.run_index)
    return records, summarize(records, spec)


def _delta_statistics(records, spec):
    """Per-iteration median/min/max of delta_k per algorithm.

    Runs that stopped early carry their final delta forward, so every
    run contributes a value at every iteration (a feasible run keeps
    reporting its sub-tolerance gap).
    """
    length = spec.max_iterations + 1
    stats = {}
    for key in ALGORITHM_KEYS:
        table = np.empty((len(records), length))
        for row, rec in enumerate(records):
            deltas = rec.results[key].deltas
            table[row, :len(deltas)] = deltas
            table[row, len(deltas):] = deltas[-1]
        stats[DISPLAY_NAMES[key]] = {
            "median": np.median(table, axis=0).tolist(),
            "min": table.min(axis=0).tolist(),
            "max": table.max(axis=0).tolist(),
        }
    return stats


def _count_labels(records, attr):
    counts = {}
    for rec in records:
        label = getattr(rec, attr)
        counts[label] = counts.get(label, 0) + 1
    return dict(sorted(counts.items()))


def dedup_solutions(records):
    """Exact-equality census of integer solutions, per algorithm and overall."""
    per_algorithm = {}
    all_keys = set()
    total_found = 0
    for key in ALGORITHM_KEYS:
        matrices = [rec.results[key].solution for rec in records
                    if rec.results[key].solution is not None]
        unique = {mat.tobytes() for mat in matrices}
        per_algorithm[DISPLAY_NAMES[key]] = {
            "found": len(matrices),
            "unique": len(unique),
        }
        total_found += len(matrices)
        all_keys |= unique
    return {
        "per_algorithm": per_algorithm,
        "total_found": total_found,
        "total_unique": len(all_keys),
    }


def summarize(records, spec):
    convergence = {
        DISPLAY_NAMES[key]: sum(1 for rec in records if rec.results[key].converged)
        for key in ALGORITHM_KEYS
    }
    summary = {
        "schema_version": SCHEMA_VERSION,
        "spec": {
            "m": spec.m,
            "n": spec.n,
            "s": spec.s.tolist(),
            "r": spec.r.tolist(),
            "case": spec.case,
            "num_runs": spec.num_runs,
            "init_low": spec.init_low,
            "init_high": spec.init_high,
            "seed": int(spec.seed),
            "max_iterations": spec.max_iterations,
            "feasibility_tol": spec.feasibility_tol,
            "distance_tie_tol": spec.distance_tie_tol,
        },
        "backend": _kernels.BACKEND,
        "conventions": {
            "rounding_tie_rule": ROUNDING_TIE_RULE,
            "delta_definition": "frobenius norm of P_box(T_k) minus P_affine(P_box(T_k))",
            "dykstra_delta_point": "P_box(T_k), same criterion as DR and MAP",
            "integer_feasibility": "delta within tolerance plus exact integer row/column sums",
            "delta_padding": "stopped runs carry their final delta forward in the statistics",
            "rng": "PCG64 with SeedSequence(seed, spawn_key=(run_index,)) per run",
            "init_interval": "half-open [init_low, init_high)",
            "distance_norm": "spectral norm via power iteration of start minus first feasible point",
        },
        "algorithms": [DISPLAY_NAMES[k] for k in ALGORITHM_KEYS],
        "convergence_counts": convergence,
        "feasibility_order_counts": _count_labels(records, "feasibility_order"),
        "distance_order_counts": _count_labels(records, "distance_order"),
        "delta_stats": _delta_statistics(records, spec),
    }
    if spec.case == "integer":
        summary["solutions"] = dedup_solutions(records)
    return summary


def _fmt(x):
    return f"{x:.17g}"


def _solution_cell(solution):
    if solution is None:
        return ""
    return " ".join(str(int(v)) for v in solution.reshape(-1))


def emit_outputs(records, summary, out_dir):
    """Write runs.csv, summary.json, deltas.csv, and schema.json under out_dir.

    I/O errors propagate with the offending path in the exception.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    header = ["run_index"]
    for key in ALGORITHM_KEYS:
        low = DISPLAY_NAMES[key].lower()
        header += [f"{low}_converged", f"{low}_iterations", f"{low}_distance"]
    header += ["feasibility_order", "distance_order"]
    header += [f"{DISPLAY_NAMES[key].lower()}_solution" for key in ALGORITHM_KEYS]

    lines = [",".join(header)]
    for rec in records:
        cells = [str(rec.run_index)]
        for key in ALGORITHM_KEYS:
            res = rec.results[key]
            cells.append("true" if res.converged else "false")
            cells.append("" if res.iterations is None else str(res.iterations))
            cells.append("" if res.distance is None else _fmt(res.distance))
        cells.append(rec.feasibility_order)
        cells.append(rec.distance_order)
        for key in ALGORITHM_KEYS:
            cells.append(_solution_cell(rec.results[key].solution))
        lines.append(",".join(cells))
    (out_dir / RUNS_CSV).write_text("\n".join(lines) + "\n")

    delta_lines = ["iteration,algorithm,median,min,max"]
    stats = summary["delta_stats"]
    length = len(next(iter(stats.values()))["median"])
    for k in range(length):
        for key in ALGORITHM_KEYS:
            name = DISPLAY_NAMES[key]
            s = stats[name]
            delta_lines.append(
                f"{k},{name},{_fmt(s['median'][k])},{_fmt(s['min'][k])},{_fmt(s['max'][k])}"
            )
    (out_dir / DELTAS_CSV).write_text("\n".join(delta_lines) + "\n")

    (out_dir / SUMMARY_JSON).write_text(json.dumps(summary, indent=2) + "\n")

    schema = {
        "schema_version": SCHEMA_VERSION,
        "files": {
            RUNS_CSV: {
                "description": "one row per run",
                "columns": {
                    "run_index": "0-based run number",
                    "<alg>_converged": "true/false, feasibility reached within max_iterations",
                    "<alg>_iterations": "first iteration k with delta_k within tolerance (empty if none)",
                    "<alg>_distance": "spectral norm of start minus first feasible point, 17 significant digits",
                    "feasibility_order": "converged algorithms ordered by iterations; '=' joins exact ties; 'None' if no algorithm converged",
                    "distance_order": "converged algorithms ordered by distance; '=' joins values within distance_tie_tol",
                    "<alg>_solution": "integer case only: row-major integer entries of the found matrix, space-separated",
                },
            },
            DELTAS_CSV: {
                "description": "per-iteration feasibility-gap statistics across runs",
                "columns": {
                    "iteration": "0-based iteration index",
                    "algorithm": "DR, MAP or Dyk",
                    "median/min/max": "statistics of delta_k over runs (final value carried forward after a run stops)",
                },
            },
            SUMMARY_JSON: {
                "description": "order-label counts, per-iteration delta statistics, "
                               "solution census (integer case), config echo and conventions",
            },
        },
        "floating_point_format": "CSV floats use 17 significant digits; JSON floats are shortest round-trip representations",
    }
    (out_dir / SCHEMA_JSON).write_text(json.dumps(schema, indent=2) + "\n")
    return [out_dir / RUNS_CSV, out_dir / SUMMARY_JSON, out_dir / DELTAS_CSV, out_dir / SCHEMA_JSON]
