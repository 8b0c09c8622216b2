#!/usr/bin/env python3
"""Benchmark the JIT solver kernels against the pure-numpy fallback.

Runs the same seeded batch (convex and integer cases) under both
backends and reports wall time plus a consistency check on the
aggregate outcomes. The backend is fixed at import time, so each
measurement runs in its own subprocess with ROWCOLPROJ_NO_NUMBA set
accordingly.

Usage: python benchmarks/bench_backends.py [--runs N] [--seed S]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def measure(runs, seed):
    """Executed in the child: time both cases under the active backend."""
    import rowcolproj._kernels as kernels
    from rowcolproj.harness import ExperimentSpec, run_experiment

    kernels.warmup()
    out = {"backend": kernels.BACKEND}
    for case in ("convex", "integer"):
        spec = ExperimentSpec(s=[32.0, 43.0, 33.0, 23.0],
                              r=[24.0, 18.0, 37.0, 27.0, 25.0],
                              case=case, num_runs=runs, seed=seed)
        start = time.perf_counter()
        _, summary = run_experiment(spec)
        out[case] = {
            "seconds": time.perf_counter() - start,
            "convergence": summary["convergence_counts"],
        }
    json.dump(out, sys.stdout)
    sys.stdout.write("\n")


def run_child(disable_numba, runs, seed):
    env = dict(os.environ)
    env["ROWCOLPROJ_NO_NUMBA"] = "1" if disable_numba else "0"
    proc = subprocess.run(
        [sys.executable, __file__, "--child", "--runs", str(runs), "--seed", str(seed)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=500)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.child:
        measure(args.runs, args.seed)
        return

    results = [run_child(False, args.runs, args.seed),
               run_child(True, args.runs, args.seed)]
    print(f"{args.runs} runs per case, seed {args.seed} "
          f"(3 algorithms x up to 250 iterations each)\n")
    print(f"{'case':<10} {'backend':<8} {'seconds':>9}   convergence (DR/MAP/Dyk)")
    for case in ("convex", "integer"):
        for res in results:
            conv = res[case]["convergence"]
            print(f"{case:<10} {res['backend']:<8} {res[case]['seconds']:>9.3f}   "
                  f"{conv['DR']}/{conv['MAP']}/{conv['Dyk']}")
    if results[0]["backend"] == results[1]["backend"]:
        print("\nnote: numba unavailable, both measurements used the numpy path")
        return
    for case in ("convex", "integer"):
        fast = results[0][case]["seconds"]
        slow = results[1][case]["seconds"]
        print(f"\n{case}: numba is {slow / fast:.1f}x faster", end="")
        if results[0][case]["convergence"] != results[1][case]["convergence"]:
            print("  (convergence counts differ: rounding is discontinuous, so"
                  " summation-order differences can fork integer trajectories)", end="")
    print()


if __name__ == "__main__":
    main()
