"""JIT-compiled solver kernels with a pure-numpy fallback.

The per-run solver loop (box projection, affine projection, feasibility
gap, update rule, up to ``max_iterations`` times) dominates batch
runtime, so it is compiled with numba when available. Setting the
environment variable ``ROWCOLPROJ_NO_NUMBA=1`` (or numba being absent)
selects the pure-numpy path in :mod:`rowcolproj.solvers` instead; both
paths implement identical recurrences and differ only by floating-point
summation order. ``benchmarks/bench_backends.py`` compares them.

Kernels cover the generic case (both weight vectors nonzero); solvers
route degenerate operators and trace-recording runs to the numpy path.
"""

import math
import os

import numpy as np

DR, MAP, DYK = 0, 1, 2

_flag = os.environ.get("ROWCOLPROJ_NO_NUMBA", "").strip().lower()
NUMBA_REQUESTED = _flag not in ("1", "true", "yes")

try:
    if not NUMBA_REQUESTED:
        raise ImportError("numba disabled by ROWCOLPROJ_NO_NUMBA")
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:
    NUMBA_ENABLED = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


BACKEND = "numba" if NUMBA_ENABLED else "numpy"


@njit(cache=True)
def _box_into(T, lower, upper, integer_mode, int_lower, int_upper, out):
    m, n = T.shape
    for i in range(m):
        for j in range(n):
            v = T[i, j]
            lo = lower[i, j]
            hi = upper[i, j]
            if v < lo:
                v = lo
            elif v > hi:
                v = hi
            if integer_mode:
                if v >= 0.0:
                    v = math.floor(v + 0.5)
                else:
                    v = math.ceil(v - 0.5)
                ilo = int_lower[i, j]
                ihi = int_upper[i, j]
                if v < ilo:
                    v = ilo
                elif v > ihi:
                    v = ihi
            out[i, j] = v


@njit(cache=True)
def _affine_into(T, e, f, s, r, e_nsq, f_nsq, a, b, out):
    # out = T - pinv-correction, entrywise; a, b are m/n scratch vectors.
    m, n = T.shape
    for i in range(m):
        acc = 0.0
        for j in range(n):
            acc += T[i, j] * e[j]
        a[i] = acc - s[i]
    for j in range(n):
        acc = 0.0
        for i in range(m):
            acc += T[i, j] * f[i]
        b[j] = acc - r[j]
    fa = 0.0
    for i in range(m):
        fa += f[i] * a[i]
    eb = 0.0
    for j in range(n):
        eb += e[j] * b[j]
    denom = e_nsq + f_nsq
    ca = fa / denom
    cb = eb / denom
    for i in range(m):
        for j in range(n):
            fe = f[i] * e[j]
            out[i, j] = (
                T[i, j]
                - (a[i] * e[j] - ca * fe) / e_nsq
                - (f[i] * b[j] - cb * fe) / f_nsq
            )


@njit(cache=True)
def _fro_dist(A, B):
    m, n = A.shape
    acc = 0.0
    for i in range(m):
        for j in range(n):
            d = A[i, j] - B[i, j]
            acc += d * d
    return math.sqrt(acc)


@njit(cache=True)
def _exact_integer_sums(T, s_goal, r_goal):
    # Integer sums of float64 integers below 2^53 are exact.
    m, n = T.shape
    for i in range(m):
        acc = 0.0
        for j in range(n):
            v = T[i, j]
            if math.floor(v) != v:
                return False
            acc += v
        if acc != s_goal[i]:
            return False
    for j in range(n):
        acc = 0.0
        for i in range(m):
            acc += T[i, j]
        if acc != r_goal[j]:
            return False
    return True


@njit(cache=True)
def solver_run(alg, T0, e, f, s, r, e_nsq, f_nsq,
               lower, upper, integer_mode, int_lower, int_upper,
               s_goal, r_goal, targets_integral, max_iter, tol):
    """One full solver run; returns (deltas, count, feasible_iter, feasible_matrix).

    ``deltas`` has ``max_iter + 1`` slots of which the first ``count``
    are meaningful; ``feasible_iter`` is -1 when the run never reaches
    feasibility.
    """
    m, n = T0.shape
    T = T0.copy()
    R = np.zeros((m, n))
    PA = np.empty((m, n))
    PB = np.empty((m, n))
    W = np.empty((m, n))
    PBW = np.empty((m, n))
    a = np.empty(m)
    b = np.empty(n)
    deltas = np.zeros(max_iter + 1)
    feasible_matrix = np.zeros((m, n))
    feasible_iter = -1
    count = 0
    for k in range(max_iter + 1):
        _box_into(T, lower, upper, integer_mode, int_lower, int_upper, PA)
        _affine_into(PA, e, f, s, r, e_nsq, f_nsq, a, b, PB)
        delta = _fro_dist(PA, PB)
        deltas[k] = delta
        count = k + 1
        feasible = delta <= tol
        if feasible and integer_mode:
            feasible = targets_integral and _exact_integer_sums(PA, s_goal, r_goal)
        if feasible:
            feasible_iter = k
            for i in range(m):
                for j in range(n):
                    feasible_matrix[i, j] = PA[i, j]
            break
        if k == max_iter:
            break
        if alg == DR:
            for i in range(m):
                for j in range(n):
                    W[i, j] = 2.0 * PA[i, j] - T[i, j]
            _affine_into(W, e, f, s, r, e_nsq, f_nsq, a, b, PBW)
            for i in range(m):
                for j in range(n):
                    T[i, j] = T[i, j] - PA[i, j] + PBW[i, j]
        elif alg == MAP:
            for i in range(m):
                for j in range(n):
                    T[i, j] = PB[i, j]
        else:  # DYK
            for i in range(m):
                for j in range(n):
                    W[i, j] = T[i, j] + R[i, j]
            _box_into(W, lower, upper, integer_mode, int_lower, int_upper, PBW)
            for i in range(m):
                for j in range(n):
                    R[i, j] = W[i, j] - PBW[i, j]
            _affine_into(PBW, e, f, s, r, e_nsq, f_nsq, a, b, T)
    return deltas, count, feasible_iter, feasible_matrix


def warmup():
    """Trigger JIT compilation on a tiny instance (no-op on the numpy path)."""
    if not NUMBA_ENABLED:
        return
    T0 = np.zeros((1, 1))
    one = np.ones(1)
    solver_run(DR, T0, one, one, one, one, 1.0, 1.0,
               np.zeros((1, 1)), np.ones((1, 1)), False,
               np.zeros((1, 1)), np.ones((1, 1)),
               one, one, True, 1, 1e-9)
