"""Douglas-Rachford, alternating-projection, and Dykstra feasibility runs.

All three schemes are driven by the same pair of projectors: the box
projection P_A and the affine projection P_B onto prescribed scaled
row/column sums. Updates, for a current iterate T_k:

    DR:   T_{k+1} = T_k - P_A(T_k) + P_B(2 P_A(T_k) - T_k)
    MAP:  T_{k+1} = P_B(P_A(T_k))
    Dyk:  A_{k+1} = P_A(T_k + R_k),  R_{k+1} = T_k + R_k - A_{k+1},
          T_{k+1} = P_B(A_{k+1}),    R_0 = 0

The monitored sequence is P_A(T_k) (which lies in the box), with the
feasibility gap delta_k = ||P_A(T_k) - P_B(P_A(T_k))||_F evaluated for
k = 0, 1, ... before each update; a run stops at the first delta_k
within tolerance or after max_iterations updates. For Dykstra the gap
is deliberately computed from P_A(T_k), not from A_{k+1}, so all three
algorithms share one criterion.

In the integer-restricted case the same updates run unchanged with the
rounding box projection, and feasibility additionally requires exact
integer entries whose row/column sums match the projected targets in
integer arithmetic; this separates float noise from true feasibility.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .affine import AffineMarginalSet
from .box import HyperBox
from .linalg import as_matrix, frobenius_norm

_ALG_IDS = {"DR": _kernels.DR, "MAP": _kernels.MAP, "DYK": _kernels.DYK}


@dataclass(frozen=True)
class SolverConfig:
    algorithm: str
    max_iterations: int = 250
    feasibility_tol: float = 1e-9
    record_trace: bool = False

    def __post_init__(self):
        alg = str(self.algorithm).upper()
        if alg not in _ALG_IDS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected DR, MAP or DYK")
        object.__setattr__(self, "algorithm", alg)
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not np.isfinite(self.feasibility_tol) or self.feasibility_tol < 0:
            raise ValueError("feasibility_tol must be finite and nonnegative")


@dataclass
class SolverTrace:
    """Outcome of one run: the delta_k sequence and the first feasible point."""

    algorithm: str
    deltas: np.ndarray
    first_feasible_iteration: Optional[int]
    first_feasible_matrix: Optional[np.ndarray]
    converged: bool
    iterates: Optional[list] = None
    box_candidates: Optional[list] = field(default=None, repr=False)


def _integer_goals(affine_set):
    """Rounded projected targets for the exact integer feasibility check."""
    s_bar, r_bar = affine_set.projected_target
    s_goal = np.round(s_bar)
    r_goal = np.round(r_bar)
    integral = bool(np.all(s_bar == s_goal) and np.all(r_bar == r_goal))
    return s_goal, r_goal, integral


def _exact_integer_sums(T, s_goal, r_goal):
    if np.any(np.floor(T) != T):
        return False
    return bool(np.all(T.sum(axis=1) == s_goal) and np.all(T.sum(axis=0) == r_goal))


def _run_python(alg_id, affine_set, box, T0, cfg):
    T = T0.copy()
    R = np.zeros_like(T0)
    s_goal, r_goal, targets_integral = _integer_goals(affine_set)
    integer_mode = box.integer_restricted
    deltas = []
    iterates = [] if cfg.record_trace else None
    candidates = [] if (cfg.record_trace and alg_id == _kernels.DYK) else None
    feasible_iter = None
    feasible_matrix = None
    for k in range(cfg.max_iterations + 1):
        if iterates is not None:
            iterates.append(T.copy())
        PA = box.project(T)
        PB = affine_set.project(PA)
        delta = frobenius_norm(PA - PB)
        deltas.append(delta)
        feasible = delta <= cfg.feasibility_tol
        if feasible and integer_mode:
            feasible = targets_integral and _exact_integer_sums(PA, s_goal, r_goal)
        if feasible:
            feasible_iter = k
            feasible_matrix = PA
            break
        if k == cfg.max_iterations:
            break
        if alg_id == _kernels.DR:
            T = T - PA + affine_set.project(2.0 * PA - T)
        elif alg_id == _kernels.MAP:
            T = PB
        else:
            AK = box.project(T + R)
            if candidates is not None:
                candidates.append(AK.copy())
            R = T + R - AK
            T = affine_set.project(AK)
    return SolverTrace(
        algorithm=cfg.algorithm,
        deltas=np.asarray(deltas),
        first_feasible_iteration=feasible_iter,
        first_feasible_matrix=feasible_matrix,
        converged=feasible_iter is not None,
        iterates=iterates,
        box_candidates=candidates,
    )


def _run_kernel(alg_id, affine_set, box, T0, cfg):
    op = affine_set.op
    s, r = affine_set.target
    s_goal, r_goal, targets_integral = _integer_goals(affine_set)
    deltas, count, ff_iter, ff_matrix = _kernels.solver_run(
        alg_id, T0, op.e, op.f, s, r, op.e_norm_sq, op.f_norm_sq,
        box.lower, box.upper, box.integer_restricted,
        box.int_lower, box.int_upper,
        s_goal, r_goal, targets_integral,
        cfg.max_iterations, cfg.feasibility_tol,
    )
    converged = ff_iter >= 0
    return SolverTrace(
        algorithm=cfg.algorithm,
        deltas=deltas[:count].copy(),
        first_feasible_iteration=int(ff_iter) if converged else None,
        first_feasible_matrix=ff_matrix if converged else None,
        converged=converged,
    )


def run(affine_set: AffineMarginalSet, box: HyperBox, T0, cfg: SolverConfig):
    """Run cfg.algorithm from T0; see the module docstring for the updates."""
    T0 = as_matrix(T0, shape=affine_set.shape, name="T0")
    if box.shape != affine_set.shape:
        raise ValueError(f"box shape {box.shape} does not match constraint shape {affine_set.shape}")
    alg_id = _ALG_IDS[cfg.algorithm]
    op = affine_set.op
    use_kernel = (
        _kernels.NUMBA_ENABLED
        and not cfg.record_trace
        and not op.e_is_zero
        and not op.f_is_zero
    )
    if use_kernel:
        return _run_kernel(alg_id, affine_set, box, T0, cfg)
    return _run_python(alg_id, affine_set, box, T0, cfg)


def _run_named(name, affine_set, box, T0, cfg):
    if cfg.algorithm != name:
        raise ValueError(f"config algorithm {cfg.algorithm!r} does not match {name!r}")
    return run(affine_set, box, T0, cfg)


def run_dr(affine_set, box, T0, cfg):
    """Douglas-Rachford run (cfg.algorithm must be 'DR')."""
    return _run_named("DR", affine_set, box, T0, cfg)


def run_map(affine_set, box, T0, cfg):
    """Alternating-projections run (cfg.algorithm must be 'MAP')."""
    return _run_named("MAP", affine_set, box, T0, cfg)


def run_dykstra(affine_set, box, T0, cfg):
    """Dykstra run (cfg.algorithm must be 'DYK')."""
    return _run_named("DYK", affine_set, box, T0, cfg)
