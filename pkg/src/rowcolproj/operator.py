"""The scaled row/column-sum operator A(T) = (T e, T^T f) and its calculus.

For weight vectors e in R^n and f in R^m the linear map

    A : R^(m x n) -> R^m x R^n,   T |-> (T e, T^T f)

collects the e-weighted row sums and f-weighted column sums of T. This
module provides A, its adjoint (y, x) |-> y e^T + f x^T, the closed-form
Moore-Penrose inverse in all four degeneracy cases (e and/or f zero),
and the orthogonal projections onto ran A and ran A*. With unit weights
these are the classical row/column-sum maps.

Degeneracy (e = 0 or f = 0) is decided by exact entrywise zero, never
by a norm tolerance: the case split is algebraic, and near-zero weights
intentionally take the generic (ill-conditioned) formula.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .linalg import as_matrix, as_vector


class MarginalPair(NamedTuple):
    """A point (row_part, col_part) in R^m x R^n.

    Holds operator outputs (T e, T^T f) as well as target pairs (s, r).
    """

    row_part: np.ndarray  # dim m
    col_part: np.ndarray  # dim n

    def concat(self):
        return np.concatenate([self.row_part, self.col_part])


def _frozen(arr):
    out = np.array(arr, dtype=np.float64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ScaledMarginalOperator:
    """Immutable weight pair (e, f) with cached squared norms and zero flags."""

    e: np.ndarray
    f: np.ndarray
    e_norm_sq: float = field(init=False)
    f_norm_sq: float = field(init=False)
    e_is_zero: bool = field(init=False)
    f_is_zero: bool = field(init=False)

    def __post_init__(self):
        e = _frozen(as_vector(self.e, name="e"))
        f = _frozen(as_vector(self.f, name="f"))
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "e_norm_sq", float(e @ e))
        object.__setattr__(self, "f_norm_sq", float(f @ f))
        object.__setattr__(self, "e_is_zero", bool(np.all(e == 0.0)))
        object.__setattr__(self, "f_is_zero", bool(np.all(f == 0.0)))

    @property
    def n(self):
        return self.e.shape[0]

    @property
    def m(self):
        return self.f.shape[0]

    @property
    def shape(self):
        """Shape (m, n) of the matrices this operator acts on."""
        return (self.m, self.n)

    def _check_matrix(self, T):
        return as_matrix(T, shape=self.shape, name="T")

    def _check_pair(self, p):
        y = as_vector(p[0], dim=self.m, name="row_part")
        x = as_vector(p[1], dim=self.n, name="col_part")
        return MarginalPair(y, x)

    def apply(self, T):
        """A(T) = (T e, T^T f): e-weighted row sums and f-weighted column sums."""
        T = self._check_matrix(T)
        return MarginalPair(T @ self.e, T.T @ self.f)

    def adjoint_apply(self, p):
        """A*(y, x) = y e^T + f x^T."""
        y, x = self._check_pair(p)
        return np.outer(y, self.e) + np.outer(self.f, x)

    def pinv_apply(self, p):
        """Moore-Penrose inverse A^+(y, x), by the exact four-case formula.

        Both weights nonzero:

            (1/|e|^2) (y e^T - (f.y)/(|e|^2+|f|^2) f e^T)
          + (1/|f|^2) (f x^T - (e.x)/(|e|^2+|f|^2) f e^T)

        With e = 0 only the f x^T / |f|^2 term survives; with f = 0 only
        y e^T / |e|^2; the zero operator has zero pseudoinverse.
        """
        y, x = self._check_pair(p)
        e, f = self.e, self.f
        if self.e_is_zero and self.f_is_zero:
            return np.zeros(self.shape)
        if self.e_is_zero:
            return np.outer(f, x) / self.f_norm_sq
        if self.f_is_zero:
            return np.outer(y, e) / self.e_norm_sq
        denom = self.e_norm_sq + self.f_norm_sq
        fe = np.outer(f, e)
        term_row = (np.outer(y, e) - (float(f @ y) / denom) * fe) / self.e_norm_sq
        term_col = (np.outer(f, x) - (float(e @ x) / denom) * fe) / self.f_norm_sq
        return term_row + term_col

    def project_range(self, p):
        """Orthogonal projection of (y, x) onto ran A.

        For nonzero weights ran A is the hyperplane orthogonal to
        (f, -e), so the projection removes that single component;
        in the degenerate cases it zeroes the dead block(s).
        """
        y, x = self._check_pair(p)
        if self.e_is_zero and self.f_is_zero:
            return MarginalPair(np.zeros(self.m), np.zeros(self.n))
        if self.e_is_zero:
            return MarginalPair(np.zeros(self.m), x.copy())
        if self.f_is_zero:
            return MarginalPair(y.copy(), np.zeros(self.n))
        coeff = (float(self.f @ y) - float(self.e @ x)) / (self.e_norm_sq + self.f_norm_sq)
        return MarginalPair(y - coeff * self.f, x + coeff * self.e)

    def project_range_adjoint(self, T):
        """Orthogonal projection of T onto ran A* = {y e^T + f x^T}."""
        T = self._check_matrix(T)
        e, f = self.e, self.f
        if self.e_is_zero and self.f_is_zero:
            return np.zeros(self.shape)
        if self.e_is_zero:
            return np.outer(f, T.T @ f) / self.f_norm_sq
        if self.f_is_zero:
            return np.outer(T @ e, e) / self.e_norm_sq
        Te = T @ e
        cross = float(f @ Te) / (self.e_norm_sq * self.f_norm_sq)
        return (
            np.outer(Te, e) / self.e_norm_sq
            + np.outer(f, T.T @ f) / self.f_norm_sq
            - cross * np.outer(f, e)
        )

    def norm(self):
        """Operator norm sqrt(|e|^2 + |f|^2)."""
        return float(np.sqrt(self.e_norm_sq + self.f_norm_sq))


def unit_operator(m, n):
    """Operator with all-ones weights: plain row and column sums."""
    return ScaledMarginalOperator(np.ones(n), np.ones(m))
