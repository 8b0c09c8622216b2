import numpy as np
import pytest

from rowcolproj.linalg import frobenius_inner, frobenius_norm
from rowcolproj.operator import MarginalPair, ScaledMarginalOperator, unit_operator
from rowcolproj.oracle import build_explicit

from _support import (
    DEMO_COL_SUMS,
    DEMO_ROW_SUMS,
    DEMO_SOLUTION,
    OPERATOR_MODES,
    explicit_pinv,
    penrose_violation,
    random_operator,
)


def test_construction_caches_norms_and_flags():
    op = ScaledMarginalOperator([3.0, 4.0], [1.0, 2.0, 2.0])
    assert op.e_norm_sq == 25.0
    assert op.f_norm_sq == 9.0
    assert not op.e_is_zero and not op.f_is_zero
    assert op.shape == (3, 2)


def test_degeneracy_is_exact_zero_not_tolerance():
    op = ScaledMarginalOperator([1e-300, 0.0], [0.0, 0.0])
    assert not op.e_is_zero
    assert op.f_is_zero


def test_weights_are_read_only():
    op = unit_operator(2, 2)
    with pytest.raises(ValueError):
        op.e[0] = 5.0


def test_apply_demo_matrix():
    pair = unit_operator(4, 5).apply(DEMO_SOLUTION)
    assert np.array_equal(pair.row_part, DEMO_ROW_SUMS)
    assert np.array_equal(pair.col_part, DEMO_COL_SUMS)


def test_apply_zero_weights():
    op = ScaledMarginalOperator(np.zeros(3), np.zeros(2))
    pair = op.apply(np.arange(6.0).reshape(2, 3))
    assert np.array_equal(pair.row_part, np.zeros(2))
    assert np.array_equal(pair.col_part, np.zeros(3))


def test_apply_hand_expansion():
    op = ScaledMarginalOperator([1.0, 2.0], [1.0])
    pair = op.apply(np.array([[3.0, 4.0]]))
    assert np.array_equal(pair.row_part, [11.0])
    assert np.array_equal(pair.col_part, [3.0, 4.0])


def test_apply_shape_mismatch():
    with pytest.raises(ValueError):
        unit_operator(2, 2).apply(np.ones((2, 3)))


def test_adjoint_zero_pair():
    op = unit_operator(3, 2)
    out = op.adjoint_apply(MarginalPair(np.zeros(3), np.zeros(2)))
    assert np.array_equal(out, np.zeros((3, 2)))


def test_adjoint_row_term_only():
    op = ScaledMarginalOperator([1.0, 1.0], [1.0])
    out = op.adjoint_apply(MarginalPair(np.array([2.0]), np.array([0.0, 0.0])))
    assert np.array_equal(out, [[2.0, 2.0]])


def test_adjoint_identity_random():
    # <A(T), (y,x)> = <T, A*(y,x)>
    rng = np.random.default_rng(10)
    for mode in OPERATOR_MODES:
        op = random_operator(rng, 3, 4, mode)
        for _ in range(10):
            T = rng.normal(size=(3, 4))
            y = rng.normal(size=3)
            x = rng.normal(size=4)
            pair = op.apply(T)
            lhs = float(pair.row_part @ y) + float(pair.col_part @ x)
            rhs = frobenius_inner(T, op.adjoint_apply(MarginalPair(y, x)))
            assert lhs == pytest.approx(rhs, abs=1e-12 * (1 + abs(lhs)))


def test_pinv_zero_operator_is_zero():
    op = ScaledMarginalOperator(np.zeros(3), np.zeros(2))
    out = op.pinv_apply(MarginalPair(np.array([4.0, 5.0]), np.array([1.0, 2.0, 3.0])))
    assert np.array_equal(out, np.zeros((2, 3)))


def test_pinv_e_zero_case():
    op = ScaledMarginalOperator(np.zeros(2), np.array([1.0, 0.0]))
    out = op.pinv_apply(MarginalPair(np.array([9.0, -3.0]), np.array([5.0, 7.0])))
    assert np.array_equal(out, [[5.0, 7.0], [0.0, 0.0]])


def test_pinv_f_zero_case():
    op = ScaledMarginalOperator(np.array([1.0, 0.0]), np.zeros(2))
    out = op.pinv_apply(MarginalPair(np.array([5.0, 7.0]), np.array([9.0, -3.0])))
    assert np.array_equal(out, [[5.0, 0.0], [7.0, 0.0]])


@pytest.mark.parametrize("mode", OPERATOR_MODES)
def test_penrose_conditions(mode):
    rng = np.random.default_rng(11)
    for _ in range(8):
        m = int(rng.integers(1, 7))
        n = int(rng.integers(1, 7))
        op = random_operator(rng, m, n, mode)
        assert penrose_violation(build_explicit(op), explicit_pinv(op)) <= 1e-10


def test_penrose_unit_weights_4x5():
    op = unit_operator(4, 5)
    assert penrose_violation(build_explicit(op), explicit_pinv(op)) <= 1e-10


def test_project_range_annihilates_orthogonal_direction():
    rng = np.random.default_rng(12)
    op = random_operator(rng, 3, 4, "generic")
    out = op.project_range(MarginalPair(op.f, -op.e))
    assert frobenius_norm(out.concat()[None, :]) <= 1e-12


def test_project_range_fixes_consistent_pair():
    op = unit_operator(4, 5)
    out = op.project_range(MarginalPair(DEMO_ROW_SUMS, DEMO_COL_SUMS))
    assert np.array_equal(out.row_part, DEMO_ROW_SUMS)
    assert np.array_equal(out.col_part, DEMO_COL_SUMS)


def test_project_range_degenerate_cases():
    y = np.array([1.0, 2.0])
    x = np.array([3.0, 4.0, 5.0])
    op = ScaledMarginalOperator(np.zeros(3), np.ones(2))
    out = op.project_range(MarginalPair(y, x))
    assert np.array_equal(out.row_part, np.zeros(2))
    assert np.array_equal(out.col_part, x)
    op = ScaledMarginalOperator(np.ones(3), np.zeros(2))
    out = op.project_range(MarginalPair(y, x))
    assert np.array_equal(out.row_part, y)
    assert np.array_equal(out.col_part, np.zeros(3))
    op = ScaledMarginalOperator(np.zeros(3), np.zeros(2))
    out = op.project_range(MarginalPair(y, x))
    assert not out.concat().any()


def test_project_range_idempotent_and_self_adjoint():
    rng = np.random.default_rng(13)
    for mode in OPERATOR_MODES:
        op = random_operator(rng, 3, 4, mode)
        for _ in range(10):
            p = MarginalPair(rng.normal(size=3), rng.normal(size=4))
            q = MarginalPair(rng.normal(size=3), rng.normal(size=4))
            Pp = op.project_range(p)
            PPp = op.project_range(Pp)
            assert np.max(np.abs(PPp.concat() - Pp.concat())) <= 1e-12
            # self-adjoint: <P p, q> = <p, P q>
            lhs = float(Pp.concat() @ q.concat())
            rhs = float(p.concat() @ op.project_range(q).concat())
            assert lhs == pytest.approx(rhs, abs=1e-12 * (1 + abs(lhs)))


def test_project_range_after_apply_is_identity():
    rng = np.random.default_rng(14)
    for mode in OPERATOR_MODES:
        op = random_operator(rng, 4, 3, mode)
        for _ in range(5):
            pair = op.apply(rng.normal(size=(4, 3)))
            out = op.project_range(pair)
            assert np.max(np.abs(out.concat() - pair.concat())) <= 1e-12


def test_project_range_adjoint_zero_operator():
    op = ScaledMarginalOperator(np.zeros(3), np.zeros(2))
    assert np.array_equal(op.project_range_adjoint(np.ones((2, 3))), np.zeros((2, 3)))


def test_project_range_adjoint_fixes_range_form():
    rng = np.random.default_rng(15)
    op = random_operator(rng, 3, 4, "generic")
    T = np.outer(rng.normal(size=3), op.e) + np.outer(op.f, rng.normal(size=4))
    out = op.project_range_adjoint(T)
    assert np.max(np.abs(out - T)) <= 1e-12


def test_project_range_adjoint_is_pinv_after_apply():
    rng = np.random.default_rng(16)
    for mode in OPERATOR_MODES:
        op = random_operator(rng, 4, 5, mode)
        for _ in range(5):
            T = rng.normal(size=(4, 5))
            composed = op.pinv_apply(op.apply(T))
            direct = op.project_range_adjoint(T)
            assert np.max(np.abs(composed - direct)) <= 1e-12


def test_norm_zero_operator():
    assert ScaledMarginalOperator(np.zeros(2), np.zeros(2)).norm() == 0.0


def test_norm_unit_weights():
    assert unit_operator(4, 5).norm() == 3.0


def test_norm_attained_on_rank_one():
    rng = np.random.default_rng(17)
    op = random_operator(rng, 4, 5, "generic")
    T = np.outer(op.f, op.e)
    pair = op.apply(T)
    ratio = float(np.sqrt(pair.row_part @ pair.row_part + pair.col_part @ pair.col_part))
    ratio /= frobenius_norm(T)
    assert ratio == pytest.approx(op.norm(), abs=1e-12 * op.norm())
