import math

import numpy as np
import pytest

from robustsel.linalg import (
    NotSPDError,
    RankDeficiencyError,
    invert_spd,
    log_det,
    solve_least_squares,
    trace,
)


def test_identity_design():
    y = np.array([3.0, -1.0, 0.5])
    assert np.allclose(solve_least_squares(np.eye(3), y), y)


def test_column_of_ones_gives_mean():
    b = solve_least_squares(np.ones((3, 1)), np.array([1.0, 2.0, 3.0]))
    assert b == pytest.approx([2.0])


def test_against_normal_equations():
    rng = np.random.default_rng(7)
    X = rng.normal(size=(20, 3))
    y = rng.normal(size=20)
    b = solve_least_squares(X, y)
    # oracle: explicit normal-equations solve
    b_ne = np.linalg.solve(X.T @ X, X.T @ y)
    assert np.allclose(b, b_ne, atol=1e-10)
    # residual orthogonal to the column space
    assert np.abs(X.T @ (y - X @ b)).max() < 1e-8


def test_noise_free_recovery():
    rng = np.random.default_rng(11)
    X = rng.normal(size=(40, 4))
    b_true = np.array([2.0, -1.0, 0.0, 3.5])
    b = solve_least_squares(X, X @ b_true)
    assert np.allclose(b, b_true, atol=1e-8)


def test_rank_deficiency_detected():
    X = np.ones((5, 2))  # duplicated column
    with pytest.raises(RankDeficiencyError):
        solve_least_squares(X, np.zeros(5))


def test_underdetermined_rejected():
    with pytest.raises(RankDeficiencyError):
        solve_least_squares(np.ones((2, 3)), np.zeros(2))


def test_invert_identity_and_diagonal():
    assert np.allclose(invert_spd(np.eye(3)), np.eye(3))
    assert np.allclose(invert_spd(np.diag([2.0, 4.0])), np.diag([0.5, 0.25]))


def test_invert_random_spd():
    rng = np.random.default_rng(3)
    B = rng.normal(size=(4, 4))
    M = B.T @ B + np.eye(4)
    Minv = invert_spd(M)
    assert np.abs(M @ Minv - np.eye(4)).max() < 1e-8
    # involution within looser tolerance
    assert np.abs(invert_spd(Minv) - M).max() < 1e-6


def test_invert_rejects_asymmetric():
    M = np.array([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(NotSPDError):
        invert_spd(M)


def test_invert_rejects_indefinite():
    with pytest.raises(NotSPDError):
        invert_spd(np.diag([1.0, -1.0]))


def test_log_det_values():
    assert log_det(np.eye(4)) == pytest.approx(0.0, abs=1e-12)
    assert log_det(np.diag([math.e, math.e**2])) == pytest.approx(3.0, rel=1e-10)
    corr = np.array([[1.0, 0.5], [0.5, 1.0]])
    assert log_det(corr) == pytest.approx(math.log(0.75), rel=1e-10)


def test_log_det_inverse_relation():
    rng = np.random.default_rng(5)
    B = rng.normal(size=(3, 3))
    M = B.T @ B + 0.5 * np.eye(3)
    assert log_det(M) == pytest.approx(-log_det(invert_spd(M)), abs=1e-8)


def test_trace():
    assert trace(np.eye(3)) == 3.0
    assert trace(np.diag([1.0, 2.0, 3.0])) == 6.0
    rng = np.random.default_rng(9)
    M = rng.normal(size=(3, 3))
    assert trace(M) == pytest.approx(M[0, 0] + M[1, 1] + M[2, 2])
    with pytest.raises(ValueError):
        trace(np.ones((2, 3)))
