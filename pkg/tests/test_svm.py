"""SVM: SMO optimality conditions, grid selection, multiclass voting."""

from __future__ import annotations

import numpy as np
import pytest

from budsid.learn import (
    KKT_TOL,
    rbf_kernel,
    smo_solve,
    svm_predict,
    svm_predict_batch,
    svm_train,
)


def _blobs(n_per_class: int, centers, sd: float, seed: int):
    rng = np.random.Generator(np.random.PCG64(seed))
    xs, ys = [], []
    for k, center in enumerate(centers):
        xs.append(np.asarray(center) + sd * rng.standard_normal((n_per_class, len(center))))
        ys.append(np.full(n_per_class, k))
    x = np.vstack(xs)
    y = np.concatenate(ys)
    order = rng.permutation(y.shape[0])
    return x[order], y[order]


def test_two_point_dual_has_known_solution() -> None:
    # one point per class at unit distance: alpha* = 1/(1 - k), bias 0 by symmetry
    x = np.array([[0.0, 0.0], [1.0, 0.0]])
    y = np.array([1.0, -1.0])
    kernel = rbf_kernel(x, x, gamma=1.0)
    alpha, bias, gap = smo_solve(kernel, y, c=10.0)
    expected = 1.0 / (1.0 - np.exp(-1.0))
    assert alpha == pytest.approx([expected, expected], rel=1e-6)
    assert bias == pytest.approx(0.0, abs=1e-9)
    assert gap <= KKT_TOL


def test_smo_satisfies_kkt_invariants() -> None:
    x, y01 = _blobs(40, [(0.0, 0.0), (1.5, 1.5)], sd=0.6, seed=3)
    y = np.where(y01 == 0, 1.0, -1.0)
    c = 1.0
    kernel = rbf_kernel(x, x, gamma=0.5)
    alpha, bias, gap = smo_solve(kernel, y, c)
    assert gap <= KKT_TOL
    assert np.all(alpha >= -1e-12)
    assert np.all(alpha <= c + 1e-12)
    assert abs(np.dot(alpha, y)) <= 1e-6
    # free support vectors sit on the margin
    free = (alpha > 1e-6) & (alpha < c - 1e-6)
    if np.any(free):
        margins = y[free] * (kernel[free] @ (alpha * y) + bias)
        assert np.max(np.abs(margins - 1.0)) <= 5e-3


def test_duplicate_points_do_not_break_the_solver() -> None:
    x = np.array([[0.0, 0.0], [0.0, 0.0], [2.0, 0.0], [2.0, 0.0]])
    y = np.array([1.0, 1.0, -1.0, -1.0])
    alpha, bias, gap = smo_solve(rbf_kernel(x, x, gamma=1.0), y, c=5.0)
    assert gap <= KKT_TOL
    assert abs(np.dot(alpha, y)) <= 1e-6


def test_separable_blobs_classified_perfectly() -> None:
    x, y = _blobs(25, [(0.0, 0.0), (4.0, 0.0), (0.0, 4.0)], sd=0.3, seed=1)
    model = svm_train(x, y, folds=5, seed=0)
    assert np.array_equal(model.classes, np.array([0, 1, 2]))
    assert np.all(svm_predict_batch(model, x) == y)
    assert model.cv_accuracy == 1.0
    assert len(model.problems) == 3
    for problem in model.problems:
        assert problem.support_vectors.shape[0] >= 1
        assert np.all(np.abs(problem.dual_coef) <= model.c + 1e-9)


def test_xor_needs_the_kernel_and_gets_solved() -> None:
    rng = np.random.Generator(np.random.PCG64(8))
    corners = np.array([[0, 0], [1, 1], [0, 1], [1, 0]], dtype=float)
    labels = np.array([0, 0, 1, 1])
    x = np.repeat(corners, 15, axis=0) + 0.05 * rng.standard_normal((60, 2))
    y = np.repeat(labels, 15)
    model = svm_train(x, y, folds=5, seed=0)
    assert np.mean(svm_predict_batch(model, x) == y) == 1.0
    assert model.cv_accuracy >= 0.95


def test_grid_ties_prefer_smaller_c_then_gamma() -> None:
    # far-apart blobs: every grid cell scores 100%, so the smallest pair must win
    x, y = _blobs(20, [(0.0, 0.0), (50.0, 0.0)], sd=0.1, seed=4)
    model = svm_train(x, y, folds=4, seed=0)
    perfect = [row for row in model.cv_table if row[2] == model.cv_accuracy]
    assert (model.c, model.gamma) == min((c, g) for c, g, _ in perfect)
    assert model.c == 0.1
    assert model.gamma == 0.01


def test_cv_table_covers_the_full_grid() -> None:
    x, y = _blobs(12, [(0.0, 0.0), (3.0, 0.0)], sd=0.3, seed=5)
    model = svm_train(x, y, folds=3, seed=0)
    assert len(model.cv_table) == 16
    assert {row[0] for row in model.cv_table} == {0.1, 1.0, 10.0, 100.0}
    assert all(0.0 <= row[2] <= 1.0 for row in model.cv_table)


def test_training_is_deterministic() -> None:
    x, y = _blobs(15, [(0.0, 0.0), (2.0, 1.0), (4.0, 0.0)], sd=0.5, seed=6)
    a = svm_train(x, y, folds=3, seed=2)
    b = svm_train(x, y, folds=3, seed=2)
    assert (a.c, a.gamma, a.cv_accuracy) == (b.c, b.gamma, b.cv_accuracy)
    for pa, pb in zip(a.problems, b.problems):
        assert np.array_equal(pa.support_vectors, pb.support_vectors)
        assert np.array_equal(pa.dual_coef, pb.dual_coef)
        assert pa.bias == pb.bias


def test_input_validation() -> None:
    x, y = _blobs(10, [(0.0, 0.0), (3.0, 0.0)], sd=0.3, seed=7)
    with pytest.raises(ValueError, match="grids"):
        svm_train(x, y, c_grid=(), folds=2)
    with pytest.raises(ValueError, match="positive"):
        svm_train(x, y, c_grid=(0.0,), folds=2)
    with pytest.raises(ValueError, match="two classes"):
        svm_train(x, np.zeros_like(y), folds=2)
    with pytest.raises(ValueError, match="folds"):
        svm_train(x, y, folds=11)
    model = svm_train(x, y, folds=2)
    with pytest.raises(ValueError, match="features"):
        svm_predict(model, np.zeros(5))
    assert svm_predict(model, x[0]) == y[0]
