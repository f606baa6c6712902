"""One-vs-one RBF-kernel SVM trained by sequential minimal optimization.

The dual of each binary problem is solved with maximal-violating-pair working
set selection on a precomputed kernel matrix; (C, gamma) come from stratified
k-fold grid search with ties broken toward the smaller values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .common import stratified_kfold

KKT_TOL = 1e-3
DEFAULT_C_GRID = (0.1, 1.0, 10.0, 100.0)
DEFAULT_GAMMA_GRID = (0.01, 0.1, 1.0 / 18.0, 1.0)
SV_KEEP_THRESHOLD = 1e-10
MAX_SMO_ITER = 200_000


def _pairwise_sq_dists(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d2 = np.sum(a * a, axis=1)[:, None] + np.sum(b * b, axis=1)[None, :] - 2.0 * (a @ b.T)
    return np.maximum(d2, 0.0)


def rbf_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    return np.exp(-gamma * _pairwise_sq_dists(np.atleast_2d(a), np.atleast_2d(b)))


def smo_solve(kernel: np.ndarray, y: np.ndarray, c: float, tol: float = KKT_TOL):
    """Minimize the SVM dual on a precomputed kernel to the given KKT gap.

    Returns (alpha, bias, kkt_gap). y must be +/-1.
    """
    n = y.shape[0]
    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of 1/2 a'Qa - sum(a) at a = 0
    vals_sign = -y.astype(np.float64)
    gap = np.inf
    for _ in range(MAX_SMO_ITER):
        vals = vals_sign * grad
        up = ((y > 0) & (alpha < c)) | ((y < 0) & (alpha > 0))
        low = ((y < 0) & (alpha < c)) | ((y > 0) & (alpha > 0))
        up_vals = np.where(up, vals, -np.inf)
        low_vals = np.where(low, vals, np.inf)
        i = int(np.argmax(up_vals))
        j = int(np.argmin(low_vals))
        gap = up_vals[i] - low_vals[j]
        if gap <= tol:
            break
        quad = max(kernel[i, i] + kernel[j, j] - 2.0 * kernel[i, j], 1e-12)
        step = gap / quad
        # box limits along the feasible direction (da_i = y_i t, da_j = -y_j t)
        hi_i = c - alpha[i] if y[i] > 0 else alpha[i]
        hi_j = alpha[j] if y[j] > 0 else c - alpha[j]
        step = min(step, hi_i, hi_j)
        alpha[i] += y[i] * step
        alpha[j] -= y[j] * step
        grad += step * y * (kernel[:, i] - kernel[:, j])
    free = (alpha > 1e-9) & (alpha < c - 1e-9)
    vals = vals_sign * grad
    if np.any(free):
        bias = float(np.mean(vals[free]))
    else:
        up_vals = np.where(up, vals, -np.inf)
        low_vals = np.where(low, vals, np.inf)
        bias = float((up_vals.max() + low_vals.min()) / 2.0)
    return alpha, bias, float(gap)


@dataclass
class BinaryProblem:
    """Decision function between one ordered class pair: positive wins the vote."""

    positive: int
    negative: int
    support_vectors: np.ndarray
    dual_coef: np.ndarray  # alpha_i * y_i
    bias: float

    def margins(self, kernel_rows: np.ndarray) -> np.ndarray:
        return kernel_rows @ self.dual_coef + self.bias


@dataclass
class SvmModel:
    n_features: int
    classes: np.ndarray
    c: float
    gamma: float
    problems: list[BinaryProblem]
    cv_accuracy: float
    cv_table: list[tuple[float, float, float]] = field(default_factory=list)  # (C, gamma, acc)

    def sv_matrix(self) -> np.ndarray:
        return np.vstack([p.support_vectors for p in self.problems])


def _fit_pairs(kernel: np.ndarray, labels: np.ndarray, classes: np.ndarray, c: float):
    """SMO per class pair on a shared precomputed kernel; returns per-pair pieces."""
    fitted = []
    for a, b in combinations(classes.tolist(), 2):
        rows = np.flatnonzero((labels == a) | (labels == b))
        y = np.where(labels[rows] == a, 1.0, -1.0)
        alpha, bias, _ = smo_solve(kernel[np.ix_(rows, rows)], y, c)
        keep = alpha > SV_KEEP_THRESHOLD
        fitted.append((a, b, rows[keep], (alpha * y)[keep], bias))
    return fitted


def _vote(classes: np.ndarray, pair_margins: list[tuple[int, int, np.ndarray]], n: int) -> np.ndarray:
    index = {int(cls): k for k, cls in enumerate(classes)}
    votes = np.zeros((n, classes.shape[0]))
    margin_sum = np.zeros((n, classes.shape[0]))
    for a, b, margin in pair_margins:
        pos_wins = margin > 0
        votes[np.arange(n), np.where(pos_wins, index[a], index[b])] += 1.0
        margin_sum[:, index[a]] += margin
        margin_sum[:, index[b]] -= margin
    # primary: votes; tie-break: summed signed margins; final: smaller class id
    pred = np.empty(n, dtype=classes.dtype)
    for r in range(n):
        top = np.flatnonzero(votes[r] == votes[r].max())
        if top.size > 1:
            top = top[margin_sum[r, top] == margin_sum[r, top].max()]
        pred[r] = classes[top[0]]
    return pred


def _predict_on_kernel(
    fitted, classes: np.ndarray, kernel_test_train: np.ndarray
) -> np.ndarray:
    pair_margins = []
    for a, b, rows, coef, bias in fitted:
        pair_margins.append((a, b, kernel_test_train[:, rows] @ coef + bias))
    return _vote(classes, pair_margins, kernel_test_train.shape[0])


def svm_train(
    features: np.ndarray,
    labels: np.ndarray,
    c_grid: tuple[float, ...] = DEFAULT_C_GRID,
    gamma_grid: tuple[float, ...] = DEFAULT_GAMMA_GRID,
    folds: int = 5,
    seed: int = 0,
) -> SvmModel:
    """Grid-search (C, gamma) by stratified k-fold accuracy, then refit on everything."""
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if features.ndim != 2 or features.shape[0] != labels.shape[0]:
        raise ValueError("features must be (n, d) aligned with labels")
    if not c_grid or not gamma_grid:
        raise ValueError("C and gamma grids must be nonempty")
    if any(c <= 0 for c in c_grid) or any(g <= 0 for g in gamma_grid):
        raise ValueError("C and gamma values must be positive")
    classes, counts = np.unique(labels, return_counts=True)
    if classes.shape[0] < 2:
        raise ValueError("need at least two classes")
    if counts.min() < folds:
        raise ValueError(f"smallest class has {counts.min()} examples; need >= folds ({folds})")

    hits = {(c, g): 0 for c in c_grid for g in gamma_grid}
    total_test = 0
    for train_idx, test_idx in stratified_kfold(labels, folds, seed):
        x_tr, y_tr = features[train_idx], labels[train_idx]
        x_te, y_te = features[test_idx], labels[test_idx]
        d2_tr = _pairwise_sq_dists(x_tr, x_tr)
        d2_te = _pairwise_sq_dists(x_te, x_tr)
        total_test += y_te.shape[0]
        for gamma in gamma_grid:
            k_tr = np.exp(-gamma * d2_tr)
            k_te = np.exp(-gamma * d2_te)
            for c in c_grid:
                fitted = _fit_pairs(k_tr, y_tr, classes, c)
                pred = _predict_on_kernel(fitted, classes, k_te)
                hits[(c, gamma)] += int(np.sum(pred == y_te))

    cv_table = [(c, g, hits[(c, g)] / total_test) for c in c_grid for g in gamma_grid]
    best_c, best_gamma, best_acc = max(
        sorted(cv_table, key=lambda row: (row[0], row[1])), key=lambda row: row[2]
    )

    kernel = rbf_kernel(features, features, best_gamma)
    problems = [
        BinaryProblem(a, b, features[rows], coef, bias)
        for a, b, rows, coef, bias in _fit_pairs(kernel, labels, classes, best_c)
    ]
    return SvmModel(
        n_features=features.shape[1],
        classes=classes,
        c=best_c,
        gamma=best_gamma,
        problems=problems,
        cv_accuracy=best_acc,
        cv_table=cv_table,
    )


def svm_predict_batch(model: SvmModel, features: np.ndarray) -> np.ndarray:
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    if features.shape[1] != model.n_features:
        raise ValueError(f"expected {model.n_features} features, got {features.shape[1]}")
    pair_margins = []
    for problem in model.problems:
        rows = rbf_kernel(features, problem.support_vectors, model.gamma)
        pair_margins.append((problem.positive, problem.negative, problem.margins(rows)))
    return _vote(model.classes, pair_margins, features.shape[0])


def svm_predict(model: SvmModel, feature_vector: np.ndarray) -> int:
    return int(svm_predict_batch(model, np.asarray(feature_vector)[None, :])[0])
