"""Training configuration and deterministic stratified splitting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SPLIT_STREAM_TAG = 0x5317


@dataclass(frozen=True)
class TrainConfig:
    """Split ratios are train:val:test; folds drive grid-search cross-validation."""

    split: tuple[float, float, float] = (0.6, 0.2, 0.2)
    folds: int = 5
    epochs: int = 100
    batch_size: int = 32
    learning_rate: float = 1e-2
    seed: int = 0

    def __post_init__(self) -> None:
        if len(self.split) != 3 or any(r < 0 for r in self.split):
            raise ValueError("split must be three nonnegative ratios")
        if abs(sum(self.split) - 1.0) > 1e-9:
            raise ValueError(f"split ratios must sum to 1, got {sum(self.split)}")
        if self.split[0] <= 0:
            raise ValueError("training ratio must be positive")
        if self.folds < 2:
            raise ValueError("folds must be >= 2")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")


def _split_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), _SPLIT_STREAM_TAG])))


def stratified_split(
    labels: np.ndarray, ratios: tuple[float, float, float], seed: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Shuffle within each class and cut at the ratio boundaries.

    Every index lands in exactly one part; rounding remainders go to the
    training part so small classes never starve the part that needs them most.
    """
    labels = np.asarray(labels)
    rng = _split_rng(seed)
    train, val, test = [], [], []
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        rng.shuffle(idx)
        n = idx.shape[0]
        n_val = int(round(n * ratios[1]))
        n_test = int(round(n * ratios[2]))
        n_val = min(n_val, n)
        n_test = min(n_test, n - n_val)
        val.append(idx[:n_val])
        test.append(idx[n_val : n_val + n_test])
        train.append(idx[n_val + n_test :])
    return (
        np.sort(np.concatenate(train)),
        np.sort(np.concatenate(val)),
        np.sort(np.concatenate(test)),
    )


def stratified_kfold(labels: np.ndarray, folds: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Round-robin class-stratified folds; returns (train_idx, test_idx) per fold."""
    labels = np.asarray(labels)
    if folds < 2:
        raise ValueError("folds must be >= 2")
    rng = _split_rng(seed)
    assignment = np.empty(labels.shape[0], dtype=np.int64)
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        rng.shuffle(idx)
        assignment[idx] = np.arange(idx.shape[0]) % folds
    out = []
    for k in range(folds):
        test = np.flatnonzero(assignment == k)
        train = np.flatnonzero(assignment != k)
        if test.size == 0 or train.size == 0:
            raise ValueError(f"fold {k} is empty; too many folds for the class sizes")
        out.append((train, test))
    return out


def accuracy(predictions: np.ndarray, labels: np.ndarray) -> float:
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    if predictions.shape != labels.shape:
        raise ValueError("predictions and labels must have matching shape")
    if labels.size == 0:
        raise ValueError("cannot score an empty set")
    return float(np.mean(predictions == labels))
