"""Evaluation regimes: pooled general split, per-user models, and
leave-one-participant-out cross-validation, plus the window-length sweep.

The CNN consumes normalized windows; the SVM consumes the statistical
features. Within a regime both models share the same held-out test rows, so
their accuracies are directly comparable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..learn.cnn import predict as cnn_predict
from ..learn.cnn import cnn_train
from ..learn.common import TrainConfig, accuracy, stratified_split
from ..learn.svm import svm_predict_batch, svm_train
from ..pipeline import WindowConfig
from .prepare import FilledDataset, PreparedDataset, prepare

DEFAULT_MODELS = ("cnn", "svm")

# nBefore/nAfter sweep grid: three symmetric spans and their one-sided halves
DEFAULT_SWEEP = (
    WindowConfig(30, 30),
    WindowConfig(40, 40),
    WindowConfig(50, 50),
    WindowConfig(30, 0),
    WindowConfig(40, 0),
    WindowConfig(50, 0),
    WindowConfig(0, 30),
    WindowConfig(0, 40),
    WindowConfig(0, 50),
)

MIN_PER_CLASS_INDIVIDUAL = 10


def _confusion(n_classes: int, y_true: np.ndarray, y_pred: np.ndarray) -> np.ndarray:
    counts = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(counts, (y_true, y_pred), 1)
    return counts


def _normalize_rows(counts: np.ndarray) -> list[list[float]]:
    sums = counts.sum(axis=1, keepdims=True)
    safe = np.where(sums == 0, 1, sums)
    return (counts / safe).tolist()


@dataclass
class EvalReport:
    regime: str
    kind: str
    class_names: list[str]
    seed: int
    dataset_size: int
    window: dict
    models: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "regime": self.regime,
            "kind": self.kind,
            "class_names": self.class_names,
            "seed": self.seed,
            "dataset_size": self.dataset_size,
            "window": self.window,
            "models": self.models,
            "details": self.details,
        }


def _report_skeleton(regime: str, data: PreparedDataset, cfg: TrainConfig) -> EvalReport:
    return EvalReport(
        regime=regime,
        kind=data.kind,
        class_names=list(data.class_names),
        seed=cfg.seed,
        dataset_size=len(data),
        window={
            "n_before": data.window_cfg.n_before,
            "n_after": data.window_cfg.n_after,
            "seconds": data.window_cfg.seconds,
        },
    )


def _fit_both(
    data: PreparedDataset,
    train_idx: np.ndarray,
    val_idx: np.ndarray,
    test_idx: np.ndarray,
    cfg: TrainConfig,
    models: tuple[str, ...],
):
    """Train each requested model and predict the shared test rows."""
    n_classes = len(data.class_names)
    out = {}
    if "cnn" in models:
        model, _ = _cnn_fit_parts(data, train_idx, val_idx, n_classes, cfg)
        out["cnn"] = (cnn_predict(model, data.windows[test_idx]), model)
    if "svm" in models:
        pool = np.sort(np.concatenate([train_idx, val_idx]))
        svm = svm_train(
            data.features[pool], data.labels[pool], folds=cfg.folds, seed=cfg.seed
        )
        out["svm"] = (svm_predict_batch(svm, data.features[test_idx]), svm)
    return out


def _cnn_fit_parts(data, train_idx, val_idx, n_classes, cfg):
    from ..learn.cnn import cnn_fit

    return cnn_fit(
        data.windows[train_idx],
        data.labels[train_idx],
        data.windows[val_idx],
        data.labels[val_idx],
        n_classes,
        cfg,
    )


def run_general(
    data: PreparedDataset, cfg: TrainConfig, models: tuple[str, ...] = DEFAULT_MODELS
) -> EvalReport:
    """One pooled stratified split; every participant appears on both sides."""
    report = _report_skeleton("general", data, cfg)
    n_classes = len(data.class_names)
    train_idx, val_idx, test_idx = stratified_split(data.labels, cfg.split, cfg.seed)
    y_test = data.labels[test_idx]
    fitted = _fit_both(data, train_idx, val_idx, test_idx, cfg, models)
    for name, (pred, model) in fitted.items():
        counts = _confusion(n_classes, y_test, pred)
        entry = {
            "accuracy": accuracy(pred, y_test),
            "test_count": int(test_idx.size),
            "confusion": counts.tolist(),
            "confusion_normalized": _normalize_rows(counts),
        }
        if name == "svm":
            entry["c"] = model.c
            entry["gamma"] = model.gamma
            entry["cv_accuracy"] = model.cv_accuracy
        report.models[name] = entry
    report.details["split"] = {
        "train": int(train_idx.size),
        "val": int(val_idx.size),
        "test": int(test_idx.size),
    }
    return report


def run_individual(
    data: PreparedDataset,
    cfg: TrainConfig,
    models: tuple[str, ...] = DEFAULT_MODELS,
    min_per_class: int = MIN_PER_CLASS_INDIVIDUAL,
) -> EvalReport:
    """One model per participant on that participant's own split."""
    report = _report_skeleton("individual", data, cfg)
    n_classes = len(data.class_names)
    per_model: dict[str, dict] = {
        name: {"per_participant": {}, "confusion": np.zeros((n_classes, n_classes), np.int64)}
        for name in models
    }
    skipped = {}
    for pid in sorted(set(data.participants.tolist())):
        part = data.subset(data.participants == pid)
        counts = np.bincount(part.labels, minlength=n_classes)
        if counts.min() < min_per_class:
            skipped[pid] = (
                f"only {int(counts.min())} examples in the smallest class; "
                f"need {min_per_class}"
            )
            continue
        train_idx, val_idx, test_idx = stratified_split(part.labels, cfg.split, cfg.seed)
        fitted = _fit_both(part, train_idx, val_idx, test_idx, cfg, models)
        y_test = part.labels[test_idx]
        for name, (pred, _) in fitted.items():
            per_model[name]["per_participant"][pid] = accuracy(pred, y_test)
            per_model[name]["confusion"] += _confusion(n_classes, y_test, pred)
    if skipped:
        report.details["skipped"] = skipped
    for name in models:
        scores = list(per_model[name]["per_participant"].values())
        if not scores:
            raise ValueError("all participants were skipped; nothing to evaluate")
        counts = per_model[name]["confusion"]
        report.models[name] = {
            "per_participant": per_model[name]["per_participant"],
            "mean_accuracy": float(np.mean(scores)),
            "sd_accuracy": float(np.std(scores)),
            "confusion": counts.tolist(),
            "confusion_normalized": _normalize_rows(counts),
        }
    return report


def run_loocv(
    data: PreparedDataset, cfg: TrainConfig, models: tuple[str, ...] = DEFAULT_MODELS
) -> EvalReport:
    """Hold each participant out entirely; train on everyone else."""
    report = _report_skeleton("loocv", data, cfg)
    n_classes = len(data.class_names)
    pids = sorted(set(data.participants.tolist()))
    if len(pids) < 2:
        raise ValueError("leave-one-out needs at least 2 participants")
    # share of the training pool reserved for early stopping, from the cfg ratios
    val_frac = cfg.split[1] / (cfg.split[0] + cfg.split[1])
    per_model = {
        name: {"folds": [], "confusion": np.zeros((n_classes, n_classes), np.int64)}
        for name in models
    }
    for pid in pids:
        held_out = data.participants == pid
        pool = data.subset(~held_out)
        test = data.subset(held_out)
        assert not set(pool.participants.tolist()) & set(test.participants.tolist())
        train_idx, val_idx, _ = stratified_split(
            pool.labels, (1.0 - val_frac, val_frac, 0.0), cfg.seed
        )
        test_idx = np.arange(len(test))
        merged = _merge_pool_and_test(pool, test)
        fitted = _fit_both(merged, train_idx, val_idx, len(pool) + test_idx, cfg, models)
        for name, (pred, _) in fitted.items():
            acc = accuracy(pred, test.labels)
            per_model[name]["folds"].append(
                {
                    "test_participant": pid,
                    "train_participants": sorted(set(pool.participants.tolist())),
                    "test_count": int(len(test)),
                    "accuracy": acc,
                }
            )
            per_model[name]["confusion"] += _confusion(n_classes, test.labels, pred)
    for name in models:
        folds = per_model[name]["folds"]
        scores = [f["accuracy"] for f in folds]
        counts = per_model[name]["confusion"]
        report.models[name] = {
            "folds": folds,
            "mean_accuracy": float(np.mean(scores)),
            "sd_accuracy": float(np.std(scores)),
            "confusion": counts.tolist(),
            "confusion_normalized": _normalize_rows(counts),
        }
    return report


def _merge_pool_and_test(pool: PreparedDataset, test: PreparedDataset) -> PreparedDataset:
    return PreparedDataset(
        kind=pool.kind,
        window_cfg=pool.window_cfg,
        windows=np.concatenate([pool.windows, test.windows]),
        features=np.concatenate([pool.features, test.features]),
        labels=np.concatenate([pool.labels, test.labels]),
        participants=np.concatenate([pool.participants, test.participants]),
        hands=np.concatenate([pool.hands, test.hands]),
        postures=np.concatenate([pool.postures, test.postures]),
        class_names=pool.class_names,
    )


def window_sweep(
    filled: FilledDataset,
    cfg: TrainConfig,
    window_cfgs: tuple[WindowConfig, ...] = DEFAULT_SWEEP,
) -> list[dict]:
    """General-regime CNN accuracy at each window geometry, same data and seed."""
    rows = []
    for wc in window_cfgs:
        data = prepare(filled, wc)
        report = run_general(data, cfg, models=("cnn",))
        rows.append(
            {
                "n_before": wc.n_before,
                "n_after": wc.n_after,
                "n_samples": wc.n_samples,
                "seconds": wc.seconds,
                "accuracy": report.models["cnn"]["accuracy"],
            }
        )
    return rows
