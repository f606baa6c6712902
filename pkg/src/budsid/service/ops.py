"""Operations behind both the CLI and the HTTP service.

Every op takes plain values and returns a JSON-ready dict, so the same code
answers an in-process CLI call and a POST handler.
"""

from __future__ import annotations

from pathlib import Path

from ..harness.evaluate import run_general, run_individual, run_loocv, window_sweep
from ..harness.prepare import (
    DEFAULT_PAIR_WINDOW,
    DEFAULT_SINGLE_WINDOW,
    load_filled,
    prepare,
)
from ..harness.reports import SWEEP_NAME, write_eval_outputs, write_sweep_csv
from ..learn.cnn import CnnModel, cnn_train, predict_proba
from ..learn.common import TrainConfig
from ..learn.modelio import load_model, save_model, serialize_model, serialize_quant
from ..learn.svm import SvmModel, svm_predict, svm_train
from ..magsim.dataset import (
    DatasetManifest,
    DoubleTapDesign,
    SingleTapDesign,
    simulate_dataset,
)
from ..magsim.labels import TapLabel
from ..magsim.link import LinkProfile, ble_channel
from ..magsim.profiles import default_profile
from ..magsim.scenario import scenario_preset
from ..magsim.trial import simulate_trial
from ..pipeline import (
    WindowConfig,
    double_tap_features,
    extract_window,
    forward_fill,
    minmax_normalize,
    polarity_compensate,
    stat_features,
)
from ..quant import QuantModel, bench_latency, quant_forward, quantize_dynamic

REGIMES = ("general", "individual", "loocv")


def _train_config(
    seed: int,
    epochs: int | None,
    batch_size: int | None,
    learning_rate: float | None,
    folds: int | None,
) -> TrainConfig:
    kwargs: dict = {"seed": seed}
    if epochs is not None:
        kwargs["epochs"] = epochs
    if batch_size is not None:
        kwargs["batch_size"] = batch_size
    if learning_rate is not None:
        kwargs["learning_rate"] = learning_rate
    if folds is not None:
        kwargs["folds"] = folds
    return TrainConfig(**kwargs)


def _window_cfg(kind: str, n_before: int | None, n_after: int | None) -> WindowConfig | None:
    if n_before is None and n_after is None:
        return None
    default = DEFAULT_SINGLE_WINDOW if kind == "single" else DEFAULT_PAIR_WINDOW
    return WindowConfig(
        n_before if n_before is not None else default.n_before,
        n_after if n_after is not None else default.n_after,
    )


def op_gen(
    kind: str,
    out_dir: str,
    participants: int | None = None,
    reps: int | None = None,
    seed: int = 0,
) -> dict:
    if kind == "single":
        design = SingleTapDesign(participants or 24, reps or 20)
    elif kind == "double":
        design = DoubleTapDesign(participants or 16, reps or 40)
    else:
        raise ValueError(f"kind must be 'single' or 'double', got {kind!r}")
    manifest = simulate_dataset(design, seed, Path(out_dir))
    return {
        "kind": kind,
        "out_dir": str(Path(out_dir)),
        "trials": len(manifest.records),
        "participants": design.participants,
        "reps": design.reps,
        "seed": seed,
    }


def op_train(
    dataset: str,
    model: str,
    out: str,
    seed: int = 0,
    epochs: int | None = None,
    batch_size: int | None = None,
    learning_rate: float | None = None,
    folds: int | None = None,
    n_before: int | None = None,
    n_after: int | None = None,
) -> dict:
    filled = load_filled(DatasetManifest.load(Path(dataset)))
    data = prepare(filled, _window_cfg(filled.kind, n_before, n_after))
    cfg = _train_config(seed, epochs, batch_size, learning_rate, folds)
    result: dict = {
        "model": model,
        "kind": data.kind,
        "dataset_size": len(data),
        "out": str(Path(out)),
        "seed": seed,
    }
    if model == "cnn":
        trained = cnn_train(data.windows, data.labels, cfg)
        save_model(Path(out), trained.model)
        result.update(
            {
                "parameters": trained.model.parameter_total(),
                "train_accuracy": trained.train_accuracy,
                "val_accuracy": trained.val_accuracy,
                "test_accuracy": trained.test_accuracy,
                "epochs_run": len(trained.history.train_loss),
                "file_bytes": len(serialize_model(trained.model)),
            }
        )
    elif model == "svm":
        svm = svm_train(data.features, data.labels, folds=cfg.folds, seed=cfg.seed)
        save_model(Path(out), svm)
        result.update(
            {
                "c": svm.c,
                "gamma": svm.gamma,
                "cv_accuracy": svm.cv_accuracy,
                "support_vectors": int(sum(p.support_vectors.shape[0] for p in svm.problems)),
                "file_bytes": len(serialize_model(svm)),
            }
        )
    else:
        raise ValueError(f"model must be 'cnn' or 'svm', got {model!r}")
    return result


def op_eval(
    dataset: str,
    regime: str,
    out_dir: str,
    models: tuple[str, ...] = ("cnn", "svm"),
    seed: int = 0,
    epochs: int | None = None,
    batch_size: int | None = None,
    learning_rate: float | None = None,
    folds: int | None = None,
    posture: str | None = None,
    hand: str | None = None,
) -> dict:
    if regime not in REGIMES:
        raise ValueError(f"regime must be one of {REGIMES}, got {regime!r}")
    bad = [m for m in models if m not in ("cnn", "svm")]
    if bad:
        raise ValueError(f"unknown models {bad}; choose from cnn, svm")
    data = prepare(load_filled(DatasetManifest.load(Path(dataset))))
    data = data.filter(posture=posture, hand=hand)
    if len(data) == 0:
        raise ValueError("no trials left after posture/hand filtering")
    cfg = _train_config(seed, epochs, batch_size, learning_rate, folds)
    runner = {"general": run_general, "individual": run_individual, "loocv": run_loocv}[regime]
    report = runner(data, cfg, models=tuple(models))
    if posture or hand:
        report.details["filter"] = {"posture": posture, "hand": hand}
    written = write_eval_outputs(Path(out_dir), report)
    payload = report.to_dict()
    payload["written"] = written
    return payload


def op_sweep(
    dataset: str,
    out_dir: str,
    seed: int = 0,
    epochs: int | None = None,
    batch_size: int | None = None,
    learning_rate: float | None = None,
) -> dict:
    filled = load_filled(DatasetManifest.load(Path(dataset)))
    cfg = _train_config(seed, epochs, batch_size, learning_rate, None)
    rows = window_sweep(filled, cfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = write_sweep_csv(out / SWEEP_NAME, rows)
    return {"rows": rows, "written": str(path), "seed": seed}


def op_quantize(model: str, out: str) -> dict:
    loaded = load_model(Path(model))
    if not isinstance(loaded, CnnModel):
        raise ValueError("only a float CNN model file can be quantized")
    qmodel = quantize_dynamic(loaded)
    save_model(Path(out), qmodel)
    float_bytes = len(serialize_model(loaded))
    quant_bytes = len(serialize_quant(qmodel))
    return {
        "out": str(Path(out)),
        "float_bytes": float_bytes,
        "quant_bytes": quant_bytes,
        "ratio": float_bytes / quant_bytes,
        "scales": qmodel.scales,
    }


def _bench_trace(seed: int):
    label = TapLabel("index", "right", "sit")
    trace = simulate_trial(label, default_profile(), scenario_preset("static"), seed)
    received = ble_channel(trace, LinkProfile.single_tap_study(), seed)
    return received, trace.press_times()[0]


def op_bench(model: str, n_runs: int = 200, seed: int = 0) -> dict:
    loaded = load_model(Path(model))
    received, center = _bench_trace(seed)

    if isinstance(loaded, (CnnModel, QuantModel)):
        n = loaded.n_samples
        wc = WindowConfig(n // 2, n - n // 2)
    else:
        assert isinstance(loaded, SvmModel)
        wc = DEFAULT_SINGLE_WINDOW if loaded.n_features == 18 else DEFAULT_PAIR_WINDOW

    def preprocess(raw):
        series = forward_fill(raw, t_start=0.0)
        window = minmax_normalize(polarity_compensate(extract_window(series, center, wc), "right"))
        if isinstance(loaded, SvmModel):
            feats = stat_features(window) if loaded.n_features == 18 else double_tap_features(window)
            return feats.values
        return window.data

    if isinstance(loaded, QuantModel):
        predict_fn = lambda w: quant_forward(loaded, w)  # noqa: E731
        model_kind = "quant"
    elif isinstance(loaded, CnnModel):
        predict_fn = lambda w: predict_proba(loaded, w)  # noqa: E731
        model_kind = "cnn"
    else:
        predict_fn = lambda f: svm_predict(loaded, f)  # noqa: E731
        model_kind = "svm"

    report = bench_latency(predict_fn, preprocess, received, n_runs=n_runs)
    return {
        "model": str(Path(model)),
        "model_kind": model_kind,
        "n_runs": report.n_runs,
        "preprocess_ms_mean": report.preprocess_ms_mean,
        "preprocess_ms_sd": report.preprocess_ms_sd,
        "predict_ms_mean": report.predict_ms_mean,
        "predict_ms_sd": report.predict_ms_sd,
        "total_ms_mean": report.total_ms_mean,
        "seed": seed,
    }
