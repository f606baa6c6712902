"""Post-training dynamic-range quantization of the tap classifier.

Weight tensors go to int8 with one symmetric scale per tensor (max|w|/127);
biases stay float32. Inference dequantizes on use, so the arithmetic path is
the same float network evaluated at the rounded weights.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .learn.cnn import CnnModel, predict_proba

QUANT_LEVELS = 127
WEIGHT_TENSORS = ("conv_w", "w1", "w2", "w3")
BIAS_TENSORS = ("conv_b", "b1", "b2", "b3")


@dataclass
class QuantModel:
    n_samples: int
    n_classes: int
    codes: dict[str, np.ndarray]  # int8 per weight tensor
    scales: dict[str, float]
    biases: dict[str, np.ndarray]  # float32, kept exact

    def code_bytes(self) -> int:
        return sum(arr.nbytes for arr in self.codes.values())


def tensor_scale(weights: np.ndarray) -> float:
    """Symmetric per-tensor scale; an all-zero tensor maps to scale 1.0."""
    peak = float(np.max(np.abs(weights))) if weights.size else 0.0
    return peak / QUANT_LEVELS if peak > 0.0 else 1.0


def quantize_dynamic(model: CnnModel) -> QuantModel:
    codes = {}
    scales = {}
    for name in WEIGHT_TENSORS:
        w = getattr(model, name)
        s = tensor_scale(w)
        q = np.clip(np.rint(w / s), -QUANT_LEVELS, QUANT_LEVELS).astype(np.int8)
        codes[name] = q
        scales[name] = s
    biases = {name: getattr(model, name).astype(np.float32) for name in BIAS_TENSORS}
    return QuantModel(model.n_samples, model.n_classes, codes, scales, biases)


def dequantize(qmodel: QuantModel) -> CnnModel:
    tensors = {}
    for name in WEIGHT_TENSORS:
        tensors[name] = (qmodel.codes[name].astype(np.float64) * qmodel.scales[name]).astype(
            np.float32
        )
    for name in BIAS_TENSORS:
        tensors[name] = qmodel.biases[name]
    return CnnModel(n_samples=qmodel.n_samples, n_classes=qmodel.n_classes, **tensors)


def quant_predict_proba(qmodel: QuantModel, windows: np.ndarray) -> np.ndarray:
    return predict_proba(dequantize(qmodel), windows)


def quant_forward(qmodel: QuantModel, window: np.ndarray) -> np.ndarray:
    return quant_predict_proba(qmodel, np.asarray(window)[None, :, :])[0]


def quant_predict(qmodel: QuantModel, windows: np.ndarray) -> np.ndarray:
    return np.argmax(quant_predict_proba(qmodel, windows), axis=1)


def max_dequant_error(model: CnnModel, qmodel: QuantModel) -> dict[str, float]:
    """Worst |w - s*q| per tensor, in units of that tensor's scale."""
    worst = {}
    for name in WEIGHT_TENSORS:
        s = qmodel.scales[name]
        err = np.abs(getattr(model, name) - qmodel.codes[name].astype(np.float64) * s)
        worst[name] = float(err.max() / s)
    return worst


@dataclass
class LatencyReport:
    n_runs: int
    preprocess_ms_mean: float
    preprocess_ms_sd: float
    predict_ms_mean: float
    predict_ms_sd: float
    total_ms_mean: float


def bench_latency(predict_fn, preprocess_fn, raw_input, n_runs: int = 200) -> LatencyReport:
    """Time preprocess and predict stages separately over repeated runs."""
    if n_runs < 100:
        raise ValueError("n_runs must be >= 100 for stable timing")
    pre_ms = np.empty(n_runs)
    prd_ms = np.empty(n_runs)
    for k in range(n_runs):
        t0 = time.perf_counter()
        window = preprocess_fn(raw_input)
        t1 = time.perf_counter()
        predict_fn(window)
        t2 = time.perf_counter()
        pre_ms[k] = (t1 - t0) * 1e3
        prd_ms[k] = (t2 - t1) * 1e3
    return LatencyReport(
        n_runs=n_runs,
        preprocess_ms_mean=float(pre_ms.mean()),
        preprocess_ms_sd=float(pre_ms.std()),
        predict_ms_mean=float(prd_ms.mean()),
        predict_ms_sd=float(prd_ms.std()),
        total_ms_mean=float((pre_ms + prd_ms).mean()),
    )
