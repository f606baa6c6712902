"""Preprocessing: forward-fill, windowing, polarity compensation, normalization,
and statistical features.

The host polls the link at a fixed 60 Hz; all window sizes are expressed in
60 Hz sample counts (nSamples).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .magsim.trace import ReceivedTrace

HOST_RATE_HZ = 60.0

STANDARD_WINDOW_SUMS = (30, 40, 50, 60, 80, 100)

FEATURE_NAMES_PER_AXIS = ("mean", "std", "q25", "q50", "q75", "magnitude")
AXES = ("x", "y", "z")


@dataclass(frozen=True)
class UniformSeries:
    """Gap-free tri-axial series at the host poll rate."""

    samples: np.ndarray          # (N, 3) float64, microtesla
    t0: float                    # time of the first tick, seconds
    rate: float = HOST_RATE_HZ

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 2 or samples.shape[1] != 3 or samples.shape[0] == 0:
            raise ValueError("samples must be a nonempty (N, 3) array")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if self.rate <= 0:
            raise ValueError("rate must be positive")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.shape[0]

    def tick_times(self) -> np.ndarray:
        return self.t0 + np.arange(len(self)) / self.rate


@dataclass(frozen=True)
class WindowConfig:
    """Window extent in host-rate samples around a touch center."""

    n_before: int
    n_after: int

    def __post_init__(self) -> None:
        if self.n_before < 0 or self.n_after < 0:
            raise ValueError("window sample counts must be >= 0")
        if self.n_before + self.n_after == 0:
            raise ValueError("window must contain at least one sample")

    @property
    def n_samples(self) -> int:
        return self.n_before + self.n_after

    @property
    def seconds(self) -> float:
        return round(self.n_samples / HOST_RATE_HZ, 2)


@dataclass(frozen=True)
class Window:
    """Fixed-length tri-axial segment centered on a touch (or touch pair)."""

    config: WindowConfig
    center_time: float
    data: np.ndarray             # (n_samples, 3)

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=float)
        if data.shape != (self.config.n_samples, 3):
            raise ValueError(
                f"window data must be ({self.config.n_samples}, 3), got {data.shape}"
            )
        if not np.all(np.isfinite(data)):
            raise ValueError("window data must be finite")
        object.__setattr__(self, "data", data)


@dataclass(frozen=True)
class FeatureVector:
    """18 (single-tap) or 36 (double-tap) statistical features."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape not in ((18,), (36,)):
            raise ValueError(f"feature vector must have 18 or 36 values, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("features must be finite")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.shape[0]


def forward_fill(
    received: ReceivedTrace,
    poll_rate: float = HOST_RATE_HZ,
    *,
    t_start: float | None = None,
    t_end: float | None = None,
) -> UniformSeries:
    """Hold-last resampling onto the host poll grid.

    Each tick takes the most recent received sample at or before it; ticks
    before the first sample take the first sample's value.  The grid spans
    [t_start, t_end] (defaults: first and last received timestamps).
    """
    ts = np.asarray(received.timestamps, dtype=float)
    if ts.size == 0:
        raise ValueError("received trace is empty")
    if t_start is None:
        t_start = float(ts[0])
    if t_end is None:
        t_end = float(ts[-1])
    if t_end < t_start:
        raise ValueError("t_end must be >= t_start")
    n_ticks = int(np.floor((t_end - t_start) * poll_rate + 1e-9)) + 1
    ticks = t_start + np.arange(n_ticks) / poll_rate
    # index of the most recent sample at or before each tick (before-first -> 0)
    idx = np.searchsorted(ts, ticks + 1e-12, side="right") - 1
    idx = np.maximum(idx, 0)
    return UniformSeries(samples=np.asarray(received.mag, dtype=float)[idx],
                         t0=t_start, rate=poll_rate)


def extract_window(series: UniformSeries, center: float, cfg: WindowConfig) -> Window:
    """Slice cfg.n_before ticks strictly before the center tick and cfg.n_after
    from the center tick onward.  No padding: insufficient coverage is an error.
    """
    c = int(round((center - series.t0) * series.rate))
    lo = c - cfg.n_before
    hi = c + cfg.n_after
    if lo < 0 or hi > len(series):
        raise IndexError(
            f"window [{lo}, {hi}) out of range for series of {len(series)} samples"
        )
    return Window(config=cfg, center_time=center, data=series.samples[lo:hi])


def polarity_compensate(w: Window, hand: str, ring_inverted: bool = False) -> Window:
    """Canonicalize mounting: left-hand bud negates Y; an inverted ring negates
    all three axes.  Right-hand, non-inverted data is already canonical.
    """
    if hand not in ("left", "right"):
        raise ValueError(f"hand must be 'left' or 'right', got {hand!r}")
    signs = np.ones(3)
    if hand == "left":
        signs[1] *= -1.0
    if ring_inverted:
        signs *= -1.0
    return Window(config=w.config, center_time=w.center_time, data=w.data * signs)


def minmax_normalize(w: Window) -> Window:
    """Map each axis affinely onto [0, 1]; a constant axis maps to all 0.5."""
    data = w.data
    lo = data.min(axis=0)
    hi = data.max(axis=0)
    span = hi - lo
    out = np.empty_like(data)
    for a in range(3):
        if span[a] == 0.0:
            out[:, a] = 0.5
        else:
            out[:, a] = (data[:, a] - lo[a]) / span[a]
    return Window(config=w.config, center_time=w.center_time, data=out)


def _axis_features(v: np.ndarray) -> list[float]:
    q25, q50, q75 = np.quantile(v, (0.25, 0.50, 0.75))
    return [float(v.mean()), float(v.std()), float(q25), float(q50), float(q75),
            float(np.abs(v).max())]


def stat_features(w: Window) -> FeatureVector:
    """Six statistics per axis: mean, population std, linearly interpolated
    quartiles, and magnitude (peak absolute value); X block, then Y, then Z.
    """
    vals: list[float] = []
    for a in range(3):
        vals.extend(_axis_features(w.data[:, a]))
    return FeatureVector(values=np.array(vals))


def double_tap_features(w: Window) -> FeatureVector:
    """stat_features of the first half followed by the second half (36 values)."""
    n = w.data.shape[0]
    if n % 2 != 0:
        raise ValueError(f"double-tap window must have even length, got {n}")
    half = n // 2
    first = Window(config=WindowConfig(half, 0), center_time=w.center_time,
                   data=w.data[:half])
    second = Window(config=WindowConfig(0, half), center_time=w.center_time,
                    data=w.data[half:])
    return FeatureVector(
        values=np.concatenate([stat_features(first).values,
                               stat_features(second).values])
    )


def feature_names(double: bool = False) -> list[str]:
    """Column names matching FeatureVector layout."""
    base = [f"{ax}_{st}" for ax in AXES for st in FEATURE_NAMES_PER_AXIS]
    if not double:
        return base
    return [f"h1_{n}" for n in base] + [f"h2_{n}" for n in base]


def write_feature_csv(path: str, labels: list[str], vectors: list[FeatureVector]) -> None:
    """One row per window, label column first."""
    if len(labels) != len(vectors):
        raise ValueError("labels and vectors must have equal length")
    if not vectors:
        raise ValueError("no feature vectors to write")
    double = len(vectors[0]) == 36
    header = ["label"] + feature_names(double)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for lab, vec in zip(labels, vectors):
            if len(vec) != len(vectors[0]):
                raise ValueError("mixed feature vector lengths")
            fh.write(lab + "," + ",".join(f"{v:.12g}" for v in vec.values) + "\n")
