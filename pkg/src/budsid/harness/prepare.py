"""Turn trial traces into model-ready arrays.

Each trial runs the deployment path: wireless thinning at the study's link
rate, hold-last fill onto the 60 Hz host grid, window extraction around the
ground-truth press, polarity canonicalization, per-axis min-max scaling, and
the statistical features for the kernel classifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..magsim.dataset import DatasetManifest, Design, DoubleTapDesign, generate_trials
from ..magsim.labels import FINGERS, PairLabel, TapLabel, pair_class_names
from ..magsim.link import LinkProfile, ble_channel
from ..magsim.trace import RawTrace
from ..pipeline import (
    UniformSeries,
    WindowConfig,
    double_tap_features,
    extract_window,
    forward_fill,
    minmax_normalize,
    polarity_compensate,
    stat_features,
)

DEFAULT_SINGLE_WINDOW = WindowConfig(40, 40)   # 80 samples at 60 Hz
DEFAULT_PAIR_WINDOW = WindowConfig(50, 50)     # 100 samples at 60 Hz
MAX_PAIR_GAP_S = 1.0


def validate_pair(press_times: list[float]) -> bool:
    """A usable double tap is exactly two presses at most one second apart."""
    if len(press_times) != 2:
        return False
    return abs(press_times[1] - press_times[0]) <= MAX_PAIR_GAP_S


@dataclass(frozen=True)
class FilledTrial:
    """One trial after the link and the 60 Hz fill, with its window anchor."""

    series: UniformSeries
    center: float
    label_index: int
    participant: str
    hand: str
    posture: str


@dataclass
class FilledDataset:
    kind: str                      # "single" | "double"
    trials: list[FilledTrial]
    class_names: list[str]

    def __len__(self) -> int:
        return len(self.trials)


@dataclass
class PreparedDataset:
    """Aligned arrays over trials: normalized windows plus statistical features."""

    kind: str
    window_cfg: WindowConfig
    windows: np.ndarray            # (n, n_samples, 3) in [0, 1]
    features: np.ndarray           # (n, 18) single / (n, 36) double
    labels: np.ndarray             # (n,) int
    participants: np.ndarray       # (n,) str
    hands: np.ndarray              # (n,) str
    postures: np.ndarray           # (n,) str, empty for pairs
    class_names: list[str]

    def __len__(self) -> int:
        return self.labels.shape[0]

    def subset(self, mask: np.ndarray) -> "PreparedDataset":
        return PreparedDataset(
            kind=self.kind,
            window_cfg=self.window_cfg,
            windows=self.windows[mask],
            features=self.features[mask],
            labels=self.labels[mask],
            participants=self.participants[mask],
            hands=self.hands[mask],
            postures=self.postures[mask],
            class_names=self.class_names,
        )

    def filter(self, posture: str | None = None, hand: str | None = None) -> "PreparedDataset":
        mask = np.ones(len(self), dtype=bool)
        if posture is not None:
            mask &= self.postures == posture
        if hand is not None:
            mask &= self.hands == hand
        return self.subset(mask)


def _link_for(kind: str) -> LinkProfile:
    return LinkProfile.single_tap_study() if kind == "single" else LinkProfile.double_tap_study()


def fill_trace(trace: RawTrace, seed: int, kind: str) -> FilledTrial:
    received = ble_channel(trace, _link_for(kind), seed)
    # pin the grid to the trial clock so tick indices are independent of drop luck
    series = forward_fill(received, t_start=0.0)
    presses = trace.press_times()
    if kind == "single":
        label = trace.label
        assert isinstance(label, TapLabel)
        return FilledTrial(
            series=series,
            center=presses[0],
            label_index=FINGERS.index(label.finger),
            participant=trace.participant_id,
            hand=label.hand,
            posture=label.posture,
        )
    label = trace.label
    assert isinstance(label, PairLabel)
    if not validate_pair(presses):
        raise ValueError(f"trial of {trace.participant_id} is not a valid double tap")
    return FilledTrial(
        series=series,
        center=0.5 * (presses[0] + presses[1]),
        label_index=pair_class_names().index(label.class_name()),
        participant=trace.participant_id,
        hand="right",
        posture="",
    )


def _kind_of(label) -> str:
    return "double" if isinstance(label, PairLabel) else "single"


def load_filled(manifest: DatasetManifest) -> FilledDataset:
    """Fill every manifest trial; the stored per-trial seed drives the link."""
    if not manifest.records:
        raise ValueError("manifest has no records")
    trials = []
    kind = None
    for record in manifest.records:
        trace, seed = manifest.load_trace(record)
        k = _kind_of(trace.label)
        if kind is None:
            kind = k
        elif kind != k:
            raise ValueError("manifest mixes single-tap and double-tap trials")
        trials.append(fill_trace(trace, seed, k))
    names = FINGERS if kind == "single" else pair_class_names()
    return FilledDataset(kind=kind, trials=trials, class_names=list(names))


def fill_design(design: Design, seed: int, **gen_kwargs) -> FilledDataset:
    """Simulate and fill a whole design in memory, skipping the trace files."""
    kind = "double" if isinstance(design, DoubleTapDesign) else "single"
    trials = [
        fill_trace(trace, tseed, kind)
        for _, trace, tseed in generate_trials(design, seed, **gen_kwargs)
    ]
    names = FINGERS if kind == "single" else pair_class_names()
    return FilledDataset(kind=kind, trials=trials, class_names=list(names))


def prepare(filled: FilledDataset, window_cfg: WindowConfig | None = None) -> PreparedDataset:
    if window_cfg is None:
        window_cfg = DEFAULT_SINGLE_WINDOW if filled.kind == "single" else DEFAULT_PAIR_WINDOW
    windows = np.empty((len(filled), window_cfg.n_samples, 3))
    n_features = 18 if filled.kind == "single" else 36
    features = np.empty((len(filled), n_features))
    labels = np.empty(len(filled), dtype=np.int64)
    participants, hands, postures = [], [], []
    featurize = stat_features if filled.kind == "single" else double_tap_features
    for i, trial in enumerate(filled.trials):
        raw = extract_window(trial.series, trial.center, window_cfg)
        canonical = polarity_compensate(raw, trial.hand, ring_inverted=False)
        normalized = minmax_normalize(canonical)
        windows[i] = normalized.data
        features[i] = featurize(normalized).values
        labels[i] = trial.label_index
        participants.append(trial.participant)
        hands.append(trial.hand)
        postures.append(trial.posture)
    return PreparedDataset(
        kind=filled.kind,
        window_cfg=window_cfg,
        windows=windows,
        features=features,
        labels=labels,
        participants=np.array(participants),
        hands=np.array(hands),
        postures=np.array(postures),
        class_names=filled.class_names,
    )


def prepare_dataset(root: Path, window_cfg: WindowConfig | None = None) -> PreparedDataset:
    """Manifest directory straight to arrays (convenience for the CLI path)."""
    return prepare(load_filled(DatasetManifest.load(Path(root))), window_cfg)
