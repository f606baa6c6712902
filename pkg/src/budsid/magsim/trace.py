"""Trace containers and their on-disk CSV/JSON forms."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .labels import PairLabel, TapLabel

SENSOR_RATE_HZ = 80.0
EVENT_KINDS = ("press", "release")


@dataclass(frozen=True)
class TouchEvent:
    time: float
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown touch event kind {self.kind!r}")


@dataclass
class RawTrace:
    """Regular 80 Hz tri-axial magnetometer stream with ground-truth touch events."""

    timestamps: np.ndarray
    mag: np.ndarray
    touch_events: list[TouchEvent]
    label: TapLabel | PairLabel
    participant_id: str
    scenario: str
    sample_rate: float = SENSOR_RATE_HZ

    def __post_init__(self) -> None:
        self.timestamps = np.asarray(self.timestamps, dtype=np.float64)
        self.mag = np.asarray(self.mag, dtype=np.float64)
        if self.mag.shape != (self.timestamps.shape[0], 3):
            raise ValueError(f"mag shape {self.mag.shape} does not match {len(self.timestamps)} timestamps")
        step = 1.0 / self.sample_rate
        if len(self.timestamps) >= 2:
            gaps = np.diff(self.timestamps)
            if not np.allclose(gaps, step, rtol=0.0, atol=1e-9) or np.any(gaps <= 0):
                raise ValueError("timestamps must be strictly increasing at the sample-rate spacing")
        presses = [e.time for e in self.touch_events if e.kind == "press"]
        releases = [e.time for e in self.touch_events if e.kind == "release"]
        if len(presses) != len(releases):
            raise ValueError("every press needs a matching release")
        for p in presses:
            if not any(r > p for r in releases):
                raise ValueError(f"press at {p} s has no later release")
        expected = 2 if isinstance(self.label, PairLabel) else 1
        if len(presses) != expected:
            raise ValueError(f"{type(self.label).__name__} trace must have {expected} press(es), got {len(presses)}")

    def press_times(self) -> list[float]:
        return [e.time for e in self.touch_events if e.kind == "press"]


@dataclass
class ReceivedTrace:
    """Irregularly timed subset of a RawTrace, as seen after the wireless link."""

    timestamps: np.ndarray
    mag: np.ndarray
    touch_events: list[TouchEvent] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.timestamps = np.asarray(self.timestamps, dtype=np.float64)
        self.mag = np.asarray(self.mag, dtype=np.float64)
        if self.mag.shape != (self.timestamps.shape[0], 3):
            raise ValueError(f"mag shape {self.mag.shape} does not match {len(self.timestamps)} timestamps")
        if np.any(np.diff(self.timestamps) <= 0):
            raise ValueError("timestamps must be strictly increasing")


def label_to_dict(label: TapLabel | PairLabel) -> dict:
    if isinstance(label, PairLabel):
        return {
            "type": "pair",
            "first": label.first,
            "second": label.second,
            "inter_touch_time": label.inter_touch_time,
        }
    return {"type": "tap", "finger": label.finger, "hand": label.hand, "posture": label.posture}


def label_from_dict(d: dict) -> TapLabel | PairLabel:
    if d["type"] == "pair":
        return PairLabel(d["first"], d["second"], d["inter_touch_time"])
    if d["type"] == "tap":
        return TapLabel(d["finger"], d["hand"], d["posture"])
    raise ValueError(f"unknown label type {d['type']!r}")


def write_trace(trace: RawTrace, csv_path: Path, seed: int) -> None:
    """Write the sample stream as `t,x,y,z` CSV plus a JSON sidecar with the metadata."""
    csv_path = Path(csv_path)
    rows = np.column_stack([trace.timestamps, trace.mag])
    with open(csv_path, "w") as f:
        f.write("t,x,y,z\n")
        # 12 significant digits keep the 1/80 s spacing intact through a read-back
        np.savetxt(f, rows, fmt=["%.12g", "%.9g", "%.9g", "%.9g"], delimiter=",")
    sidecar = {
        "label": label_to_dict(trace.label),
        "participant": trace.participant_id,
        "scenario": trace.scenario,
        "touch_events": [[e.time, e.kind] for e in trace.touch_events],
        "seed": seed,
        "sample_rate": trace.sample_rate,
    }
    csv_path.with_suffix(".json").write_text(json.dumps(sidecar, sort_keys=True, indent=1) + "\n")


def read_trace(csv_path: Path) -> tuple[RawTrace, int]:
    """Read a trace CSV and its sidecar back; returns the trace and its stored seed."""
    csv_path = Path(csv_path)
    data = np.loadtxt(csv_path, delimiter=",", skiprows=1, dtype=np.float64, ndmin=2)
    sidecar = json.loads(csv_path.with_suffix(".json").read_text())
    trace = RawTrace(
        timestamps=data[:, 0],
        mag=data[:, 1:4],
        touch_events=[TouchEvent(t, kind) for t, kind in sidecar["touch_events"]],
        label=label_from_dict(sidecar["label"]),
        participant_id=sidecar["participant"],
        scenario=sidecar["scenario"],
        sample_rate=sidecar.get("sample_rate", SENSOR_RATE_HZ),
    )
    return trace, int(sidecar["seed"])
