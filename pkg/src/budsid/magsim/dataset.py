"""Full-factorial trial designs, per-trial seeding, and the on-disk manifest."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .labels import FINGERS, HANDS, POSTURES, PairLabel, TapLabel
from .profiles import ParticipantProfile, sample_participants
from .scenario import ScenarioProfile, scenario_preset
from .trace import RawTrace, label_from_dict, label_to_dict, read_trace, write_trace
from .trial import simulate_trial

MANIFEST_NAME = "manifest.jsonl"

# Study postures map onto ambient scenarios: seated is the quiet baseline,
# standing adds mild environment noise, walking adds gait sway and drift.
POSTURE_SCENARIO = {"sit": "static", "stand": "music", "walk": "walking"}

# Inter-touch gap for synthesized double taps, seconds.
PAIR_GAP_MEAN_S = 0.40
PAIR_GAP_SD_S = 0.12
PAIR_GAP_RANGE_S = (0.15, 1.0)

_GAP_STREAM_TAG = 0x6A9


@dataclass(frozen=True)
class SingleTapDesign:
    """Participants x hands x postures x fingers x reps single-tap factorial."""

    participants: int = 24
    reps: int = 20

    def __post_init__(self) -> None:
        if self.participants < 1 or self.reps < 1:
            raise ValueError("participants and reps must be >= 1")

    def trial_count(self) -> int:
        return self.participants * len(HANDS) * len(POSTURES) * len(FINGERS) * self.reps


@dataclass(frozen=True)
class DoubleTapDesign:
    """Participants x ordered finger pairs x reps double-tap factorial, seated."""

    participants: int = 16
    reps: int = 40

    def __post_init__(self) -> None:
        if self.participants < 1 or self.reps < 1:
            raise ValueError("participants and reps must be >= 1")

    def trial_count(self) -> int:
        return self.participants * len(FINGERS) ** 2 * self.reps


Design = SingleTapDesign | DoubleTapDesign


@dataclass(frozen=True)
class TrialPlan:
    index: int
    participant: int
    scenario: str
    finger: str = ""
    hand: str = ""
    posture: str = ""
    pair: tuple[str, str] | None = None


def design_plans(design: Design) -> list[TrialPlan]:
    """Deterministic enumeration of every cell x rep in the design."""
    plans: list[TrialPlan] = []
    if isinstance(design, SingleTapDesign):
        for p in range(design.participants):
            for hand in HANDS:
                for posture in POSTURES:
                    for finger in FINGERS:
                        for _ in range(design.reps):
                            plans.append(
                                TrialPlan(
                                    index=len(plans),
                                    participant=p,
                                    scenario=POSTURE_SCENARIO[posture],
                                    finger=finger,
                                    hand=hand,
                                    posture=posture,
                                )
                            )
    else:
        for p in range(design.participants):
            for first in FINGERS:
                for second in FINGERS:
                    for _ in range(design.reps):
                        plans.append(
                            TrialPlan(
                                index=len(plans),
                                participant=p,
                                scenario="static",
                                pair=(first, second),
                            )
                        )
    return plans


def trial_seed(master_seed: int, trial_index: int) -> int:
    """Stable per-trial seed stream, independent across trial indices."""
    seq = np.random.SeedSequence([int(master_seed), int(trial_index)])
    return int(seq.generate_state(1, np.uint64)[0])


def _pair_gap(master_seed: int, trial_index: int) -> float:
    seq = np.random.SeedSequence([int(master_seed), int(trial_index), _GAP_STREAM_TAG])
    rng = np.random.Generator(np.random.PCG64(seq))
    return float(np.clip(rng.normal(PAIR_GAP_MEAN_S, PAIR_GAP_SD_S), *PAIR_GAP_RANGE_S))


def plan_label(plan: TrialPlan, master_seed: int) -> TapLabel | PairLabel:
    if plan.pair is None:
        return TapLabel(plan.finger, plan.hand, plan.posture)
    return PairLabel(plan.pair[0], plan.pair[1], _pair_gap(master_seed, plan.index))


def generate_trials(
    design: Design,
    seed: int,
    *,
    profiles: list[ParticipantProfile] | None = None,
    scenario_overrides: dict[str, ScenarioProfile] | None = None,
) -> Iterator[tuple[TrialPlan, RawTrace, int]]:
    """Simulate every planned trial; pure in (design, seed)."""
    profiles = profiles if profiles is not None else sample_participants(design.participants, seed)
    if len(profiles) < design.participants:
        raise ValueError(f"need {design.participants} profiles, got {len(profiles)}")
    presets = {kind: scenario_preset(kind) for kind in set(POSTURE_SCENARIO.values()) | {"static"}}
    if scenario_overrides:
        presets.update(scenario_overrides)
    for plan in design_plans(design):
        label = plan_label(plan, seed)
        tseed = trial_seed(seed, plan.index)
        trace = simulate_trial(label, profiles[plan.participant], presets[plan.scenario], tseed)
        yield plan, trace, tseed


@dataclass
class DatasetManifest:
    """One JSONL record per trial: relative trace path plus its metadata."""

    root: Path
    records: list[dict]

    def save(self) -> Path:
        path = self.root / MANIFEST_NAME
        with open(path, "w") as f:
            for rec in self.records:
                f.write(json.dumps(rec, sort_keys=True) + "\n")
        return path

    @classmethod
    def load(cls, root: Path) -> "DatasetManifest":
        root = Path(root)
        path = root / MANIFEST_NAME
        if not path.exists():
            raise FileNotFoundError(f"no {MANIFEST_NAME} under {root}")
        records = [json.loads(line) for line in path.read_text().splitlines() if line.strip()]
        return cls(root=root, records=records)

    def load_trace(self, record: dict) -> tuple[RawTrace, int]:
        return read_trace(self.root / record["path"])

    def labels(self) -> list[TapLabel | PairLabel]:
        return [label_from_dict(rec["label"]) for rec in self.records]

    def participant_ids(self) -> list[str]:
        return sorted({rec["participant"] for rec in self.records})

    def validate(self) -> None:
        missing = [rec["path"] for rec in self.records if not (self.root / rec["path"]).exists()]
        if missing:
            raise FileNotFoundError(f"{len(missing)} trace files missing, first: {missing[0]}")
        class_counts: dict[str, int] = {}
        for label in self.labels():
            key = label.class_name() if isinstance(label, PairLabel) else label.finger
            class_counts[key] = class_counts.get(key, 0) + 1
        if len(set(class_counts.values())) > 1:
            raise ValueError(f"per-class counts are unbalanced: {class_counts}")


def simulate_dataset(
    design: Design,
    seed: int,
    out_dir: Path,
    *,
    profiles: list[ParticipantProfile] | None = None,
) -> DatasetManifest:
    """Write every trial's trace CSV + sidecar and the manifest; returns the manifest."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = []
    for plan, trace, tseed in generate_trials(design, seed, profiles=profiles):
        name = f"trial_{plan.index:05d}.csv"
        write_trace(trace, out_dir / name, tseed)
        records.append(
            {
                "path": name,
                "seed": tseed,
                "participant": trace.participant_id,
                "scenario": trace.scenario,
                "label": label_to_dict(trace.label),
            }
        )
    manifest = DatasetManifest(root=out_dir, records=records)
    manifest.save()
    return manifest
