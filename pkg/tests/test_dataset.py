import numpy as np
import pytest

from budsid.magsim import (
    DatasetManifest,
    DoubleTapDesign,
    SingleTapDesign,
    design_plans,
    generate_trials,
    simulate_dataset,
)
from budsid.magsim.dataset import POSTURE_SCENARIO, plan_label


def test_default_design_counts() -> None:
    assert SingleTapDesign().trial_count() == 8640
    assert DoubleTapDesign().trial_count() == 5760
    assert len(design_plans(SingleTapDesign(participants=2, reps=1))) == 36
    assert len(design_plans(DoubleTapDesign(participants=2, reps=2))) == 36


def test_minimal_single_design_is_eighteen_trials() -> None:
    plans = design_plans(SingleTapDesign(participants=1, reps=1))
    assert len(plans) == 18
    cells = {(p.hand, p.posture, p.finger) for p in plans}
    assert len(cells) == 18


def test_posture_scenario_mapping() -> None:
    plans = design_plans(SingleTapDesign(participants=1, reps=1))
    for plan in plans:
        assert plan.scenario == POSTURE_SCENARIO[plan.posture]
    assert all(p.scenario == "static" for p in design_plans(DoubleTapDesign(1, 1)))


def test_generate_trials_deterministic() -> None:
    design = SingleTapDesign(participants=1, reps=1)
    first = [(plan.index, trace.mag.copy(), seed) for plan, trace, seed in generate_trials(design, 5)]
    second = [(plan.index, trace.mag.copy(), seed) for plan, trace, seed in generate_trials(design, 5)]
    other = [(plan.index, trace.mag.copy(), seed) for plan, trace, seed in generate_trials(design, 6)]
    assert [s for _, _, s in first] == [s for _, _, s in second]
    for (_, a, _), (_, b, _) in zip(first, second):
        np.testing.assert_array_equal(a, b)
    assert any(not np.array_equal(a, b) for (_, a, _), (_, b, _) in zip(first, other))


def test_per_trial_seeds_distinct() -> None:
    seeds = [s for _, _, s in generate_trials(SingleTapDesign(participants=1, reps=2), 9)]
    assert len(set(seeds)) == len(seeds)


def test_pair_gaps_bounded_and_realized() -> None:
    design = DoubleTapDesign(participants=1, reps=20)
    gaps = []
    for plan in design_plans(design):
        label = plan_label(plan, master_seed=13)
        gaps.append(label.inter_touch_time)
        assert 0.15 <= label.inter_touch_time <= 1.0
    assert abs(float(np.mean(gaps)) - 0.40) < 0.05
    plan, trace, _ = next(iter(generate_trials(design, 13)))
    presses = trace.press_times()
    assert abs((presses[1] - presses[0]) - plan_label(plan, 13).inter_touch_time) < 1e-12


def test_simulate_dataset_roundtrip(tmp_path) -> None:
    manifest = simulate_dataset(SingleTapDesign(participants=1, reps=1), seed=3, out_dir=tmp_path)
    assert len(manifest.records) == 18
    manifest.validate()
    loaded = DatasetManifest.load(tmp_path)
    assert loaded.records == manifest.records
    trace, seed = loaded.load_trace(loaded.records[4])
    assert seed == loaded.records[4]["seed"]
    assert trace.timestamps.shape == (240,)
    assert loaded.participant_ids() == ["p00"]


def test_manifest_validate_catches_missing_file(tmp_path) -> None:
    manifest = simulate_dataset(SingleTapDesign(participants=1, reps=1), seed=3, out_dir=tmp_path)
    (tmp_path / manifest.records[0]["path"]).unlink()
    with pytest.raises(FileNotFoundError):
        manifest.validate()


def test_design_validation() -> None:
    with pytest.raises(ValueError):
        SingleTapDesign(participants=0)
    with pytest.raises(ValueError):
        DoubleTapDesign(reps=0)
