"""Harness: preparation, the three regimes, sweeps, reports, config."""

from __future__ import annotations

import numpy as np
import pytest

from budsid.harness import (
    DEFAULT_SWEEP,
    fill_design,
    load_filled,
    parse_config,
    prepare,
    resolve_seed,
    run_general,
    run_individual,
    run_loocv,
    train_config_from,
    validate_pair,
    window_sweep,
    write_confusion_csv,
    write_report_json,
    write_sweep_csv,
)
from budsid.learn import TrainConfig
from budsid.magsim import DoubleTapDesign, SingleTapDesign, simulate_dataset
from budsid.magsim.dataset import DatasetManifest
from budsid.pipeline import WindowConfig

CFG = TrainConfig(epochs=6, seed=3)


@pytest.fixture(scope="module")
def single_data():
    filled = fill_design(SingleTapDesign(participants=4, reps=6), seed=11)
    return filled, prepare(filled)


@pytest.fixture(scope="module")
def pair_data():
    filled = fill_design(DoubleTapDesign(participants=3, reps=6), seed=21)
    return filled, prepare(filled)


def test_validate_pair_boundaries() -> None:
    assert validate_pair([1.0, 1.5])
    assert validate_pair([1.0, 2.0])        # exactly one second is still accepted
    assert not validate_pair([1.0, 2.001])
    assert not validate_pair([1.0])
    assert not validate_pair([1.0, 1.3, 1.6])


def test_prepared_single_dataset_shape_and_ranges(single_data) -> None:
    _, data = single_data
    assert data.kind == "single"
    assert data.windows.shape == (432, 80, 3)
    assert data.features.shape == (432, 18)
    assert data.windows.min() >= 0.0 and data.windows.max() <= 1.0
    assert set(np.unique(data.labels)) == {0, 1, 2}
    assert np.bincount(data.labels).tolist() == [144, 144, 144]
    assert sorted(set(data.participants)) == ["p00", "p01", "p02", "p03"]
    assert set(data.postures) == {"sit", "stand", "walk"}


def test_prepared_pair_dataset_has_nine_classes(pair_data) -> None:
    _, data = pair_data
    assert data.kind == "double"
    assert data.windows.shape == (162, 100, 3)
    assert data.features.shape == (162, 36)
    assert len(data.class_names) == 9
    assert np.bincount(data.labels, minlength=9).tolist() == [18] * 9
    assert set(data.hands) == {"right"}


def test_posture_and_hand_filters(single_data) -> None:
    _, data = single_data
    seated = data.filter(posture="sit")
    assert len(seated) == 144
    assert set(seated.postures) == {"sit"}
    left = data.filter(hand="left")
    assert len(left) == 216
    both = data.filter(posture="walk", hand="right")
    assert len(both) == 72


def test_manifest_and_in_memory_paths_agree(tmp_path) -> None:
    design = SingleTapDesign(participants=1, reps=2)
    simulate_dataset(design, seed=5, out_dir=tmp_path)
    from_disk = prepare(load_filled(DatasetManifest.load(tmp_path)))
    in_memory = prepare(fill_design(design, seed=5))
    assert np.array_equal(from_disk.labels, in_memory.labels)
    assert np.array_equal(from_disk.participants, in_memory.participants)
    # trace CSVs round floats to 9 significant digits, so windows agree only closely
    assert np.allclose(from_disk.windows, in_memory.windows, atol=1e-5)


def test_general_report_structure(single_data) -> None:
    _, data = single_data
    report = run_general(data, CFG)
    assert report.regime == "general"
    assert report.dataset_size == 432
    assert set(report.models) == {"cnn", "svm"}
    split = report.details["split"]
    assert split["train"] + split["val"] + split["test"] == 432
    assert split["test"] == 3 * round(0.2 * 144)  # per-class rounding
    for entry in report.models.values():
        counts = np.array(entry["confusion"])
        assert counts.sum() == split["test"]
        assert 0.0 <= entry["accuracy"] <= 1.0
        # row sums equal the per-class test counts
        y_test_counts = counts.sum(axis=1)
        assert y_test_counts.sum() == entry["test_count"]
    assert report.models["svm"]["c"] in (0.1, 1.0, 10.0, 100.0)


def test_general_report_is_deterministic(single_data, tmp_path) -> None:
    _, data = single_data
    a = run_general(data, CFG, models=("cnn",))
    b = run_general(data, CFG, models=("cnn",))
    assert a.to_dict() == b.to_dict()
    pa = write_report_json(tmp_path / "a.json", a)
    pb = write_report_json(tmp_path / "b.json", b)
    assert pa.read_bytes() == pb.read_bytes()


def test_individual_reports_per_participant(single_data) -> None:
    _, data = single_data
    report = run_individual(data, CFG, models=("cnn",))
    per = report.models["cnn"]["per_participant"]
    assert sorted(per) == ["p00", "p01", "p02", "p03"]
    assert "skipped" not in report.details
    scores = list(per.values())
    assert report.models["cnn"]["mean_accuracy"] == pytest.approx(np.mean(scores))
    assert report.models["cnn"]["sd_accuracy"] == pytest.approx(np.std(scores))


def test_individual_skips_undersized_participants(single_data) -> None:
    _, data = single_data
    # cripple p03: keep 4 of its trials so its smallest class is undersized
    keep = data.participants != "p03"
    keep[np.flatnonzero(~keep)[:4]] = True
    trimmed = data.subset(keep)
    report = run_individual(trimmed, CFG, models=("cnn",))
    assert list(report.details["skipped"]) == ["p03"]
    assert "p03" not in report.models["cnn"]["per_participant"]
    assert len(report.models["cnn"]["per_participant"]) == 3


def test_loocv_folds_are_participant_disjoint(single_data) -> None:
    _, data = single_data
    report = run_loocv(data, CFG, models=("cnn",))
    folds = report.models["cnn"]["folds"]
    assert [f["test_participant"] for f in folds] == ["p00", "p01", "p02", "p03"]
    for fold in folds:
        assert fold["test_participant"] not in fold["train_participants"]
        assert len(fold["train_participants"]) == 3
        assert fold["test_count"] == 108
    counts = np.array(report.models["cnn"]["confusion"])
    # every trial is tested exactly once across folds
    assert counts.sum() == len(data)
    assert counts.sum(axis=1).tolist() == np.bincount(data.labels).tolist()


def test_loocv_needs_two_participants(single_data) -> None:
    _, data = single_data
    solo = data.subset(data.participants == "p00")
    with pytest.raises(ValueError, match="2 participants"):
        run_loocv(solo, CFG, models=("cnn",))


def test_window_sweep_grid_and_seconds(single_data, tmp_path) -> None:
    filled, _ = single_data
    rows = window_sweep(filled, CFG, DEFAULT_SWEEP)
    assert len(rows) == 9
    assert [r["seconds"] for r in rows] == [1.0, 1.33, 1.67, 0.5, 0.67, 0.83, 0.5, 0.67, 0.83]
    assert [r["n_samples"] for r in rows] == [60, 80, 100, 30, 40, 50, 30, 40, 50]
    assert all(0.0 <= r["accuracy"] <= 1.0 for r in rows)
    path = write_sweep_csv(tmp_path / "sweep.csv", rows)
    lines = path.read_text().splitlines()
    assert lines[0] == "n_before,n_after,n_samples,seconds,accuracy"
    assert len(lines) == 10
    assert lines[1].startswith("30,30,60,1.00,")


def test_confusion_csv_layout(tmp_path) -> None:
    path = write_confusion_csv(tmp_path / "c.csv", ["a", "b"], [[3, 1], [0, 4]])
    assert path.read_text() == "true\\pred,a,b\na,3,1\nb,0,4\n"
    with pytest.raises(ValueError, match="shape"):
        write_confusion_csv(tmp_path / "d.csv", ["a"], [[1, 2]])


def test_config_parsing(tmp_path) -> None:
    path = tmp_path / "run.cfg"
    path.write_text("# comment\nseed = 9\nepochs=40\n\nlearning_rate = 0.005 # inline\n")
    entries = parse_config(path)
    assert entries == {"seed": "9", "epochs": "40", "learning_rate": "0.005"}
    cfg = train_config_from(entries, seed=resolve_seed(None, entries, env={}))
    assert cfg.seed == 9
    assert cfg.epochs == 40
    assert cfg.learning_rate == 0.005
    assert cfg.batch_size == 32  # untouched default
    path.write_text("just words\n")
    with pytest.raises(ValueError, match="key = value"):
        parse_config(path)
    path.write_text("seed = 1\nseed = 2\n")
    with pytest.raises(ValueError, match="duplicate"):
        parse_config(path)


def test_seed_resolution_order() -> None:
    assert resolve_seed(7, {"seed": "5"}, env={"BUDSID_SEED": "6"}) == 7
    assert resolve_seed(None, {"seed": "5"}, env={"BUDSID_SEED": "6"}) == 6
    assert resolve_seed(None, {"seed": "5"}, env={}) == 5
    assert resolve_seed(None, None, env={}) == 0
    assert resolve_seed(None, None, env={}, default=42) == 42
