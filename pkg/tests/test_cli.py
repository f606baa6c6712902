"""Command-line behavior: exit codes, JSON output, seed precedence, server mode."""

from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from budsid.cli import main
from budsid.service.app import create_app


@pytest.fixture(scope="module")
def dataset_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli_data")
    rc = main(
        ["gen", "--kind", "single", "--out", str(out), "--participants", "1", "--reps", "2",
         "--seed", "7"]
    )
    assert rc == 0
    return out


def _last_json(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def test_no_command_prints_help(capsys) -> None:
    assert main([]) == 2
    assert "usage: budsid" in capsys.readouterr().out


def test_unknown_regime_is_a_usage_error() -> None:
    with pytest.raises(SystemExit) as err:
        main(["eval", "--dataset", "x", "--regime", "bogus", "--out", "y"])
    assert err.value.code == 2


def test_gen_reports_trial_count(dataset_dir, capsys) -> None:
    rc = main(
        ["gen", "--kind", "double", "--out", str(dataset_dir / "pairs"), "--participants", "1",
         "--reps", "1", "--seed", "1"]
    )
    assert rc == 0
    body = _last_json(capsys)
    assert body["trials"] == 9
    assert (dataset_dir / "pairs" / "manifest.jsonl").exists()


def test_train_quantize_bench_roundtrip(dataset_dir, tmp_path, capsys) -> None:
    model = tmp_path / "net.bidm"
    rc = main(
        ["train", "--dataset", str(dataset_dir), "--model", "cnn", "--out", str(model),
         "--epochs", "2", "--seed", "1"]
    )
    assert rc == 0
    body = _last_json(capsys)
    assert body["parameters"] == 168_515
    assert model.exists()

    quant = tmp_path / "net.bidq"
    assert main(["quantize", "--model", str(model), "--out", str(quant)]) == 0
    body = _last_json(capsys)
    assert abs(body["ratio"] - 3.89) / 3.89 <= 0.05

    assert main(["bench", "--model", str(quant), "--n-runs", "100"]) == 0
    body = _last_json(capsys)
    assert body["model_kind"] == "quant"
    assert body["total_ms_mean"] > 0.0


def test_eval_writes_report_files(dataset_dir, tmp_path, capsys) -> None:
    out = tmp_path / "rep"
    rc = main(
        ["eval", "--dataset", str(dataset_dir), "--regime", "general", "--out", str(out),
         "--models", "cnn", "--epochs", "2", "--seed", "2"]
    )
    assert rc == 0
    body = _last_json(capsys)
    assert body["regime"] == "general"
    assert (out / "report.json").exists()
    assert (out / "confusion.csv").exists()


def test_eval_posture_filter(dataset_dir, tmp_path, capsys) -> None:
    rc = main(
        ["eval", "--dataset", str(dataset_dir), "--regime", "general",
         "--out", str(tmp_path / "sit"), "--models", "cnn", "--epochs", "2", "--posture", "sit"]
    )
    assert rc == 0
    body = _last_json(capsys)
    assert body["dataset_size"] == 12
    assert body["details"]["filter"]["posture"] == "sit"


def test_sweep_writes_csv(dataset_dir, tmp_path, capsys) -> None:
    out = tmp_path / "sw"
    rc = main(
        ["sweep", "--dataset", str(dataset_dir), "--out", str(out), "--epochs", "2",
         "--seed", "3"]
    )
    assert rc == 0
    body = _last_json(capsys)
    assert len(body["rows"]) == 9
    text = (out / "sweep.csv").read_text()
    assert text.startswith("n_before,n_after,n_samples,seconds,accuracy\n")


def test_missing_dataset_fails_cleanly(tmp_path, capsys) -> None:
    rc = main(
        ["train", "--dataset", str(tmp_path / "nope"), "--model", "cnn",
         "--out", str(tmp_path / "m.bidm")]
    )
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_seed_precedence_flag_env_config(tmp_path, monkeypatch, capsys) -> None:
    cfg = tmp_path / "run.cfg"
    cfg.write_text("seed = 5\nepochs = 2\n")

    a = tmp_path / "a"
    monkeypatch.setenv("BUDSID_SEED", "7")
    assert main(["gen", "--kind", "single", "--out", str(a), "--participants", "1",
                 "--reps", "1", "--config", str(cfg)]) == 0
    assert _last_json(capsys)["seed"] == 7  # env beats config

    b = tmp_path / "b"
    assert main(["gen", "--kind", "single", "--out", str(b), "--participants", "1",
                 "--reps", "1", "--seed", "9", "--config", str(cfg)]) == 0
    assert _last_json(capsys)["seed"] == 9  # flag beats env

    monkeypatch.delenv("BUDSID_SEED")
    c = tmp_path / "c"
    assert main(["gen", "--kind", "single", "--out", str(c), "--participants", "1",
                 "--reps", "1", "--config", str(cfg)]) == 0
    assert _last_json(capsys)["seed"] == 5  # config is the fallback

    d = tmp_path / "d"
    assert main(["gen", "--kind", "single", "--out", str(d), "--participants", "1",
                 "--reps", "1"]) == 0
    assert _last_json(capsys)["seed"] == 0


def test_same_seed_gives_identical_dataset_bytes(tmp_path, monkeypatch, capsys) -> None:
    a, b = tmp_path / "a", tmp_path / "b"
    monkeypatch.setenv("BUDSID_SEED", "11")
    assert main(["gen", "--kind", "single", "--out", str(a), "--participants", "1",
                 "--reps", "1"]) == 0
    monkeypatch.delenv("BUDSID_SEED")
    assert main(["gen", "--kind", "single", "--out", str(b), "--participants", "1",
                 "--reps", "1", "--seed", "11"]) == 0
    capsys.readouterr()
    assert (a / "manifest.jsonl").read_bytes() == (b / "manifest.jsonl").read_bytes()
    assert (a / "trial_00000.csv").read_bytes() == (b / "trial_00000.csv").read_bytes()


def test_config_supplies_training_knobs(dataset_dir, tmp_path, capsys) -> None:
    cfg = tmp_path / "t.cfg"
    cfg.write_text("epochs = 3\nbatch_size = 16\n")
    rc = main(
        ["train", "--dataset", str(dataset_dir), "--model", "cnn",
         "--out", str(tmp_path / "m.bidm"), "--config", str(cfg), "--seed", "1"]
    )
    assert rc == 0
    assert _last_json(capsys)["epochs_run"] == 3


def test_server_mode_proxies_requests(dataset_dir, tmp_path, monkeypatch, capsys) -> None:
    app = create_app()
    monkeypatch.setattr("httpx.Client", lambda **kwargs: TestClient(app))
    model = tmp_path / "srv.bidm"
    rc = main(
        ["train", "--dataset", str(dataset_dir), "--model", "cnn", "--out", str(model),
         "--epochs", "2", "--seed", "1", "--server", "http://anywhere"]
    )
    assert rc == 0
    assert _last_json(capsys)["parameters"] == 168_515
    assert model.exists()

    rc = main(
        ["train", "--dataset", str(tmp_path / "missing"), "--model", "cnn",
         "--out", str(model), "--server", "http://anywhere"]
    )
    assert rc == 1
    assert "404" in capsys.readouterr().err
