"""Deterministic report files: same inputs and seed, same bytes."""

from __future__ import annotations

import json
from pathlib import Path

from .evaluate import EvalReport

REPORT_NAME = "report.json"
CONFUSION_NAME = "confusion.csv"
SWEEP_NAME = "sweep.csv"


def write_report_json(path: Path, report: EvalReport | dict) -> Path:
    path = Path(path)
    payload = report.to_dict() if isinstance(report, EvalReport) else report
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return path


def write_confusion_csv(path: Path, class_names: list[str], counts: list[list[int]]) -> Path:
    """Rows are true classes, columns predicted; cell values are test counts."""
    if len(counts) != len(class_names) or any(len(r) != len(class_names) for r in counts):
        raise ValueError("confusion matrix shape does not match class names")
    path = Path(path)
    lines = ["true\\pred," + ",".join(class_names)]
    for name, row in zip(class_names, counts):
        lines.append(name + "," + ",".join(str(int(v)) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_sweep_csv(path: Path, rows: list[dict]) -> Path:
    if not rows:
        raise ValueError("no sweep rows to write")
    path = Path(path)
    header = ["n_before", "n_after", "n_samples", "seconds", "accuracy"]
    lines = [",".join(header)]
    for row in rows:
        lines.append(
            ",".join(
                [
                    str(row["n_before"]),
                    str(row["n_after"]),
                    str(row["n_samples"]),
                    f"{row['seconds']:.2f}",
                    f"{row['accuracy']:.6f}",
                ]
            )
        )
    path.write_text("\n".join(lines) + "\n")
    return path


def write_eval_outputs(out_dir: Path, report: EvalReport) -> dict[str, str]:
    """report.json plus confusion.csv (the CNN's when both models ran)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = {"report": str(write_report_json(out_dir / REPORT_NAME, report))}
    primary = "cnn" if "cnn" in report.models else next(iter(report.models))
    written["confusion"] = str(
        write_confusion_csv(
            out_dir / CONFUSION_NAME, report.class_names, report.models[primary]["confusion"]
        )
    )
    for name, entry in report.models.items():
        if name == primary:
            continue
        written[f"confusion_{name}"] = str(
            write_confusion_csv(out_dir / f"confusion_{name}.csv", report.class_names, entry["confusion"])
        )
    return written
