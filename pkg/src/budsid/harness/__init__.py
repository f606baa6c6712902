"""End-to-end evaluation: data preparation, regimes, sweeps, and report files."""

from .config import (
    DEFAULT_SEED,
    SEED_ENV_VAR,
    parse_config,
    resolve_seed,
    train_config_from,
)
from .evaluate import (
    DEFAULT_SWEEP,
    EvalReport,
    run_general,
    run_individual,
    run_loocv,
    window_sweep,
)
from .prepare import (
    DEFAULT_PAIR_WINDOW,
    DEFAULT_SINGLE_WINDOW,
    FilledDataset,
    FilledTrial,
    PreparedDataset,
    fill_design,
    fill_trace,
    load_filled,
    prepare,
    prepare_dataset,
    validate_pair,
)
from .reports import (
    write_confusion_csv,
    write_eval_outputs,
    write_report_json,
    write_sweep_csv,
)

__all__ = [
    "DEFAULT_SEED",
    "SEED_ENV_VAR",
    "parse_config",
    "resolve_seed",
    "train_config_from",
    "DEFAULT_SWEEP",
    "EvalReport",
    "run_general",
    "run_individual",
    "run_loocv",
    "window_sweep",
    "DEFAULT_PAIR_WINDOW",
    "DEFAULT_SINGLE_WINDOW",
    "FilledDataset",
    "FilledTrial",
    "PreparedDataset",
    "fill_design",
    "fill_trace",
    "load_filled",
    "prepare",
    "prepare_dataset",
    "validate_pair",
    "write_confusion_csv",
    "write_eval_outputs",
    "write_report_json",
    "write_sweep_csv",
]
