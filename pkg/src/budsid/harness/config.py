"""Key-value run configuration and the seed resolution order.

A config file is plain `key = value` lines; `#` starts a comment. The seed
comes from, in order: an explicit CLI flag, the BUDSID_SEED environment
variable, a `seed` config entry, then the default.
"""

from __future__ import annotations

import os
from pathlib import Path

from ..learn.common import TrainConfig

SEED_ENV_VAR = "BUDSID_SEED"
DEFAULT_SEED = 0

_TRAIN_KEYS = {
    "epochs": int,
    "batch_size": int,
    "learning_rate": float,
    "folds": int,
}


def parse_config(path: Path) -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ValueError(f"{path}:{lineno}: empty key or value")
        if key in entries:
            raise ValueError(f"{path}:{lineno}: duplicate key {key!r}")
        entries[key] = value
    return entries


def resolve_seed(
    cli_seed: int | None,
    config: dict[str, str] | None = None,
    env: dict[str, str] | None = None,
    default: int = DEFAULT_SEED,
) -> int:
    if cli_seed is not None:
        return int(cli_seed)
    env = os.environ if env is None else env
    if SEED_ENV_VAR in env:
        return int(env[SEED_ENV_VAR])
    if config and "seed" in config:
        return int(config["seed"])
    return default


def train_config_from(config: dict[str, str] | None, seed: int) -> TrainConfig:
    """TrainConfig from config entries; unknown keys are left for their own consumers."""
    kwargs = {}
    for key, cast in _TRAIN_KEYS.items():
        if config and key in config:
            kwargs[key] = cast(config[key])
    return TrainConfig(seed=seed, **kwargs)
