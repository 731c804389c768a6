"""Checkpoint files: versioned JSON with a layout hash guarding against
loading weights into a mismatched observation/action configuration."""

from __future__ import annotations

import json
from pathlib import Path

from .learn.training import TrainConfig, Trainer
from .sim import ConfigError

FORMAT_VERSION = 1


def save_checkpoint(path, trainer: Trainer) -> None:
    payload = {
        "format_version": FORMAT_VERSION,
        "train_config": trainer.cfg.to_dict(),
        **trainer.to_payload(),
    }
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh)


def load_checkpoint(path) -> dict:
    with open(path) as fh:
        payload = json.load(fh)
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise ConfigError(f"unsupported checkpoint format version {version}")
    return payload


def trainer_from_checkpoint(path, overrides: dict | None = None) -> Trainer:
    """Rebuild a trainer from a checkpoint; overrides patch the stored train
    config (e.g. a different opponent for evaluation)."""
    payload = load_checkpoint(path)
    cfg_dict = dict(payload["train_config"])
    if overrides:
        cfg_dict.update(overrides)
    trainer = Trainer(TrainConfig.from_dict(cfg_dict))
    trainer.load_payload(payload)
    return trainer
