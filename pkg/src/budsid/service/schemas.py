"""Request bodies for the HTTP service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class GenRequest(BaseModel):
    kind: Literal["single", "double"]
    out_dir: str
    participants: int | None = Field(default=None, ge=1)
    reps: int | None = Field(default=None, ge=1)
    seed: int = 0


class TrainRequest(BaseModel):
    dataset: str
    model: Literal["cnn", "svm"]
    out: str
    seed: int = 0
    epochs: int | None = Field(default=None, ge=1)
    batch_size: int | None = Field(default=None, ge=1)
    learning_rate: float | None = Field(default=None, gt=0)
    folds: int | None = Field(default=None, ge=2)
    n_before: int | None = Field(default=None, ge=0)
    n_after: int | None = Field(default=None, ge=0)


class EvalRequest(BaseModel):
    dataset: str
    regime: Literal["general", "individual", "loocv"]
    out_dir: str
    models: list[Literal["cnn", "svm"]] = ["cnn", "svm"]
    seed: int = 0
    epochs: int | None = Field(default=None, ge=1)
    batch_size: int | None = Field(default=None, ge=1)
    learning_rate: float | None = Field(default=None, gt=0)
    folds: int | None = Field(default=None, ge=2)
    posture: Literal["sit", "stand", "walk"] | None = None
    hand: Literal["left", "right"] | None = None


class SweepRequest(BaseModel):
    dataset: str
    out_dir: str
    seed: int = 0
    epochs: int | None = Field(default=None, ge=1)
    batch_size: int | None = Field(default=None, ge=1)
    learning_rate: float | None = Field(default=None, gt=0)


class QuantizeRequest(BaseModel):
    model: str
    out: str


class BenchRequest(BaseModel):
    model: str
    n_runs: int = Field(default=200, ge=100)
    seed: int = 0
