"""Ambient-field scenarios: posture and environment effects on the background field."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dipole import Vec3

SCENARIO_KINDS = ("static", "car", "music", "walking", "rotating")

# Earth-like ambient: 50 uT total, inclined downward (northern-hemisphere typical).
AMBIENT_DEFAULT = Vec3(25.0, 0.0, -43.30127018922193)

DEFAULT_SENSOR_NOISE_UT = 0.4


@dataclass(frozen=True)
class HeadingProcess:
    """Yaw of the head over time: constant rate plus a slow per-trial drift band."""

    yaw_rate_deg_s: float = 0.0
    drift_deg_s: float = 0.0

    def is_zero(self) -> bool:
        return self.yaw_rate_deg_s == 0.0 and self.drift_deg_s == 0.0


@dataclass(frozen=True)
class GaitSway:
    amplitude_deg: float = 0.0
    frequency_hz: float = 0.0

    def is_zero(self) -> bool:
        return self.amplitude_deg == 0.0 or self.frequency_hz == 0.0


@dataclass(frozen=True)
class ScenarioProfile:
    kind: str
    ambient_field: Vec3 = AMBIENT_DEFAULT
    heading_process: HeadingProcess = HeadingProcess()
    gait_sway: GaitSway = GaitSway()
    sensor_noise_sigma: float = DEFAULT_SENSOR_NOISE_UT

    def __post_init__(self) -> None:
        if self.kind not in SCENARIO_KINDS:
            raise ValueError(f"unknown scenario kind {self.kind!r}; expected one of {SCENARIO_KINDS}")
        if self.sensor_noise_sigma < 0:
            raise ValueError("sensor_noise_sigma must be >= 0")
        stationary = self.kind in ("static", "car", "music")
        if stationary and not (self.heading_process.is_zero() and self.gait_sway.is_zero()):
            raise ValueError(f"{self.kind} scenario must have no heading motion or sway")
        if not stationary and self.heading_process.is_zero():
            raise ValueError(f"{self.kind} scenario requires a nonzero heading process")

    def with_noise(self, sigma: float) -> "ScenarioProfile":
        return ScenarioProfile(self.kind, self.ambient_field, self.heading_process, self.gait_sway, sigma)


def scenario_preset(kind: str, *, sensor_noise_sigma: float | None = None) -> ScenarioProfile:
    """Default parameterization for each scenario kind."""
    if kind == "static":
        profile = ScenarioProfile("static", sensor_noise_sigma=0.4)
    elif kind == "car":
        profile = ScenarioProfile("car", sensor_noise_sigma=0.7)
    elif kind == "music":
        profile = ScenarioProfile("music", sensor_noise_sigma=0.5)
    elif kind == "walking":
        profile = ScenarioProfile(
            "walking",
            heading_process=HeadingProcess(yaw_rate_deg_s=0.0, drift_deg_s=3.0),
            gait_sway=GaitSway(amplitude_deg=5.0, frequency_hz=2.0),
            sensor_noise_sigma=0.5,
        )
    elif kind == "rotating":
        profile = ScenarioProfile(
            "rotating",
            heading_process=HeadingProcess(yaw_rate_deg_s=45.0),
            sensor_noise_sigma=0.4,
        )
    else:
        raise ValueError(f"unknown scenario kind {kind!r}; expected one of {SCENARIO_KINDS}")
    if sensor_noise_sigma is not None:
        profile = profile.with_noise(sensor_noise_sigma)
    return profile


def heading_series(scenario: ScenarioProfile, times: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Yaw angle (radians) at each time; the initial heading is random per trial."""
    heading0 = rng.uniform(0.0, 2.0 * math.pi)
    proc = scenario.heading_process
    drift = math.radians(rng.uniform(-proc.drift_deg_s, proc.drift_deg_s)) if proc.drift_deg_s else 0.0
    yaw = heading0 + (math.radians(proc.yaw_rate_deg_s) + drift) * times
    sway = scenario.gait_sway
    if not sway.is_zero():
        phase = rng.uniform(0.0, 2.0 * math.pi)
        yaw = yaw + math.radians(sway.amplitude_deg) * np.sin(2.0 * math.pi * sway.frequency_hz * times + phase)
    return yaw


def ambient_in_head_frame(scenario: ScenarioProfile, yaw: np.ndarray) -> np.ndarray:
    """World ambient field expressed in the head frame for each yaw sample, (N,3) uT.

    A head rotated by +yaw about the vertical sees the fixed world field rotated by -yaw.
    """
    amb = scenario.ambient_field.as_array()
    c, s = np.cos(yaw), np.sin(yaw)
    out = np.empty((yaw.shape[0], 3), dtype=np.float64)
    out[:, 0] = c * amb[0] + s * amb[1]
    out[:, 1] = -s * amb[0] + c * amb[1]
    out[:, 2] = amb[2]
    return out
