"""Single- and double-tap trial synthesis: dipole + ambient + sensor noise."""

from __future__ import annotations

import math

import numpy as np

from .dipole import dipole_field_batch
from .labels import PairLabel, TapLabel
from .magnet import MagnetSpec
from .profiles import ParticipantProfile
from .scenario import ScenarioProfile, ambient_in_head_frame, heading_series
from .trace import RawTrace, TouchEvent
from .trajectory import (
    MagnetPath,
    contact_pose,
    rest_pose,
    segment_positions,
    tap_trajectory,
)

SINGLE_TAP_DURATION_S = 3.0
DOUBLE_TAP_DURATION_S = 3.6

# Motor noise at unit scale: bounded so aim error stays well inside the
# half-spacing between adjacent finger contact points.
CONTACT_JITTER_SD_M = 0.0010
ORIENT_JITTER_SD_RAD = math.radians(1.0)
REST_JITTER_SD_M = 0.02
JITTER_CLIP_SIGMA = 2.0

MIRROR_Y = np.array([1.0, -1.0, 1.0])


def mount_rotation(tilt_deg: float) -> np.ndarray:
    """Sensor mounting: pitch of the bud's axes toward the mouth, about the lateral axis.

    Columns are the sensor axes expressed in the head frame; readings are R.T @ b_head.
    """
    a = math.radians(tilt_deg)
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def _bounded_normal(rng: np.random.Generator, sd: float, shape=None) -> np.ndarray | float:
    draw = rng.normal(0.0, sd, shape) if sd > 0 else (np.zeros(shape) if shape else 0.0)
    return np.clip(draw, -JITTER_CLIP_SIGMA * sd, JITTER_CLIP_SIGMA * sd)


def _jittered_contact(
    finger: str, profile: ParticipantProfile, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    position, orient = contact_pose(finger, profile)
    scale = profile.motor_noise_scale
    position = position + _bounded_normal(rng, CONTACT_JITTER_SD_M * scale, 3)
    tilt = _bounded_normal(rng, ORIENT_JITTER_SD_RAD * scale, 3)
    orient = orient + np.cross(tilt, orient)
    return position, orient / np.linalg.norm(orient)


def _sensor_stream(
    path: MagnetPath,
    profile: ParticipantProfile,
    scenario: ScenarioProfile,
    magnet: MagnetSpec,
    mirror: bool,
    invert: bool,
    ambient_rng: np.random.Generator,
    noise_rng: np.random.Generator,
) -> np.ndarray:
    positions = path.positions
    orientations = path.orientations
    if mirror:
        positions = positions * MIRROR_Y
        orientations = orientations * MIRROR_Y
    moments = magnet.dipole_moment * orientations
    if invert:
        moments = -moments
    field_head = dipole_field_batch(moments, -positions)
    yaw = heading_series(scenario, path.times, ambient_rng)
    field_head = field_head + ambient_in_head_frame(scenario, yaw)
    rotation = mount_rotation(profile.sensor_tilt)
    readings = field_head @ rotation
    if scenario.sensor_noise_sigma > 0:
        readings = readings + noise_rng.normal(0.0, scenario.sensor_noise_sigma, readings.shape)
    return readings


def _trial_rngs(seed: int) -> tuple[np.random.Generator, np.random.Generator, np.random.Generator]:
    children = np.random.SeedSequence([int(seed)]).spawn(3)
    motor, ambient, noise = (np.random.Generator(np.random.PCG64(c)) for c in children)
    return motor, ambient, noise


def _single_tap_path(
    label: TapLabel, profile: ParticipantProfile, motor_rng: np.random.Generator
) -> tuple[MagnetPath, list[TouchEvent]]:
    t_press = motor_rng.uniform(1.05, 1.25)
    dwell = motor_rng.uniform(0.08, 0.12)
    approach = motor_rng.uniform(0.40, 0.55)
    contact, orient = _jittered_contact(label.finger, profile, motor_rng)
    rest = rest_pose(profile) + _bounded_normal(motor_rng, REST_JITTER_SD_M * profile.motor_noise_scale, 3)
    path = tap_trajectory(
        label.finger,
        profile,
        t_press,
        SINGLE_TAP_DURATION_S,
        dwell_s=dwell,
        approach_s=approach,
        retract_s=approach,
        contact_position=contact,
        orientation=orient,
        rest_position=rest,
    )
    events = [TouchEvent(t_press, "press"), TouchEvent(t_press + dwell, "release")]
    return path, events


def _double_tap_path(
    label: PairLabel, profile: ParticipantProfile, motor_rng: np.random.Generator
) -> tuple[MagnetPath, list[TouchEvent]]:
    gap = label.inter_touch_time
    t_press1 = motor_rng.uniform(1.05, 1.20)
    dwell1 = min(motor_rng.uniform(0.08, 0.12), 0.6 * gap)
    dwell2 = motor_rng.uniform(0.08, 0.12)
    approach = motor_rng.uniform(0.40, 0.55)
    c1, orient1 = _jittered_contact(label.first, profile, motor_rng)
    c2, orient2 = _jittered_contact(label.second, profile, motor_rng)
    rest = rest_pose(profile) + _bounded_normal(motor_rng, REST_JITTER_SD_M * profile.motor_noise_scale, 3)

    t_press2 = t_press1 + gap
    t_rel1 = t_press1 + dwell1
    t_rel2 = t_press2 + dwell2
    retract_end = t_rel2 + approach
    duration = DOUBLE_TAP_DURATION_S
    if retract_end >= duration:
        raise ValueError("double-tap timeline does not fit the trace duration")

    times = np.arange(int(round(duration * 80.0))) / 80.0
    # Transit between touches hops through a lifted midpoint.
    lift = 0.5 * (c1 + c2) + np.array([0.0, 0.012, -0.004]) + 0.03 * np.array([0.2, 0.4, -0.9])
    t_mid = t_rel1 + 0.5 * (t_press2 - t_rel1)

    positions = np.empty((times.shape[0], 3))
    spans = [
        (times < t_press1 - approach, None, rest),
        ((times >= t_press1 - approach) & (times < t_press1), (rest, c1, t_press1 - approach, t_press1), None),
        ((times >= t_press1) & (times < t_rel1), None, c1),
        ((times >= t_rel1) & (times < t_mid), (c1, lift, t_rel1, t_mid), None),
        ((times >= t_mid) & (times < t_press2), (lift, c2, t_mid, t_press2), None),
        ((times >= t_press2) & (times < t_rel2), None, c2),
        ((times >= t_rel2) & (times < retract_end), (c2, rest, t_rel2, retract_end), None),
        (times >= retract_end, None, rest),
    ]
    for mask, seg, hold in spans:
        if seg is not None:
            start, end, t0, t1 = seg
            positions[mask] = segment_positions(start, end, times[mask], t0, t1)
        else:
            positions[mask] = hold

    # The ring re-orients during the mid-transit lift (a middle-finger press
    # flexes the magnet-bearing finger, its neighbors do not).
    orientations = np.where((times < t_mid)[:, None], orient1, orient2)
    path = MagnetPath(times=times, positions=positions, orientations=orientations)
    events = [
        TouchEvent(t_press1, "press"),
        TouchEvent(t_rel1, "release"),
        TouchEvent(t_press2, "press"),
        TouchEvent(t_rel2, "release"),
    ]
    return path, events


def simulate_trial(
    label: TapLabel | PairLabel,
    profile: ParticipantProfile,
    scenario: ScenarioProfile,
    seed: int,
    *,
    magnet: MagnetSpec | None = None,
    ring_inverted: bool = False,
) -> RawTrace:
    """Deterministic synthetic trial for the given label, geometry, and environment."""
    magnet = magnet or MagnetSpec.ring_default()
    motor_rng, ambient_rng, noise_rng = _trial_rngs(seed)
    if isinstance(label, PairLabel):
        path, events = _double_tap_path(label, profile, motor_rng)
        mirror = False
    else:
        path, events = _single_tap_path(label, profile, motor_rng)
        mirror = label.hand == "left"
    readings = _sensor_stream(
        path, profile, scenario, magnet, mirror, ring_inverted, ambient_rng, noise_rng
    )
    return RawTrace(
        timestamps=path.times,
        mag=readings,
        touch_events=events,
        label=label,
        participant_id=profile.participant_id,
        scenario=scenario.kind,
    )
