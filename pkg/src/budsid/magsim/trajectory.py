"""Minimum-jerk tap kinematics for the ring-worn magnet, in the head frame.

Head frame: origin at the in-ear sensor, +x face-forward, +y away from the head
on the tapping side, +z up. Right-hand geometry is canonical; left-hand trials
mirror positions and the moment across the x-z plane.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .labels import FINGERS
from .profiles import ParticipantProfile

MIN_DWELL_S = 0.080
MAX_DWELL_S = 0.120
DEFAULT_APPROACH_S = 0.45

# Contact anchor in the head frame: reaches start level with the ear canal
# (x = 0) and land on the bud stem 2 cm above the sensor die.
CONTACT_ANCHOR_X_CM = 0.0
CONTACT_ANCHOR_Z_CM = 2.0

# Pressing pitches the whole hand a few degrees toward the head.
PRESS_DIVE_DEG = 12.0

# A middle-finger press flexes the magnet-bearing finger itself, rolling the
# worn ring about the head's forward axis; neighbor presses leave it straight.
MIDDLE_FLEX_DEG = 30.0

# Reach model: the magnet's travel along the pitched reach chord, from the
# anchor toward the bud, grows weakly with the tapping finger's free length
# beyond the worn ring (calibrated against bench tap captures).
CHORD_BASE_CM = 6.0
CHORD_GAIN = 0.25

# Hand-lowered rest pose sits down, slightly forward and out from the bud.
REST_DIRECTION = np.array([0.35, 0.25, -0.90]) / np.linalg.norm([0.35, 0.25, -0.90])
REST_DISTANCE_M = 0.25

# Magnet axis in the head frame at contact, right-hand non-inverted ring.
# Oriented so the contact-field pattern separates the fingers: the forward-axis
# extremum flips sign between an index press and a middle/ring press, while the
# lateral extremum keeps one sign for all three fingers.
MOMENT_DIR_RIGHT = np.array([-0.7595, 0.6485, 0.0510]) / np.linalg.norm([-0.7595, 0.6485, 0.0510])

FINGER_FORWARD_SIGN = {"index": -1.0, "middle": 0.0, "ring": 1.0}


@dataclass
class MagnetPath:
    """Time-indexed magnet pose: positions in meters, orientations as unit vectors."""

    times: np.ndarray
    positions: np.ndarray
    orientations: np.ndarray

    def __post_init__(self) -> None:
        n = self.times.shape[0]
        if self.positions.shape != (n, 3) or self.orientations.shape != (n, 3):
            raise ValueError("positions and orientations must be (N,3) matching times")


def minimum_jerk_fraction(tau: np.ndarray | float) -> np.ndarray | float:
    """Normalized displacement 10 tau^3 - 15 tau^4 + 6 tau^5, clamped to [0, 1]."""
    t = np.clip(tau, 0.0, 1.0)
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t))


def contact_depth_cm(finger: str, profile: ParticipantProfile) -> float:
    """Magnet travel along the reach chord when this finger lands on the bud."""
    free_length = profile.finger_lengths[finger] - profile.ring_setback_cm()
    return CHORD_BASE_CM + CHORD_GAIN * (free_length - CHORD_BASE_CM)


def middle_flex_rotation(angle_deg: float = MIDDLE_FLEX_DEG) -> np.ndarray:
    """Roll about the head's forward axis applied to the moment on a middle press."""
    c, s = np.cos(np.radians(angle_deg)), np.sin(np.radians(angle_deg))
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def contact_pose(finger: str, profile: ParticipantProfile) -> tuple[np.ndarray, np.ndarray]:
    """Magnet position and orientation at contact for a right-hand tap.

    The magnet rides the middle finger; changing the tapping finger translates
    the whole hand by one finger spacing along the face-forward axis and slides
    the magnet along the reach chord by the finger-length difference.
    """
    if finger not in FINGERS:
        raise ValueError(f"unknown finger {finger!r}; expected one of {FINGERS}")
    pose = profile.hand_pose()
    phi = np.radians(pose.approach_pitch_deg)
    gamma = np.radians(PRESS_DIVE_DEG)
    depth = contact_depth_cm(finger, profile)
    position_cm = np.array(
        [
            CONTACT_ANCHOR_X_CM + depth * np.sin(phi) * np.cos(gamma)
            + FINGER_FORWARD_SIGN[finger] * pose.spacing_cm,
            pose.clearance_cm - depth * np.sin(gamma),
            CONTACT_ANCHOR_Z_CM - depth * np.cos(phi) * np.cos(gamma),
        ]
    )
    orient = MOMENT_DIR_RIGHT
    if finger == "middle":
        orient = middle_flex_rotation() @ orient
    return position_cm * 1.0e-2, orient.copy()


def rest_pose(profile: ParticipantProfile) -> np.ndarray:
    """Magnet position with the hand lowered between taps."""
    middle_contact, _ = contact_pose("middle", profile)
    return middle_contact + REST_DISTANCE_M * REST_DIRECTION


def segment_positions(
    start: np.ndarray, end: np.ndarray, times: np.ndarray, t0: float, t1: float
) -> np.ndarray:
    """Straight-line minimum-jerk interpolation from start (at t0) to end (at t1)."""
    tau = (times - t0) / (t1 - t0)
    frac = np.asarray(minimum_jerk_fraction(tau))[:, None]
    return start[None, :] + frac * (end - start)[None, :]


def tap_trajectory(
    finger: str,
    profile: ParticipantProfile,
    t_contact: float,
    duration: float,
    *,
    dwell_s: float = 0.1,
    approach_s: float = DEFAULT_APPROACH_S,
    retract_s: float = DEFAULT_APPROACH_S,
    sample_rate: float = 80.0,
    contact_position: np.ndarray | None = None,
    orientation: np.ndarray | None = None,
    rest_position: np.ndarray | None = None,
) -> MagnetPath:
    """Rest -> minimum-jerk approach -> dwell at contact -> minimum-jerk retract -> rest.

    Contact/rest poses follow the profile geometry unless explicitly overridden
    (the trial simulator injects motor-noise-perturbed poses that way).
    """
    if duration <= 0:
        raise ValueError("duration must be positive")
    if dwell_s < MIN_DWELL_S:
        raise ValueError(f"dwell must be at least {MIN_DWELL_S * 1e3:.0f} ms")
    nominal_contact, nominal_orient = contact_pose(finger, profile)
    contact = nominal_contact if contact_position is None else np.asarray(contact_position, dtype=np.float64)
    orient = nominal_orient if orientation is None else np.asarray(orientation, dtype=np.float64)
    rest = rest_pose(profile) if rest_position is None else np.asarray(rest_position, dtype=np.float64)

    t_start = t_contact - approach_s
    t_release = t_contact + dwell_s
    if t_start < 0:
        raise ValueError(f"approach would start at {t_start:.3f} s, before the trace begins")
    if t_release + retract_s > duration:
        raise ValueError("retract does not finish within the trace duration")

    times = np.arange(int(round(duration * sample_rate))) / sample_rate
    positions = np.empty((times.shape[0], 3), dtype=np.float64)
    before = times < t_start
    approach = (times >= t_start) & (times < t_contact)
    dwell = (times >= t_contact) & (times < t_release)
    retract = (times >= t_release) & (times < t_release + retract_s)
    after = times >= t_release + retract_s

    positions[before] = rest
    positions[approach] = segment_positions(rest, contact, times[approach], t_start, t_contact)
    positions[dwell] = contact
    positions[retract] = segment_positions(contact, rest, times[retract], t_release, t_release + retract_s)
    positions[after] = rest

    orientations = np.broadcast_to(orient / np.linalg.norm(orient), positions.shape).copy()
    return MagnetPath(times=times, positions=positions, orientations=orientations)
