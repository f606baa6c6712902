"""Per-participant hand geometry and motor characteristics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Population finger lengths in cm (mean, sd), measured base to tip.
FINGER_LENGTH_STATS = {
    "index": (7.20, 0.37),
    "middle": (7.83, 0.44),
    "ring": (7.08, 0.41),
}
FINGER_LENGTH_RANGE_CM = (5.0, 10.0)
SAMPLED_LENGTH_RANGE_CM = (6.4, 9.4)

SENSOR_TILT_MEAN_DEG = 30.0
SENSOR_TILT_SD_DEG = 7.0
SENSOR_TILT_RANGE_DEG = (14.0, 46.0)
RING_SETBACK_MEAN_CM = 1.0
RING_SETBACK_SD_CM = 0.25
RING_SETBACK_RANGE_CM = (0.5, 1.5)

# Latent mount/pose idiosyncrasies, keyed by rng_stream_id (not schema fields):
# pitch of the reach direction below the ear, hand clearance from the head
# plane, and spacing between adjacent finger contact points.  Spreads are
# deliberately wide: habitual reach posture differs a lot between people, and
# that between-user variation is what makes cross-user transfer hard.
APPROACH_PITCH_MEAN_DEG = 26.0
APPROACH_PITCH_SD_DEG = 7.0
APPROACH_PITCH_RANGE_DEG = (20.0, 36.0)
# Clearance is kinematically coupled to pitch: a flat reach keeps the hand
# near the head plane, a steep one holds it farther out.  Sampled as the
# pitch-conditional mean plus a clipped residual.
CLEARANCE_MEAN_CM = 2.8
CLEARANCE_PITCH_SLOPE_CM_PER_DEG = 0.05
CLEARANCE_RESIDUAL_SD_CM = 0.15
CLEARANCE_RESIDUAL_CLIP_CM = 0.30
CLEARANCE_RANGE_CM = (2.0, 3.6)
FINGER_SPACING_MEAN_CM = 2.4
FINGER_SPACING_SD_CM = 0.30
FINGER_SPACING_RANGE_CM = (1.7, 3.1)

_POSE_STREAM_TAG = 0x705E


@dataclass(frozen=True)
class HandPose:
    """Latent mount pose: how this participant habitually reaches for the bud."""

    approach_pitch_deg: float
    clearance_cm: float
    spacing_cm: float


@dataclass(frozen=True)
class ParticipantProfile:
    """Hand geometry in a head-fixed frame: +x face-forward, +z up.

    `ring_offset_from_fingertip` is the distance from the middle fingertip to
    the ring-worn magnet. Pose idiosyncrasies beyond these fields are derived
    deterministically from `rng_stream_id` (stream 0 is the reference pose).
    """

    participant_id: str
    finger_lengths: dict[str, float]
    ring_offset_from_fingertip: float
    sensor_tilt: float
    motor_noise_scale: float
    rng_stream_id: int

    def __post_init__(self) -> None:
        missing = set(FINGER_LENGTH_STATS) - set(self.finger_lengths)
        if missing:
            raise ValueError(f"finger_lengths missing entries for {sorted(missing)}")
        lo, hi = FINGER_LENGTH_RANGE_CM
        for name, length in self.finger_lengths.items():
            if not lo <= length <= hi:
                raise ValueError(f"{name} finger length {length} cm outside [{lo}, {hi}]")
        if self.finger_lengths["index"] >= self.finger_lengths["middle"]:
            raise ValueError("index finger must be shorter than middle")
        if self.finger_lengths["ring"] >= self.finger_lengths["middle"]:
            raise ValueError("ring finger must be shorter than middle")
        if self.motor_noise_scale < 0:
            raise ValueError("motor_noise_scale must be >= 0")
        if self.ring_offset_from_fingertip <= 0:
            raise ValueError("ring_offset_from_fingertip must be positive")

    def ring_setback_cm(self) -> float:
        """Height of the worn ring above the middle-finger base."""
        return self.finger_lengths["middle"] - self.ring_offset_from_fingertip

    def hand_pose(self) -> HandPose:
        """Latent pose for this participant; stream 0 is the population mean."""
        if self.rng_stream_id == 0:
            return HandPose(APPROACH_PITCH_MEAN_DEG, CLEARANCE_MEAN_CM,
                            FINGER_SPACING_MEAN_CM)
        seq = np.random.SeedSequence([_POSE_STREAM_TAG, int(self.rng_stream_id)])
        rng = np.random.Generator(np.random.PCG64(seq))
        pitch = _clipped(rng, APPROACH_PITCH_MEAN_DEG, APPROACH_PITCH_SD_DEG,
                         *APPROACH_PITCH_RANGE_DEG)
        clip = CLEARANCE_RESIDUAL_CLIP_CM
        residual = _clipped(rng, 0.0, CLEARANCE_RESIDUAL_SD_CM, -clip, clip)
        conditional = (CLEARANCE_MEAN_CM
                       + CLEARANCE_PITCH_SLOPE_CM_PER_DEG * (pitch - APPROACH_PITCH_MEAN_DEG))
        clearance = float(np.clip(conditional + residual, *CLEARANCE_RANGE_CM))
        return HandPose(
            approach_pitch_deg=pitch,
            clearance_cm=clearance,
            spacing_cm=_clipped(rng, FINGER_SPACING_MEAN_CM, FINGER_SPACING_SD_CM,
                                *FINGER_SPACING_RANGE_CM),
        )


def _clipped(rng: np.random.Generator, mean: float, sd: float, lo: float, hi: float) -> float:
    return float(np.clip(rng.normal(mean, sd), lo, hi))


def default_profile(participant_id: str = "p00", *, motor_noise_scale: float = 1.0) -> ParticipantProfile:
    """Population-mean geometry with the reference pose (stream 0)."""
    lengths = {name: mean for name, (mean, _) in FINGER_LENGTH_STATS.items()}
    return ParticipantProfile(
        participant_id=participant_id,
        finger_lengths=lengths,
        ring_offset_from_fingertip=lengths["middle"] - RING_SETBACK_MEAN_CM,
        sensor_tilt=SENSOR_TILT_MEAN_DEG,
        motor_noise_scale=motor_noise_scale,
        rng_stream_id=0,
    )


def sample_participants(count: int, seed: int, *, motor_noise_scale: float = 1.0) -> list[ParticipantProfile]:
    """Draw `count` profiles from the population statistics, deterministically per seed."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, 0x9A27])))
    profiles = []
    lo, hi = SAMPLED_LENGTH_RANGE_CM
    for i in range(count):
        while True:
            lengths = {
                name: float(np.clip(rng.normal(mean, sd), lo, hi))
                for name, (mean, sd) in FINGER_LENGTH_STATS.items()
            }
            if lengths["index"] < lengths["middle"] and lengths["ring"] < lengths["middle"]:
                break
        setback = _clipped(rng, RING_SETBACK_MEAN_CM, RING_SETBACK_SD_CM,
                           *RING_SETBACK_RANGE_CM)
        profiles.append(
            ParticipantProfile(
                participant_id=f"p{i:02d}",
                finger_lengths=lengths,
                ring_offset_from_fingertip=lengths["middle"] - setback,
                sensor_tilt=_clipped(rng, SENSOR_TILT_MEAN_DEG, SENSOR_TILT_SD_DEG,
                                     *SENSOR_TILT_RANGE_DEG),
                motor_noise_scale=float(np.clip(rng.normal(1.0, 0.2), 0.4, 1.6)) * motor_noise_scale,
                rng_stream_id=i + 1,
            )
        )
    return profiles
