"""Synthetic magnetometer tap generation."""

from .dataset import (
    DatasetManifest,
    DoubleTapDesign,
    SingleTapDesign,
    design_plans,
    generate_trials,
    simulate_dataset,
    trial_seed,
)
from .dipole import MU0, SingularityError, Vec3, dipole_field, dipole_field_batch
from .labels import FINGERS, HANDS, POSTURES, PairLabel, TapLabel, pair_class_names
from .link import LinkProfile, ble_channel
from .magnet import MagnetSpec, calibrated_remanence, derive_moment, surface_field_tesla
from .profiles import ParticipantProfile, default_profile, sample_participants
from .scenario import (
    SCENARIO_KINDS,
    GaitSway,
    HeadingProcess,
    ScenarioProfile,
    scenario_preset,
)
from .trace import RawTrace, ReceivedTrace, TouchEvent, read_trace, write_trace
from .trajectory import MagnetPath, contact_pose, minimum_jerk_fraction, rest_pose, tap_trajectory
from .trial import mount_rotation, simulate_trial

__all__ = [
    "DatasetManifest",
    "DoubleTapDesign",
    "SingleTapDesign",
    "design_plans",
    "generate_trials",
    "simulate_dataset",
    "trial_seed",
    "MU0",
    "SingularityError",
    "Vec3",
    "dipole_field",
    "dipole_field_batch",
    "FINGERS",
    "HANDS",
    "POSTURES",
    "PairLabel",
    "TapLabel",
    "pair_class_names",
    "LinkProfile",
    "ble_channel",
    "MagnetSpec",
    "calibrated_remanence",
    "derive_moment",
    "surface_field_tesla",
    "ParticipantProfile",
    "default_profile",
    "sample_participants",
    "SCENARIO_KINDS",
    "GaitSway",
    "HeadingProcess",
    "ScenarioProfile",
    "scenario_preset",
    "RawTrace",
    "ReceivedTrace",
    "TouchEvent",
    "read_trace",
    "write_trace",
    "MagnetPath",
    "contact_pose",
    "minimum_jerk_fraction",
    "rest_pose",
    "tap_trajectory",
    "mount_rotation",
    "simulate_trial",
]
