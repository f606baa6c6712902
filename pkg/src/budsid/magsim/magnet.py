"""Cylindrical magnet specification and dipole-moment derivation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dipole import MU0

GAUSS_PER_TESLA = 1.0e4

# Flux density at the center of a flat face, factory-measured targets in gauss.
RING_SURFACE_GAUSS = 4200.0
PILOT_SURFACE_GAUSS = 3600.0


@dataclass(frozen=True)
class MagnetSpec:
    """Axially magnetized cylinder: dimensions in mm, remanence in tesla."""

    length_mm: float
    diameter_mm: float
    remanence_t: float
    dipole_moment: float = field(init=False)

    def __post_init__(self) -> None:
        if self.length_mm <= 0 or self.diameter_mm <= 0 or self.remanence_t <= 0:
            raise ValueError("magnet dimensions and remanence must be positive")
        object.__setattr__(self, "dipole_moment", derive_moment(self))

    def volume_m3(self) -> float:
        radius_m = self.diameter_mm * 1.0e-3 / 2.0
        return math.pi * radius_m**2 * self.length_mm * 1.0e-3

    @classmethod
    def ring_default(cls) -> "MagnetSpec":
        """The 10 x 8 mm ring magnet, remanence calibrated to its surface-gauss target."""
        return cls(10.0, 8.0, calibrated_remanence(10.0, 8.0, RING_SURFACE_GAUSS))

    @classmethod
    def pilot_small(cls) -> "MagnetSpec":
        """The smaller 5 x 4 mm magnet used in the comfort pilot."""
        return cls(5.0, 4.0, calibrated_remanence(5.0, 4.0, PILOT_SURFACE_GAUSS))


def derive_moment(spec: MagnetSpec) -> float:
    """Dipole moment m = Br * V / mu0 in A*m^2 for a uniformly magnetized cylinder."""
    return spec.remanence_t * spec.volume_m3() / MU0


def surface_field_tesla(length_mm: float, diameter_mm: float, remanence_t: float) -> float:
    """Exact on-axis flux density at the center of a flat face of the cylinder."""
    half = remanence_t / 2.0
    radius = diameter_mm / 2.0
    return half * length_mm / math.sqrt(length_mm**2 + radius**2)


def calibrated_remanence(length_mm: float, diameter_mm: float, surface_gauss: float) -> float:
    """Remanence whose face-center field equals the given surface-gauss reading."""
    target_t = surface_gauss / GAUSS_PER_TESLA
    unit_field = surface_field_tesla(length_mm, diameter_mm, 1.0)
    return target_t / unit_field
