"""Point-dipole field model for a ring-worn permanent magnet."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MU0 = 4.0e-7 * math.pi  # vacuum permeability, T*m/A
TESLA_TO_MICROTESLA = 1.0e6
MIN_SOURCE_DISTANCE_M = 1.0e-3


class SingularityError(ValueError):
    """Field requested closer to the source than the dipole model allows."""


@dataclass(frozen=True)
class Vec3:
    """Cartesian triple: field in microtesla, position in meters, or moment in A*m^2."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for v in (self.x, self.y, self.z):
            if not math.isfinite(v):
                raise ValueError(f"non-finite component in Vec3({self.x}, {self.y}, {self.z})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=np.float64)

    @classmethod
    def from_array(cls, a: np.ndarray) -> "Vec3":
        return cls(float(a[0]), float(a[1]), float(a[2]))

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


def dipole_field(moment: Vec3, r: Vec3) -> Vec3:
    """Magnetic field (microtesla) of a point dipole `moment` (A*m^2) at offset `r` (m).

    B = (mu0 / 4 pi) * (3 (m . rhat) rhat - m) / |r|^3
    """
    out = dipole_field_batch(moment.as_array()[None, :], r.as_array()[None, :])
    return Vec3.from_array(out[0])


def dipole_field_batch(moments: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Vectorized dipole law: (N,3) moments and (N,3) offsets -> (N,3) fields in microtesla.

    A single moment row broadcasts against N positions.
    """
    m = np.atleast_2d(np.asarray(moments, dtype=np.float64))
    r = np.atleast_2d(np.asarray(positions, dtype=np.float64))
    if m.shape[0] == 1 and r.shape[0] > 1:
        m = np.broadcast_to(m, r.shape)
    dist = np.linalg.norm(r, axis=1)
    if np.any(dist < MIN_SOURCE_DISTANCE_M):
        worst = float(dist.min())
        raise SingularityError(
            f"field requested {worst * 1e3:.3f} mm from the dipole; minimum is "
            f"{MIN_SOURCE_DISTANCE_M * 1e3:.0f} mm"
        )
    rhat = r / dist[:, None]
    m_dot_rhat = np.einsum("ij,ij->i", m, rhat)
    tesla = (MU0 / (4.0 * math.pi)) * (3.0 * m_dot_rhat[:, None] * rhat - m) / dist[:, None] ** 3
    return tesla * TESLA_TO_MICROTESLA
