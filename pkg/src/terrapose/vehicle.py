"""Rigid vehicle model and contact geometry.

The vehicle is a rigid body with point-contact wheels at fixed body-frame
offsets from the center of mass.  A placement fixes (x, y, yaw); the reduced
configuration solved for by the estimator is q = (z, roll, pitch).  Yaw is
applied first, then pitch, then roll: R = Rx(roll) @ Ry(pitch) @ Rz(yaw).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GRAVITY = 9.8  # m/s^2


@dataclass(frozen=True)
class VehicleModel:
    """Mass properties plus wheel layout.

    ``wheels`` holds body-frame (x, y, z) offsets of the wheel contact points
    relative to the center of mass, one row per wheel.  ``wheel_radius`` is
    descriptive only; contacts act at the stored points.
    """

    mass: float
    inertia_roll: float
    inertia_pitch: float
    wheel_radius: float
    wheels: np.ndarray

    def __post_init__(self):
        wheels = np.ascontiguousarray(np.asarray(self.wheels, dtype=float))
        if wheels.ndim != 2 or wheels.shape[1] != 3 or wheels.shape[0] < 1:
            raise ValueError(f"wheels must be a (k, 3) array with k >= 1, got {wheels.shape}")
        if not np.isfinite(wheels).all():
            raise ValueError("wheel offsets must be finite")
        for name in ("mass", "inertia_roll", "inertia_pitch"):
            value = getattr(self, name)
            if not (value > 0.0) or not np.isfinite(value):
                raise ValueError(f"{name} must be positive, got {value}")
        if not (self.wheel_radius >= 0.0):
            raise ValueError(f"wheel_radius must be non-negative, got {self.wheel_radius}")
        wheels.setflags(write=False)
        object.__setattr__(self, "wheels", wheels)

    @property
    def wheel_count(self):
        return self.wheels.shape[0]

    @property
    def mass_diagonal(self):
        """Diagonal of the reduced mass matrix for (z, roll, pitch)."""
        return np.array([self.mass, self.inertia_roll, self.inertia_pitch])

    @property
    def weight(self):
        return self.mass * GRAVITY

    @property
    def length_scale(self):
        """Characteristic lever arm, used to weight angular tolerances."""
        spans = self.wheels.max(axis=0) - self.wheels.min(axis=0)
        return float(max(spans[0], spans[1], 1e-6))

    def gravity_wrench(self):
        """Generalized gravity load on (z, roll, pitch): straight down, no
        moment about the center of mass."""
        return np.array([-self.weight, 0.0, 0.0])


@dataclass(frozen=True)
class FullConfiguration:
    """Complete pose: planar placement plus the solved height and tilts."""

    x: float
    y: float
    z: float
    roll: float
    pitch: float
    yaw: float

    @classmethod
    def from_parts(cls, placement, q):
        x, y, yaw = placement
        z, roll, pitch = q
        return cls(x=float(x), y=float(y), z=float(z), roll=float(roll), pitch=float(pitch), yaw=float(yaw))


def rotation_matrix(roll: float, pitch: float, yaw: float) -> np.ndarray:
    """World-from-body rotation, R = Rx(roll) @ Ry(pitch) @ Rz(yaw).

    Yaw is applied to the body first, then pitch, then roll.  With roll
    outermost the wheel-height sensitivity to roll is exactly the world
    lateral offset, which keeps the contact lever arms honest at any yaw.
    """
    ca, sa = np.cos(roll), np.sin(roll)
    cb, sb = np.cos(pitch), np.sin(pitch)
    cg, sg = np.cos(yaw), np.sin(yaw)
    return np.array(
        [
            [cb * cg, -cb * sg, sb],
            [ca * sg + sa * sb * cg, ca * cg - sa * sb * sg, -sa * cb],
            [sa * sg - ca * sb * cg, sa * cg + ca * sb * sg, ca * cb],
        ]
    )


def wheel_world_points(model: VehicleModel, placement, q) -> np.ndarray:
    """World coordinates of all wheel contact points, shape (k, 3)."""
    x, y, yaw = placement
    z, roll, pitch = q
    rot = rotation_matrix(roll, pitch, yaw)
    return np.array([x, y, z]) + model.wheels @ rot.T


def gap_vector(model: VehicleModel, placement, q, surface) -> np.ndarray:
    """Vertical clearance of every wheel above the terrain (negative means
    penetration)."""
    _, gaps = _wheel_geometry(model, placement, q, surface)
    return gaps


def _wheel_geometry(model, placement, q, surface):
    x, y, yaw = placement
    z, roll, pitch = q
    rot = rotation_matrix(roll, pitch, yaw)
    return surface.wheel_geometry(rot, np.array([x, y, z]), model.wheels)


@dataclass(frozen=True)
class WrenchMap:
    """Linear map from wheel contact force magnitudes to the generalized
    (vertical force, roll moment, pitch moment) load, plus the gravity load.

    ``columns[:, j]`` is the unit-force wrench of active wheel j.
    """

    columns: np.ndarray
    gravity: np.ndarray

    @property
    def contact_count(self):
        return self.columns.shape[1]


def build_wrench(model, placement, q, active, surface=None, mode="vertical", points=None) -> WrenchMap:
    """Wrench map for the active wheels at the current pose.

    In ``vertical`` mode each wheel pushes straight up: column
    (1, dy, -dx) from the world-frame offset of the contact point relative to
    the center of mass.  In ``normal`` mode the push direction is the terrain
    normal under the wheel, which needs ``surface``.

    ``points`` can pass precomputed wheel world points to avoid recomputing
    them inside the drop loop.
    """
    if mode not in ("vertical", "normal"):
        raise ValueError(f"mode must be 'vertical' or 'normal', got {mode!r}")
    if points is None:
        points = wheel_world_points(model, placement, q)
    active = np.asarray(active, dtype=int)
    x, y, yaw = placement
    z = q[0]
    delta = points[active] - np.array([x, y, z])
    p = delta.shape[0]
    columns = np.empty((3, p))
    if mode == "vertical":
        columns[0] = 1.0
        columns[1] = delta[:, 1]
        columns[2] = -delta[:, 0]
    else:
        if surface is None:
            raise ValueError("normal mode needs the terrain surface")
        for j in range(p):
            n = surface.normal_at(points[active[j], 0], points[active[j], 1])
            d = delta[j]
            columns[0, j] = n[2]
            columns[1, j] = d[1] * n[2] - d[2] * n[1]
            columns[2, j] = d[2] * n[0] - d[0] * n[2]
    return WrenchMap(columns=columns, gravity=model.gravity_wrench())
