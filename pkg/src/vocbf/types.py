"""Shared state and observation types used across the avoidance stack."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple


@dataclass(slots=True)
class Vec2:
    """Planar vector; meters for positions, m/s when used as a velocity."""

    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


@dataclass(slots=True)
class VehicleState:
    """Planar pose and forward speed of the unicycle vehicle.

    The heading ``psi`` is kept in (-pi, pi]; the closed loop maintains
    ``v`` in (0, v_max].
    """

    x: float
    y: float
    psi: float
    v: float

    @property
    def position(self) -> Vec2:
        return Vec2(self.x, self.y)

    @property
    def velocity(self) -> Vec2:
        return Vec2(self.v * math.cos(self.psi), self.v * math.sin(self.psi))


@dataclass(slots=True)
class ControlInput:
    """Commanded turn rate r (rad/s) and forward acceleration a (m/s^2)."""

    r: float
    a: float


class ObstacleBounds(NamedTuple):
    """Declared motion bounds of an obstacle: max speed, accel, turn rate."""

    v_max: float
    a_max: float
    r_max: float


@dataclass(slots=True)
class ObstacleView:
    """One obstacle as seen by the controller at a single instant.

    ``v_i`` is the speed (norm of the velocity), ``psi_i`` the course angle
    of the velocity, and the two rates are their exact time derivatives.
    ``d_min`` is the required center-to-center separation; ``d_psi`` and
    ``d_v`` are the activation distances of the steering and speed filters
    (``d_psi < d_v``).
    """

    p: Vec2
    v_i: float
    psi_i: float
    v_i_dot: float
    psi_i_dot: float
    d_min: float
    d_psi: float
    d_v: float
    bounds: ObstacleBounds

    @property
    def velocity(self) -> Vec2:
        return Vec2(self.v_i * math.cos(self.psi_i), self.v_i * math.sin(self.psi_i))
