"""Nominal target-tracking laws: point at the target, hold the cruise speed."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import wrap_to_pi
from .types import Vec2, VehicleState


@dataclass(frozen=True)
class GuidanceConfig:
    """Target point, desired cruise speed, proportional gains, and the
    acceptance distance at which the task counts as done."""

    target: Vec2
    v_d: float
    k_r: float
    k_a: float
    d_acc: float

    def __post_init__(self) -> None:
        if self.v_d <= 0.0:
            raise ValueError(f"v_d must be positive, got {self.v_d}")
        if self.k_r <= 0.0 or self.k_a <= 0.0:
            raise ValueError("guidance gains must be positive")
        if self.d_acc <= 0.0:
            raise ValueError(f"d_acc must be positive, got {self.d_acc}")


def desired_heading(p: Vec2, target: Vec2) -> float:
    """Heading of the straight line from p to the target, in (-pi, pi]."""
    if p.x == target.x and p.y == target.y:
        raise ValueError("desired heading undefined at the target point")
    return math.atan2(target.y - p.y, target.x - p.x)


def nominal_inputs(state: VehicleState, config: GuidanceConfig) -> tuple[float, float]:
    """Proportional heading-rate and acceleration commands, unclamped.

    Saturation is the safety filter's single responsibility. The heading
    error is wrapped so the command always takes the shorter rotation. At
    the exact target point (normally unreachable, the task ends at d_acc)
    the current heading is held.
    """
    if state.x == config.target.x and state.y == config.target.y:
        heading_error = 0.0
    else:
        heading_error = wrap_to_pi(state.psi - desired_heading(state.position, config.target))
    r_d = -config.k_r * heading_error
    a_d = -config.k_a * (state.v - config.v_d)
    return r_d, a_d


def target_reached(p: Vec2, config: GuidanceConfig) -> bool:
    """True once p is within d_acc of the target (inclusive)."""
    return math.hypot(p.x - config.target.x, p.y - config.target.y) <= config.d_acc
