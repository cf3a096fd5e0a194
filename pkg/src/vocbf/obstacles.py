"""Closed-form moving-obstacle models and the controller-facing view builder.

Every model exposes exact position, speed, course, and their rates at any
query time, plus the motion bounds it is guaranteed never to exceed. The
controller receives exact rates (oracle access); state estimation is out of
scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

from .geometry import wrap_to_pi
from .types import ObstacleBounds, ObstacleView, Vec2

HALF_PI = 0.5 * math.pi

# (x, y, speed, course, speed_rate, course_rate)
MotionState = tuple[float, float, float, float, float, float]


@dataclass
class ConstantVelocity:
    """Straight-line motion at a fixed velocity."""

    p0: Vec2
    velocity: Vec2

    def __post_init__(self) -> None:
        self._speed = self.velocity.norm()
        self._course = (
            wrap_to_pi(math.atan2(self.velocity.y, self.velocity.x))
            if self._speed > 0.0
            else 0.0
        )

    def state_at(self, t: float) -> MotionState:
        return (
            self.p0.x + self.velocity.x * t,
            self.p0.y + self.velocity.y * t,
            self._speed,
            self._course,
            0.0,
            0.0,
        )

    def bounds(self) -> ObstacleBounds:
        return ObstacleBounds(self._speed, 0.0, 0.0)


@dataclass
class LinePatrol:
    """Back-and-forth motion parallel to the y axis at fixed x.

    Cruises at axis_speed between -bound and +bound; reversals are symmetric
    ramps at turn_accel timed so the speed hits zero exactly at the bound.
    The course flips by pi at the zero-speed instant and the course rate is
    reported as zero throughout: every course-rate term in the barrier
    derivatives carries a factor v_i, which vanishes at the flip.

    The initial condition is (y0, direction): the y position at t = 0 and
    the sign of travel (+1 up). y0 = +bound forces direction -1 and
    y0 = -bound forces +1, since the bound is where travel reverses.
    """

    x: float
    y0: float
    direction: int
    axis_speed: float = 0.5
    bound: float = 50.0
    turn_accel: float = 0.1
    phase: float = field(init=False)

    def __post_init__(self) -> None:
        if self.axis_speed <= 0.0 or self.turn_accel <= 0.0:
            raise ValueError("axis_speed and turn_accel must be positive")
        if self.direction not in (1, -1):
            raise ValueError(f"direction must be +1 or -1, got {self.direction}")
        self._t_ramp = self.axis_speed / self.turn_accel
        self._ramp_dist = 0.5 * self.axis_speed * self.axis_speed / self.turn_accel
        if self.bound <= self._ramp_dist:
            raise ValueError(
                f"bound ({self.bound}) must exceed the reversal ramp distance "
                f"({self._ramp_dist})"
            )
        if abs(self.y0) > self.bound:
            raise ValueError(f"y0 ({self.y0}) outside [-bound, bound]")
        if self.y0 == self.bound and self.direction != -1:
            raise ValueError("at y0 = +bound the motion must head down (direction -1)")
        if self.y0 == -self.bound and self.direction != 1:
            raise ValueError("at y0 = -bound the motion must head up (direction +1)")
        self._t_cruise = 2.0 * (self.bound - self._ramp_dist) / self.axis_speed
        self._half_period = 2.0 * self._t_ramp + self._t_cruise
        self._period = 2.0 * self._half_period
        self.phase = self._phase_for(self.y0, self.direction)

    def _time_going_up(self, y: float) -> float:
        # y is strictly monotone over one half cycle, so this inverse is unique
        a = self.turn_accel
        if y <= -self.bound + self._ramp_dist:
            return math.sqrt(max(2.0 * (y + self.bound) / a, 0.0))
        if y < self.bound - self._ramp_dist:
            return self._t_ramp + (y - (-self.bound + self._ramp_dist)) / self.axis_speed
        rem = self.axis_speed * self.axis_speed - 2.0 * a * (y - (self.bound - self._ramp_dist))
        s = (self.axis_speed - math.sqrt(max(rem, 0.0))) / a
        return self._t_ramp + self._t_cruise + s

    def _phase_for(self, y0: float, direction: int) -> float:
        if direction == 1:
            return self._time_going_up(y0)
        return self._half_period + self._time_going_up(-y0)

    def state_at(self, t: float) -> MotionState:
        tau = (t + self.phase) % self._period
        if tau < self._half_period:
            sgn = 1.0
            s = tau
        else:
            sgn = -1.0
            s = tau - self._half_period
        a = self.turn_accel
        if s < self._t_ramp:
            speed = a * s
            y_rel = -self.bound + 0.5 * a * s * s
            speed_rate = a
        elif s < self._t_ramp + self._t_cruise:
            speed = self.axis_speed
            y_rel = -self.bound + self._ramp_dist + self.axis_speed * (s - self._t_ramp)
            speed_rate = 0.0
        else:
            q = s - self._t_ramp - self._t_cruise
            speed = self.axis_speed - a * q
            y_rel = self.bound - self._ramp_dist + self.axis_speed * q - 0.5 * a * q * q
            speed_rate = -a
        return (self.x, sgn * y_rel, speed, sgn * HALF_PI, speed_rate, 0.0)

    def bounds(self) -> ObstacleBounds:
        return ObstacleBounds(self.axis_speed, self.turn_accel, 0.0)


@dataclass
class CircularOrbit:
    """Uniform motion on a circle; negative angular_rate orbits clockwise."""

    center: Vec2
    orbit_radius: float
    angular_rate: float
    phase: float = 0.0

    def __post_init__(self) -> None:
        if self.orbit_radius <= 0.0:
            raise ValueError(f"orbit_radius must be positive, got {self.orbit_radius}")
        self._speed = self.orbit_radius * abs(self.angular_rate)

    def state_at(self, t: float) -> MotionState:
        th = self.phase + self.angular_rate * t
        if self.angular_rate == 0.0:
            course = 0.0
        else:
            # tangent direction: a quarter turn from the radial angle, toward
            # the sense of rotation
            course = wrap_to_pi(th + math.copysign(HALF_PI, self.angular_rate))
        return (
            self.center.x + self.orbit_radius * math.cos(th),
            self.center.y + self.orbit_radius * math.sin(th),
            self._speed,
            course,
            0.0,
            self.angular_rate,
        )

    def bounds(self) -> ObstacleBounds:
        return ObstacleBounds(self._speed, 0.0, abs(self.angular_rate))


Motion = Union[ConstantVelocity, LinePatrol, CircularOrbit]


@dataclass
class Obstacle:
    """A motion model annotated with its radius and the resolved distances:
    required separation d_min and the activation distances d_psi < d_v."""

    motion: Motion
    radius: float
    d_min: float
    d_psi: float
    d_v: float
    bounds: ObstacleBounds = field(init=False)

    def __post_init__(self) -> None:
        if self.radius <= 0.0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if not 0.0 < self.d_min < self.d_psi < self.d_v:
            raise ValueError(
                f"need 0 < d_min < d_psi < d_v, got {self.d_min}, {self.d_psi}, {self.d_v}"
            )
        self.bounds = self.motion.bounds()


def build_obstacle(
    motion: Motion,
    radius: float,
    vehicle_radius: float,
    d_psi_margin: float,
    d_v_margin: float,
    d_min: float | None = None,
) -> Obstacle:
    """Resolve the separation and activation distances for one obstacle.

    d_min defaults to the sum of the radii and may only be overridden
    larger (extra clearance between the boundaries). The activation margins
    are added on top of d_min; steering activates inside the speed range.
    """
    base = vehicle_radius + radius
    if d_min is None:
        d_min = base
    elif d_min < base:
        raise ValueError(
            f"d_min override ({d_min}) must be at least the combined radii ({base})"
        )
    if not 0.0 < d_psi_margin < d_v_margin:
        raise ValueError(
            f"need 0 < d_psi_margin < d_v_margin, got {d_psi_margin}, {d_v_margin}"
        )
    return Obstacle(motion, radius, d_min, d_min + d_psi_margin, d_min + d_v_margin)


def obstacle_state_at(obstacle: Obstacle, t: float) -> ObstacleView:
    """Evaluate the motion at time t and attach the distance annotations."""
    x, y, speed, course, speed_rate, course_rate = obstacle.motion.state_at(t)
    return ObstacleView(
        p=Vec2(x, y),
        v_i=speed,
        psi_i=course,
        v_i_dot=speed_rate,
        psi_i_dot=course_rate,
        d_min=obstacle.d_min,
        d_psi=obstacle.d_psi,
        d_v=obstacle.d_v,
        bounds=obstacle.bounds,
    )


def check_obstacle_bounds(
    motion: Motion, horizon: float, dt: float = 1e-2, tol: float = 1e-9
) -> bool:
    """Sample the motion over [0, horizon] and confirm its declared bounds hold."""
    if horizon <= 0.0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    declared = motion.bounds()
    steps = int(round(horizon / dt))
    for k in range(steps + 1):
        _, _, speed, _, speed_rate, course_rate = motion.state_at(k * dt)
        if (
            speed > declared.v_max + tol
            or abs(speed_rate) > declared.a_max + tol
            or abs(course_rate) > declared.r_max + tol
        ):
            return False
    return True
