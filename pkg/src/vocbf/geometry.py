"""Collision-cone and velocity-obstacle geometry for one vehicle/obstacle pair.

All operations are pure functions of their arguments. Angles are wrapped to
(-pi, pi] with :func:`wrap_to_pi` after every angular sum or difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .types import ObstacleView, Vec2, VehicleState

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

# Below this distance ratio the half-angle rate diverges and callers should
# fall back (the cone is still reported, with whatever rate the formula gives).
NEAR_TANGENCY_RATIO = 1.001


class GeometryError(ValueError):
    """Base class for geometric degeneracies."""


class DegenerateGeometryError(GeometryError):
    """Vehicle and obstacle positions coincide."""


class SeparationViolatedError(GeometryError):
    """Distance is already below the required separation."""


class UndefinedAngleError(GeometryError):
    """Approach angle is undefined because the relative velocity is zero."""


def wrap_to_pi(angle: float) -> float:
    """Wrap an angle to (-pi, pi]. Values already in range pass through unchanged."""
    if -math.pi < angle <= math.pi:
        return angle
    return math.pi - (math.pi - angle) % TWO_PI


@dataclass(slots=True)
class RelativeGeometry:
    """Instantaneous relative state of a vehicle/obstacle pair.

    ``r_vec`` points from the vehicle to the obstacle center, ``v_rel`` is
    vehicle velocity minus obstacle velocity, and ``d_dot`` is the rate of
    change of the separation, -(r_vec . v_rel) / d.
    """

    r_vec: Vec2
    d: float
    bearing: float
    v_rel: Vec2
    d_dot: float


def relative_geometry(vehicle: VehicleState, obstacle: ObstacleView) -> RelativeGeometry:
    """Displacement, separation, line-of-sight bearing, relative velocity, closing rate."""
    rx = obstacle.p.x - vehicle.x
    ry = obstacle.p.y - vehicle.y
    d = math.hypot(rx, ry)
    if d == 0.0:
        raise DegenerateGeometryError("vehicle and obstacle positions coincide")
    vrx = vehicle.v * math.cos(vehicle.psi) - obstacle.v_i * math.cos(obstacle.psi_i)
    vry = vehicle.v * math.sin(vehicle.psi) - obstacle.v_i * math.sin(obstacle.psi_i)
    return RelativeGeometry(
        r_vec=Vec2(rx, ry),
        d=d,
        bearing=math.atan2(ry, rx),
        v_rel=Vec2(vrx, vry),
        d_dot=-(rx * vrx + ry * vry) / d,
    )


def collision_cone_half_angle(d: float, d_min: float) -> float:
    """Half-angle arcsin(d_min / d) of the collision cone, in (0, pi/2].

    Raises :class:`SeparationViolatedError` when ``d < d_min``; the fallback
    policy for that case belongs to the safety filter, not here.
    """
    if d_min <= 0.0:
        raise ValueError(f"d_min must be positive, got {d_min}")
    if d < d_min:
        raise SeparationViolatedError(
            f"separation {d:.6g} m is below the required minimum {d_min:.6g} m"
        )
    return math.asin(d_min / d)


def approach_angle(v_rel: Vec2, r_vec: Vec2) -> float:
    """Angle in [0, pi] between the relative velocity and the line of sight.

    Undefined when the relative velocity is zero; the velocity-obstacle
    quantities remain defined there, which is exactly why the controller is
    built on those instead of on this angle.
    """
    nv = v_rel.norm()
    nr = r_vec.norm()
    if nv == 0.0:
        raise UndefinedAngleError("approach angle undefined for zero relative velocity")
    if nr == 0.0:
        raise DegenerateGeometryError("approach angle undefined for coincident positions")
    c = v_rel.dot(r_vec) / (nv * nr)
    if c > 1.0:
        c = 1.0
    elif c < -1.0:
        c = -1.0
    return math.acos(c)


@dataclass(slots=True)
class VoCone:
    """Cone geometry for one vehicle/obstacle pair.

    The collision cone opens by ``beta`` to each side of the line of sight
    (edge directions ``psi_cc_plus/minus``). ``psi_vo_plus/minus`` are the
    vehicle headings at which a velocity of the current magnitude crosses
    the corresponding edge of the obstacle-velocity-translated cone; an edge
    is ``None`` when the vehicle is too slow to reach it
    (|v_i sin(phi)| > v). ``phi_plus/minus`` are the edge angles measured
    from the reversed obstacle course; their sines and cosines are cached
    because every barrier expression reuses them.

    ``psi_cc_rate_plus/minus`` are the exact time derivatives of the edge
    directions: the line-of-sight rate plus/minus the half-angle rate.
    ``near_tangency`` warns that the half-angle rate is close to its
    singularity; ``beta_clamped`` records the pi/2 fallback used when the
    pair is already closer than ``d_min``.

    ``arc_width`` is the unwrapped angular span 2 beta + theta_plus -
    theta_minus between the two heading crossings (None when an edge is
    undefined). It collapses through zero when a faster obstacle recedes:
    no heading at the current speed then collides, the edge pair crosses,
    and the inside/outside sign convention inverts, so edge-based
    constraints are meaningless. Widths at or above pi still bound a real
    arc (they occur near tangency with fast obstacles); the clearance to
    the nearest edge remains locally valid there even though the two-sided
    between-the-edges test does not.
    """

    beta: float
    psi_cc_plus: float
    psi_cc_minus: float
    phi_plus: float
    phi_minus: float
    sin_phi_plus: float
    cos_phi_plus: float
    sin_phi_minus: float
    cos_phi_minus: float
    theta_plus: float | None
    theta_minus: float | None
    psi_vo_plus: float | None
    psi_vo_minus: float | None
    psi_cc_rate_plus: float
    psi_cc_rate_minus: float
    near_tangency: bool
    beta_clamped: bool
    arc_width: float | None

    def edges_defined(self) -> bool:
        return self.psi_vo_plus is not None and self.psi_vo_minus is not None

    def genuine_arc(self) -> bool:
        """True when the edge pair bounds an actual colliding-heading arc."""
        return self.arc_width is not None and self.arc_width > 0.0

    def sin_phi(self, j: int) -> float:
        return self.sin_phi_plus if j > 0 else self.sin_phi_minus

    def cos_phi(self, j: int) -> float:
        return self.cos_phi_plus if j > 0 else self.cos_phi_minus

    def psi_cc_rate(self, j: int) -> float:
        return self.psi_cc_rate_plus if j > 0 else self.psi_cc_rate_minus


def cone_from_relative(
    rel: RelativeGeometry,
    v: float,
    obstacle: ObstacleView,
    d_min: float,
    clamp_violation: bool = False,
) -> VoCone:
    """Build the cone from an already-computed relative geometry.

    With ``clamp_violation`` the half-angle is pinned at pi/2 (rate zero)
    when ``d < d_min`` instead of raising, so a filter can keep producing
    constraints from inside the violated region.
    """
    if v <= 0.0:
        raise ValueError(f"vehicle speed must be positive, got {v}")
    d = rel.d
    clamped = False
    if d < d_min:
        if not clamp_violation:
            raise SeparationViolatedError(
                f"separation {d:.6g} m is below the required minimum {d_min:.6g} m"
            )
        beta = HALF_PI
        beta_rate = 0.0
        clamped = True
    else:
        beta = math.asin(d_min / d)
        gap = d * d - d_min * d_min
        if gap > 0.0:
            beta_rate = -d_min * rel.d_dot / (d * math.sqrt(gap))
        else:
            # exact tangency: the rate is unbounded; hold it at zero and let
            # near_tangency tell the caller not to trust it
            beta_rate = 0.0

    # r_vec changes at the obstacle velocity minus the vehicle velocity,
    # which is -v_rel
    bearing_rate = (rel.r_vec.y * rel.v_rel.x - rel.r_vec.x * rel.v_rel.y) / (d * d)

    psi_cc_p = wrap_to_pi(rel.bearing + beta)
    psi_cc_m = wrap_to_pi(rel.bearing - beta)
    phi_p = wrap_to_pi(math.pi - obstacle.psi_i + psi_cc_p)
    phi_m = wrap_to_pi(math.pi - obstacle.psi_i + psi_cc_m)
    sin_p = math.sin(phi_p)
    cos_p = math.cos(phi_p)
    sin_m = math.sin(phi_m)
    cos_m = math.cos(phi_m)

    ratio = obstacle.v_i / v
    theta_p = psi_vo_p = None
    theta_m = psi_vo_m = None
    arg_p = ratio * sin_p
    if -1.0 <= arg_p <= 1.0:
        theta_p = math.asin(arg_p)
        psi_vo_p = wrap_to_pi(psi_cc_p + theta_p)
    arg_m = ratio * sin_m
    if -1.0 <= arg_m <= 1.0:
        theta_m = math.asin(arg_m)
        psi_vo_m = wrap_to_pi(psi_cc_m + theta_m)
    if theta_p is not None and theta_m is not None:
        arc_width = 2.0 * beta + theta_p - theta_m
    else:
        arc_width = None

    return VoCone(
        beta=beta,
        psi_cc_plus=psi_cc_p,
        psi_cc_minus=psi_cc_m,
        phi_plus=phi_p,
        phi_minus=phi_m,
        sin_phi_plus=sin_p,
        cos_phi_plus=cos_p,
        sin_phi_minus=sin_m,
        cos_phi_minus=cos_m,
        theta_plus=theta_p,
        theta_minus=theta_m,
        psi_vo_plus=psi_vo_p,
        psi_vo_minus=psi_vo_m,
        psi_cc_rate_plus=bearing_rate + beta_rate,
        psi_cc_rate_minus=bearing_rate - beta_rate,
        near_tangency=d < NEAR_TANGENCY_RATIO * d_min,
        beta_clamped=clamped,
        arc_width=arc_width,
    )


def vo_cone(
    vehicle: VehicleState,
    obstacle: ObstacleView,
    d_min: float | None = None,
    clamp_violation: bool = False,
) -> VoCone:
    """Full cone geometry for one pair; ``d_min`` defaults to the view's own."""
    if d_min is None:
        d_min = obstacle.d_min
    rel = relative_geometry(vehicle, obstacle)
    return cone_from_relative(rel, vehicle.v, obstacle, d_min, clamp_violation)


def _min_extrapolated_distance(rel: RelativeGeometry) -> float:
    # r(t) = r_vec + t * w with w = d(r_vec)/dt = -v_rel; minimize |r(t)| over
    # t >= 0 from the closed-form quadratic
    wx = -rel.v_rel.x
    wy = -rel.v_rel.y
    w2 = wx * wx + wy * wy
    c = rel.r_vec.x * wx + rel.r_vec.y * wy
    if w2 == 0.0 or c >= 0.0:
        return rel.d
    m2 = rel.d * rel.d - c * c / w2
    return math.sqrt(m2) if m2 > 0.0 else 0.0


def min_predicted_distance(vehicle: VehicleState, obstacle: ObstacleView) -> float:
    """Minimum separation under straight-line extrapolation of both motions.

    Equals the current distance whenever the pair is not closing.
    """
    return _min_extrapolated_distance(relative_geometry(vehicle, obstacle))


def vo_membership_oracle(vehicle: VehicleState, obstacle: ObstacleView, d_min: float) -> bool:
    """True when holding both current velocities brings the pair closer than d_min.

    Brute-force check from the closed-form minimum of the extrapolated squared
    distance, deliberately independent of the cone angles so it can arbitrate
    them in tests.
    """
    return _min_extrapolated_distance(relative_geometry(vehicle, obstacle)) < d_min
