"""Speed and steering barriers with input-affine time derivatives.

The speed barrier keeps the vehicle fast enough relative to each obstacle
that an evasive heading exists (the velocity-obstacle edges stay defined,
with margin kappa_min). The steering barrier keeps the heading at least
delta_min outside the velocity-obstacle cone. Both are minima of smooth
component functions; constraints are generated from the almost-active
components, the ones within eps of the minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .geometry import VoCone, wrap_to_pi
from .types import ObstacleView

if TYPE_CHECKING:
    from .safety_filter import SafetyParams

# (k, j) sign pairs of the four speed components, in fixed evaluation order
SPEED_COMPONENT_KEYS = ((1, 1), (1, -1), (-1, 1), (-1, -1))

# Steering rates divide by sqrt(v^2 - v_i^2 sin^2 phi); below this the row
# is reported singular instead of emitted with a garbage coefficient.
RATE_DENOMINATOR_FLOOR = 1e-6


class BarrierError(ValueError):
    """Base class for barrier evaluation failures."""


class UndefinedEdgeError(BarrierError):
    """A velocity-obstacle edge needed by the steering barrier is undefined."""


class SingularRateError(BarrierError):
    """The steering-rate denominator is numerically zero."""


@dataclass(slots=True)
class AffineRate:
    """Input-affine time derivative: rate(u) = slope * u + intercept."""

    slope: float
    intercept: float

    def at(self, u: float) -> float:
        return self.slope * u + self.intercept


@dataclass(slots=True)
class SpeedBarrierEval:
    """The four speed components v + k * v_i * sin(phi_j), their min minus
    kappa_min, and the almost-active (k, j) index set."""

    components: dict[tuple[int, int], float]
    h_v: float
    almost_active: tuple[tuple[int, int], ...]


def eval_speed_barrier(
    v: float, obstacle: ObstacleView, cone: VoCone, params: "SafetyParams"
) -> SpeedBarrierEval:
    """Evaluate the speed barrier for one obstacle.

    h_v >= 0 guarantees v >= v_i * |sin phi_j| + kappa_min for both edges.
    """
    tp = obstacle.v_i * cone.sin_phi_plus
    tm = obstacle.v_i * cone.sin_phi_minus
    components = {
        (1, 1): v + tp,
        (1, -1): v + tm,
        (-1, 1): v - tp,
        (-1, -1): v - tm,
    }
    floor = min(components.values())
    # |h_kj - h_v| = (h_kj - floor) + kappa_min, evaluated in that order so a
    # minimizer is almost-active whenever eps_v >= kappa_min, with no rounding
    # wobble from the subtraction inside h_v
    kappa = params.kappa_min
    eps = params.eps_v
    almost = tuple(
        key for key, value in components.items() if (value - floor) + kappa <= eps
    )
    return SpeedBarrierEval(components, floor - kappa, almost)


def speed_rate_affine(obstacle: ObstacleView, cone: VoCone, k: int, j: int) -> AffineRate:
    """Time derivative of the (k, j) speed component, affine in the acceleration.

    The slope is 1 for every component; the intercept collects the obstacle
    acceleration and the cone-edge motion:
    k * (v_i_dot * sin(phi_j) + v_i * cos(phi_j) * (psi_cc_rate_j - psi_i_dot)).
    """
    if j > 0:
        s, c, cc_rate = cone.sin_phi_plus, cone.cos_phi_plus, cone.psi_cc_rate_plus
    else:
        s, c, cc_rate = cone.sin_phi_minus, cone.cos_phi_minus, cone.psi_cc_rate_minus
    intercept = k * (
        obstacle.v_i_dot * s + obstacle.v_i * c * (cc_rate - obstacle.psi_i_dot)
    )
    return AffineRate(1.0, intercept)


@dataclass(slots=True)
class SteeringBarrierEval:
    """Angular clearances to the velocity-obstacle edges.

    ``delta_plus`` = psi - psi_vo_plus and ``delta_minus`` = psi_vo_minus - psi,
    both wrapped; ``delta_vo`` is whichever has the smaller magnitude (the
    minus side on exact ties). It is negative when the vehicle velocity lies
    inside the velocity-obstacle cone and positive outside, so
    h_psi = delta_vo - delta_min encodes staying clear of the cone by at
    least delta_min.
    """

    delta_plus: float
    delta_minus: float
    delta_vo: float
    h_psi: float
    almost_active: tuple[int, ...]


def eval_steering_barrier(
    psi: float, cone: VoCone, params: "SafetyParams"
) -> SteeringBarrierEval:
    """Evaluate the steering barrier; both cone edges must be defined."""
    if cone.psi_vo_plus is None or cone.psi_vo_minus is None:
        raise UndefinedEdgeError(
            "velocity-obstacle edge undefined at the current speed"
        )
    dp = wrap_to_pi(psi - cone.psi_vo_plus)
    dm = wrap_to_pi(cone.psi_vo_minus - psi)
    dvo = dm if abs(dm) <= abs(dp) else dp
    h_psi = dvo - params.delta_min
    eps = params.eps_psi
    almost = tuple(jj for jj, dj in ((1, dp), (-1, dm)) if abs(dj - dvo) <= eps)
    return SteeringBarrierEval(dp, dm, dvo, h_psi, almost)


def steering_rate_affine(
    v: float, obstacle: ObstacleView, cone: VoCone, u2: float, j: int
) -> AffineRate:
    """Time derivative of the steering component j, affine in the turn rate.

    The slope is +1 for the plus edge and -1 for the minus edge. The
    intercept carries the edge motion and the speed coupling through the
    committed acceleration u2; it divides by sqrt(v^2 - v_i^2 sin^2 phi_j),
    which has a guaranteed margin whenever the speed barrier holds.
    """
    if j > 0:
        s, c, cc_rate = cone.sin_phi_plus, cone.cos_phi_plus, cone.psi_cc_rate_plus
        slope = 1.0
    else:
        s, c, cc_rate = cone.sin_phi_minus, cone.cos_phi_minus, cone.psi_cc_rate_minus
        slope = -1.0
    vi = obstacle.v_i
    gap = v * v - vi * vi * s * s
    root = math.sqrt(gap) if gap > 0.0 else 0.0
    if root <= RATE_DENOMINATOR_FLOOR:
        raise SingularRateError(
            f"steering rate singular: sqrt(v^2 - v_i^2 sin^2 phi) = {root:.3g}"
        )
    drift = (
        cc_rate
        + (cc_rate - obstacle.psi_i_dot) * vi * c / root
        + (v * obstacle.v_i_dot - vi * u2) * s / (v * root)
    )
    return AffineRate(slope, -slope * drift)
