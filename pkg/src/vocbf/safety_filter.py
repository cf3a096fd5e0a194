"""Cascaded scalar safety filters: acceleration first, then steering.

Each filter solves a one-variable quadratic program: stay as close as
possible to the nominal input subject to barrier-derivative constraints
slope * u + intercept >= -gamma * h and the symmetric input box. Obstacles
enter a filter only inside its activation distance (d_v for speed, d_psi
for steering, with d_psi < d_v), and only their almost-active barrier
components contribute rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .barriers import (
    SpeedBarrierEval,
    SteeringBarrierEval,
    eval_speed_barrier,
    eval_steering_barrier,
    speed_rate_affine,
    steering_rate_affine,
)
from .geometry import DegenerateGeometryError, VoCone, cone_from_relative, relative_geometry
from .types import ControlInput, ObstacleBounds, ObstacleView, VehicleState

INACTIVE = "inactive"
MODIFIED = "modified"
SATURATED_FEASIBLE = "saturated_feasible"
INFEASIBLE_BEST_EFFORT = "infeasible_best_effort"


@dataclass(frozen=True)
class SafetyParams:
    """Scalar tuning of the safety filters.

    kappa_min is the speed margin kept above the obstacle-speed requirement
    and delta_min the angular margin kept outside the cone; eps_v and
    eps_psi widen the almost-active sets. gamma scales the linear barrier
    relaxation (constraint rate >= -gamma * h). Per-obstacle activation
    distances live on the obstacle views, not here.

    Configurations with eps_v < kappa_min would leave every speed constraint
    inactive even on the barrier boundary, so they are rejected outright.
    """

    kappa_min: float
    delta_min: float
    eps_v: float
    eps_psi: float
    gamma: float
    r_max: float
    a_max: float
    v_max: float

    def __post_init__(self) -> None:
        for name in ("kappa_min", "eps_v", "eps_psi", "gamma", "r_max", "a_max", "v_max"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0.0 <= self.delta_min < 0.5 * math.pi:
            raise ValueError(f"delta_min must be in [0, pi/2), got {self.delta_min}")
        if self.eps_v < self.kappa_min:
            raise ValueError(
                f"eps_v ({self.eps_v}) must be at least kappa_min ({self.kappa_min}); "
                "smaller values empty the almost-active set"
            )


@dataclass(slots=True)
class ScalarConstraint:
    """One-sided linear constraint slope * u >= lower_rhs, slope in {+1, -1}."""

    slope: float
    lower_rhs: float


@dataclass(slots=True)
class FilterOutcome:
    """Result of one scalar filter solve.

    ``margin`` is the slack of the tightest constraint at the returned value
    (+inf with no constraints, negative when infeasible).
    """

    value: float
    status: str
    margin: float


def solve_scalar_qp(
    desired: float, box: float, constraints: list[ScalarConstraint]
) -> FilterOutcome:
    """Minimize (u - desired)^2 over [-box, box] under the constraints.

    The constraints intersect to an interval, so the minimizer is a clamp of
    the desired input. Infeasible instances return the box endpoint with the
    smallest maximum constraint violation (ties broken toward the desired
    input, then toward -box); the status reports the condition instead of
    raising so the caller always receives a command.
    """
    if box <= 0.0:
        raise ValueError(f"box limit must be positive, got {box}")
    lower = -math.inf
    upper = math.inf
    for con in constraints:
        if con.slope > 0.0:
            if con.lower_rhs > lower:
                lower = con.lower_rhs
        else:
            bound = -con.lower_rhs
            if bound < upper:
                upper = bound
    lo = lower if lower > -box else -box
    hi = upper if upper < box else box
    if lo <= hi:
        value = min(max(desired, lo), hi)
        if value == desired:
            status = INACTIVE
        elif value == lo:
            status = MODIFIED if lower >= -box else SATURATED_FEASIBLE
        else:
            status = MODIFIED if upper <= box else SATURATED_FEASIBLE
        margin = math.inf
        for con in constraints:
            slack = con.slope * value - con.lower_rhs
            if slack < margin:
                margin = slack
        return FilterOutcome(value, status, margin)

    def max_violation(u: float) -> float:
        worst = 0.0
        for con in constraints:
            gap = con.lower_rhs - con.slope * u
            if gap > worst:
                worst = gap
        return worst

    _, _, value = min(
        (max_violation(u), abs(u - desired), u) for u in (-box, box)
    )
    return FilterOutcome(value, INFEASIBLE_BEST_EFFORT, -max_violation(value))


def _clamped_passthrough(desired: float, box: float) -> FilterOutcome:
    value = min(max(desired, -box), box)
    return FilterOutcome(value, INACTIVE if value == desired else SATURATED_FEASIBLE, math.inf)


SpeedItem = tuple[ObstacleView, VoCone, SpeedBarrierEval]
SteeringItem = tuple[ObstacleView, VoCone, SteeringBarrierEval]


def acceleration_filter(
    state: VehicleState,
    gated: list[SpeedItem],
    a_desired: float,
    params: SafetyParams,
    dt_hint: float = 0.01,
) -> FilterOutcome:
    """Acceleration command from the speed-barrier QP.

    With nothing gated the nominal acceleration is simply clamped. Otherwise
    every almost-active component of every gated obstacle contributes a lower
    bound, plus two rows that keep the discrete speed update v + a * dt_hint
    inside [kappa_min, v_max]; those rows are an extension of the published
    constraint set, documented as such.
    """
    if not gated:
        return _clamped_passthrough(a_desired, params.a_max)
    gamma = params.gamma
    constraints: list[ScalarConstraint] = []
    for view, cone, sb in gated:
        relax = -gamma * sb.h_v
        for k, j in sb.almost_active:
            rate = speed_rate_affine(view, cone, k, j)
            constraints.append(ScalarConstraint(1.0, relax - rate.intercept))
    constraints.append(ScalarConstraint(1.0, (params.kappa_min - state.v) / dt_hint))
    constraints.append(ScalarConstraint(-1.0, (state.v - params.v_max) / dt_hint))
    return solve_scalar_qp(a_desired, params.a_max, constraints)


def steering_filter(
    state: VehicleState,
    gated: list[SteeringItem],
    u2: float,
    r_desired: float,
    params: SafetyParams,
) -> FilterOutcome:
    """Turn-rate command from the steering-barrier QP.

    ``u2`` is the already-committed acceleration; it enters the constraint
    intercepts, never the decision variable. Callers are expected to have
    excluded obstacles with undefined edges or singular rates.
    """
    if not gated:
        return _clamped_passthrough(r_desired, params.r_max)
    gamma = params.gamma
    constraints: list[ScalarConstraint] = []
    for view, cone, sb in gated:
        relax = -gamma * sb.h_psi
        for j in sb.almost_active:
            rate = steering_rate_affine(state.v, view, cone, u2, j)
            constraints.append(ScalarConstraint(rate.slope, relax - rate.intercept))
    return solve_scalar_qp(r_desired, params.r_max, constraints)


@dataclass(slots=True)
class ObstacleStepInfo:
    """Per-obstacle diagnostics for one controller tick.

    Barrier values are None outside the speed-activation distance (the
    controller never evaluates them there); ``h_psi`` is also None when the
    steering barrier is unusable: cone edges undefined, edge pair not
    bounding a genuine arc, or (for steering-gated obstacles) a singular
    rate. A None under gate_psi marks exactly the obstacles that produced
    no steering constraint.
    """

    d: float
    gate_v: bool
    gate_psi: bool
    h_v: float | None
    h_psi: float | None
    violation: bool
    edge_undefined: bool


@dataclass(slots=True)
class StepDiagnostics:
    accel: FilterOutcome
    steer: FilterOutcome
    obstacles: list[ObstacleStepInfo]


def _steering_rates_usable(
    v: float, view: ObstacleView, cone: VoCone, almost_active: tuple[int, ...], kappa_min: float
) -> bool:
    # A healthy speed barrier guarantees sqrt(v^2 - v_i^2 sin^2 phi) >= kappa_min;
    # below that the rate intercepts blow up, so the row is withheld until the
    # speed filter restores the margin.
    floor_sq = kappa_min * kappa_min
    vi = view.v_i
    for j in almost_active:
        s = cone.sin_phi_plus if j > 0 else cone.sin_phi_minus
        if v * v - vi * vi * s * s < floor_sq:
            return False
    return True


def gather_obstacle_terms(
    state: VehicleState, obstacles: list[ObstacleView], params: SafetyParams
) -> tuple[list[ObstacleStepInfo], list[SpeedItem], list[SteeringItem]]:
    """Gate obstacles by distance and evaluate barriers for the gated ones.

    Obstacles already violating d_min get a pi/2-clamped cone and a
    violation flag but still contribute constraints (best effort beats
    none). Coincident positions contribute diagnostics only.

    Steering terms are emitted only where the barrier's sign convention is
    geometrically meaningful (edges defined and bounding a genuine arc);
    elsewhere the speed filter is responsible for restoring a usable
    steering geometry, and the diagnostic records the skip.
    """
    infos: list[ObstacleStepInfo] = []
    speed_gated: list[SpeedItem] = []
    steer_gated: list[SteeringItem] = []
    x = state.x
    y = state.y
    for view in obstacles:
        # cheap distance-only path for obstacles beyond every gate
        d = math.hypot(view.p.x - x, view.p.y - y)
        if d > view.d_v:
            infos.append(ObstacleStepInfo(d, False, False, None, None, False, False))
            continue
        try:
            rel = relative_geometry(state, view)
        except DegenerateGeometryError:
            infos.append(ObstacleStepInfo(0.0, True, True, None, None, True, True))
            continue
        violation = d < view.d_min
        gate_v = True
        gate_psi = d <= view.d_psi
        h_v: float | None = None
        h_psi: float | None = None
        edge_undefined = False
        if gate_v:
            cone = cone_from_relative(rel, state.v, view, view.d_min, clamp_violation=True)
            sb = eval_speed_barrier(state.v, view, cone, params)
            h_v = sb.h_v
            speed_gated.append((view, cone, sb))
            st: SteeringBarrierEval | None = None
            if cone.genuine_arc():
                st = eval_steering_barrier(state.psi, cone, params)
                h_psi = st.h_psi
            if gate_psi:
                if st is not None and _steering_rates_usable(
                    state.v, view, cone, st.almost_active, params.kappa_min
                ):
                    steer_gated.append((view, cone, st))
                else:
                    edge_undefined = True
                    h_psi = None
        infos.append(
            ObstacleStepInfo(d, gate_v, gate_psi, h_v, h_psi, violation, edge_undefined)
        )
    return infos, speed_gated, steer_gated


def control_step(
    state: VehicleState,
    obstacles: list[ObstacleView],
    guidance: tuple[float, float],
    params: SafetyParams,
    dt_hint: float = 0.01,
) -> tuple[ControlInput, StepDiagnostics]:
    """One controller tick.

    The acceleration is filtered first (or passed through clamped when no
    obstacle is inside d_v); the steering filter then runs with that
    committed acceleration (or passes through when nothing is inside
    d_psi). The acceleration never depends on the steering constraints.
    """
    r_d, a_d = guidance
    infos, speed_gated, steer_gated = gather_obstacle_terms(state, obstacles, params)
    any_gate_v = any(info.gate_v for info in infos)
    any_gate_psi = any(info.gate_psi for info in infos)
    if any_gate_v:
        accel = acceleration_filter(state, speed_gated, a_d, params, dt_hint)
    else:
        accel = _clamped_passthrough(a_d, params.a_max)
    if any_gate_psi:
        steer = steering_filter(state, steer_gated, accel.value, r_d, params)
    else:
        steer = _clamped_passthrough(r_d, params.r_max)
    return ControlInput(steer.value, accel.value), StepDiagnostics(accel, steer, infos)


@dataclass(slots=True)
class MarginCheck:
    """Capability check of the vehicle limits against one obstacle's bounds.

    ``speed_ok`` and ``accel_ok`` are hard requirements for single-obstacle
    avoidance; ``turn_rate_ok`` compares against a deliberately conservative
    bound (the commanded acceleration typically opposes the obstacle's), so
    a failure there is a warning, not a rejection.
    """

    speed_ok: bool
    accel_ok: bool
    turn_rate_ok: bool
    turn_rate_required: float

    @property
    def hard_pass(self) -> bool:
        return self.speed_ok and self.accel_ok


@dataclass(slots=True)
class ValidationReport:
    checks: list[MarginCheck] = field(default_factory=list)

    @property
    def hard_pass(self) -> bool:
        return all(check.hard_pass for check in self.checks)

    @property
    def warnings(self) -> list[int]:
        return [i for i, check in enumerate(self.checks) if not check.turn_rate_ok]


def validate_margins(
    params: SafetyParams, obstacle_bounds: list[ObstacleBounds]
) -> ValidationReport:
    """Check the vehicle limits against every obstacle's declared bounds.

    Hard requirements: v_max >= v_max_i + kappa_min (an evasive speed must
    exist) and a_max >= a_max_i (the vehicle can match obstacle
    acceleration). The turn-rate requirement
    r_max >= r_max_i + (a_max_i + a_max) / kappa_min is conservative and
    reported as a warning-level check only.
    """
    report = ValidationReport()
    for bounds in obstacle_bounds:
        required_rate = bounds.r_max + (bounds.a_max + params.a_max) / params.kappa_min
        report.checks.append(
            MarginCheck(
                speed_ok=params.v_max >= bounds.v_max + params.kappa_min,
                accel_ok=params.a_max >= bounds.a_max,
                turn_rate_ok=params.r_max >= required_rate,
                turn_rate_required=required_rate,
            )
        )
    return report
