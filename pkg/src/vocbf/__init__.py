"""Velocity-obstacle control barrier functions for unicycle collision avoidance.

A library and CLI for reactive collision avoidance of nonholonomic vehicles
that must keep a nonzero forward speed: cone geometry, nonsmooth speed and
steering barriers, cascaded scalar QP safety filters, moving-obstacle
models, and a deterministic closed-loop simulator.
"""

from .barriers import (
    AffineRate,
    SingularRateError,
    SpeedBarrierEval,
    SteeringBarrierEval,
    UndefinedEdgeError,
    eval_speed_barrier,
    eval_steering_barrier,
    speed_rate_affine,
    steering_rate_affine,
)
from .geometry import (
    DegenerateGeometryError,
    RelativeGeometry,
    SeparationViolatedError,
    UndefinedAngleError,
    VoCone,
    approach_angle,
    collision_cone_half_angle,
    min_predicted_distance,
    relative_geometry,
    vo_cone,
    vo_membership_oracle,
    wrap_to_pi,
)
from .guidance import GuidanceConfig, desired_heading, nominal_inputs, target_reached
from .obstacles import (
    CircularOrbit,
    ConstantVelocity,
    LinePatrol,
    Obstacle,
    build_obstacle,
    check_obstacle_bounds,
    obstacle_state_at,
)
from .safety_filter import (
    FilterOutcome,
    SafetyParams,
    ScalarConstraint,
    StepDiagnostics,
    ValidationReport,
    acceleration_filter,
    control_step,
    solve_scalar_qp,
    steering_filter,
    validate_margins,
)
from .scenario import ScenarioConfig, ScenarioError, load_scenario, scenario_to_dict
from .simulator import (
    SummaryMetrics,
    TrajectoryLog,
    round9,
    run_scenario,
    step_vehicle,
    summarize,
)
from .types import ControlInput, ObstacleBounds, ObstacleView, Vec2, VehicleState

__version__ = "0.1.0"

__all__ = [
    "AffineRate",
    "CircularOrbit",
    "ConstantVelocity",
    "ControlInput",
    "DegenerateGeometryError",
    "FilterOutcome",
    "GuidanceConfig",
    "LinePatrol",
    "Obstacle",
    "ObstacleBounds",
    "ObstacleView",
    "RelativeGeometry",
    "SafetyParams",
    "ScalarConstraint",
    "ScenarioConfig",
    "ScenarioError",
    "SeparationViolatedError",
    "SingularRateError",
    "SpeedBarrierEval",
    "SteeringBarrierEval",
    "StepDiagnostics",
    "SummaryMetrics",
    "TrajectoryLog",
    "UndefinedAngleError",
    "UndefinedEdgeError",
    "ValidationReport",
    "Vec2",
    "VehicleState",
    "VoCone",
    "acceleration_filter",
    "approach_angle",
    "build_obstacle",
    "check_obstacle_bounds",
    "collision_cone_half_angle",
    "control_step",
    "desired_heading",
    "eval_speed_barrier",
    "eval_steering_barrier",
    "load_scenario",
    "min_predicted_distance",
    "nominal_inputs",
    "obstacle_state_at",
    "relative_geometry",
    "round9",
    "run_scenario",
    "scenario_to_dict",
    "solve_scalar_qp",
    "speed_rate_affine",
    "steering_filter",
    "steering_rate_affine",
    "step_vehicle",
    "summarize",
    "target_reached",
    "validate_margins",
    "vo_cone",
    "vo_membership_oracle",
    "wrap_to_pi",
]
