"""Scenario file loading, validation, and serialization.

Scenarios are JSON documents checked against the schema shipped in
``vocbf/schemas/scenario.schema.json``, then against the cross-field
invariants the schema cannot express (gate ordering, eps_v >= kappa_min,
start speed within the cap, d_min overrides only enlarging).
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema

from .guidance import GuidanceConfig
from .obstacles import CircularOrbit, ConstantVelocity, LinePatrol, Obstacle, build_obstacle
from .safety_filter import SafetyParams
from .types import Vec2, VehicleState

logger = logging.getLogger(__name__)

DEFAULT_DT = 0.01
DEFAULT_T_MAX = 2000.0
DEFAULT_GAMMA = 0.5


class ScenarioError(ValueError):
    """Scenario parse, schema, or invariant failure, with a field-level message."""


@dataclass
class ScenarioConfig:
    start: VehicleState
    vehicle_radius: float
    guidance: GuidanceConfig
    safety: SafetyParams
    d_psi_margin: float
    d_v_margin: float
    obstacles: list[Obstacle]
    dt: float
    t_max: float


def _schema() -> dict:
    text = resources.files("vocbf").joinpath("schemas/scenario.schema.json").read_text()
    return json.loads(text)


def _point(data: dict) -> Vec2:
    return Vec2(float(data["x"]), float(data["y"]))


def _build_motion(entry: dict):
    kind = entry["type"]
    if kind == "constant_velocity":
        return ConstantVelocity(_point(entry["p0"]), _point(entry["velocity"]))
    if kind == "line_patrol":
        return LinePatrol(
            x=float(entry["x"]),
            y0=float(entry["y0"]),
            direction=int(entry["direction"]),
            axis_speed=float(entry.get("axis_speed", 0.5)),
            bound=float(entry.get("bound", 50.0)),
            turn_accel=float(entry.get("turn_accel", 0.1)),
        )
    if kind == "circular_orbit":
        return CircularOrbit(
            center=_point(entry["center"]),
            orbit_radius=float(entry["orbit_radius"]),
            angular_rate=float(entry["angular_rate"]),
            phase=float(entry.get("phase", 0.0)),
        )
    raise ScenarioError(f"unknown obstacle type {kind!r}")


def parse_scenario(data: dict) -> ScenarioConfig:
    """Validate a scenario document and build the runtime configuration."""
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "$" + "".join(
            f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path
        )
        raise ScenarioError(f"{path}: {err.message}")

    vehicle = data["vehicle"]
    limits = vehicle["limits"]
    safety = data["safety"]
    if "gamma" not in safety:
        logger.warning("safety.gamma missing; defaulting to %s", DEFAULT_GAMMA)
    gamma = float(safety.get("gamma", DEFAULT_GAMMA))

    try:
        params = SafetyParams(
            kappa_min=float(safety["kappa_min"]),
            delta_min=float(safety["delta_min"]),
            eps_v=float(safety["eps_v"]),
            eps_psi=float(safety["eps_psi"]),
            gamma=gamma,
            r_max=float(limits["r_max"]),
            a_max=float(limits["a_max"]),
            v_max=float(limits["v_max"]),
        )
    except ValueError as exc:
        raise ScenarioError(f"safety: {exc}") from exc

    d_psi_margin = float(safety["d_psi_margin"])
    d_v_margin = float(safety["d_v_margin"])
    if d_psi_margin >= d_v_margin:
        raise ScenarioError(
            f"safety: d_psi_margin ({d_psi_margin}) must be smaller than "
            f"d_v_margin ({d_v_margin}); steering activates inside the speed range"
        )

    guidance_data = data["guidance"]
    try:
        guidance = GuidanceConfig(
            target=_point(guidance_data["target"]),
            v_d=float(guidance_data["v_d"]),
            k_r=float(guidance_data["K_r"]),
            k_a=float(guidance_data["K_a"]),
            d_acc=float(guidance_data["d_acc"]),
        )
    except ValueError as exc:
        raise ScenarioError(f"guidance: {exc}") from exc
    if guidance.v_d > params.v_max:
        raise ScenarioError(
            f"guidance.v_d ({guidance.v_d}) exceeds vehicle.limits.v_max ({params.v_max})"
        )

    start_data = vehicle["start"]
    start = VehicleState(
        x=float(start_data["x"]),
        y=float(start_data["y"]),
        psi=float(start_data["psi"]),
        v=float(start_data["v"]),
    )
    if not 0.0 < start.v <= params.v_max:
        raise ScenarioError(
            f"vehicle.start.v ({start.v}) must lie in (0, v_max] = (0, {params.v_max}]"
        )
    if not -math.pi < start.psi <= math.pi:
        raise ScenarioError(f"vehicle.start.psi ({start.psi}) must lie in (-pi, pi]")

    vehicle_radius = float(vehicle["radius"])
    obstacles: list[Obstacle] = []
    for index, entry in enumerate(data["obstacles"]):
        try:
            motion = _build_motion(entry)
            override = float(entry["d_min"]) if "d_min" in entry else None
            obstacles.append(
                build_obstacle(
                    motion,
                    radius=float(entry["radius"]),
                    vehicle_radius=vehicle_radius,
                    d_psi_margin=d_psi_margin,
                    d_v_margin=d_v_margin,
                    d_min=override,
                )
            )
        except ValueError as exc:
            raise ScenarioError(f"obstacles[{index}]: {exc}") from exc

    sim = data.get("sim", {})
    dt = float(sim.get("dt", DEFAULT_DT))
    t_max = float(sim.get("t_max", DEFAULT_T_MAX))

    return ScenarioConfig(
        start=start,
        vehicle_radius=vehicle_radius,
        guidance=guidance,
        safety=params,
        d_psi_margin=d_psi_margin,
        d_v_margin=d_v_margin,
        obstacles=obstacles,
        dt=dt,
        t_max=t_max,
    )


def load_scenario(path: str | Path) -> ScenarioConfig:
    """Load, schema-check, and invariant-check a scenario file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON: {exc}") from exc
    return parse_scenario(data)


def _motion_to_dict(motion) -> dict:
    if isinstance(motion, ConstantVelocity):
        return {
            "type": "constant_velocity",
            "p0": {"x": motion.p0.x, "y": motion.p0.y},
            "velocity": {"x": motion.velocity.x, "y": motion.velocity.y},
        }
    if isinstance(motion, LinePatrol):
        return {
            "type": "line_patrol",
            "x": motion.x,
            "y0": motion.y0,
            "direction": motion.direction,
            "axis_speed": motion.axis_speed,
            "bound": motion.bound,
            "turn_accel": motion.turn_accel,
        }
    if isinstance(motion, CircularOrbit):
        return {
            "type": "circular_orbit",
            "center": {"x": motion.center.x, "y": motion.center.y},
            "orbit_radius": motion.orbit_radius,
            "angular_rate": motion.angular_rate,
            "phase": motion.phase,
        }
    raise TypeError(f"unknown motion type {type(motion).__name__}")


def scenario_to_dict(config: ScenarioConfig) -> dict:
    """Serialize a configuration back to its document form.

    Loading the result yields an identical configuration (defaults are made
    explicit, d_min is emitted resolved).
    """
    obstacles = []
    for ob in config.obstacles:
        entry = _motion_to_dict(ob.motion)
        entry["radius"] = ob.radius
        entry["d_min"] = ob.d_min
        obstacles.append(entry)
    return {
        "vehicle": {
            "start": {
                "x": config.start.x,
                "y": config.start.y,
                "psi": config.start.psi,
                "v": config.start.v,
            },
            "radius": config.vehicle_radius,
            "limits": {
                "r_max": config.safety.r_max,
                "a_max": config.safety.a_max,
                "v_max": config.safety.v_max,
            },
        },
        "guidance": {
            "target": {"x": config.guidance.target.x, "y": config.guidance.target.y},
            "v_d": config.guidance.v_d,
            "K_r": config.guidance.k_r,
            "K_a": config.guidance.k_a,
            "d_acc": config.guidance.d_acc,
        },
        "safety": {
            "kappa_min": config.safety.kappa_min,
            "delta_min": config.safety.delta_min,
            "eps_v": config.safety.eps_v,
            "eps_psi": config.safety.eps_psi,
            "gamma": config.safety.gamma,
            "d_psi_margin": config.d_psi_margin,
            "d_v_margin": config.d_v_margin,
        },
        "obstacles": obstacles,
        "sim": {"dt": config.dt, "t_max": config.t_max},
    }
