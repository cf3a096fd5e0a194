"""Deterministic closed-loop simulation with forward-Euler integration.

One run is strictly sequential; distinct runs share nothing, so soak tests
and sweeps can execute them in parallel. Identical configurations produce
bit-identical logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .geometry import wrap_to_pi
from .guidance import nominal_inputs, target_reached
from .obstacles import obstacle_state_at
from .safety_filter import control_step, gather_obstacle_terms
from .types import ControlInput, VehicleState

if TYPE_CHECKING:
    from .scenario import ScenarioConfig


def round9(x: float) -> float:
    """Round to the 9 significant digits used by the trajectory CSV.

    Summary metrics are computed through this so that recomputing them from
    the emitted CSV reproduces them exactly.
    """
    return float("%.9g" % x)


def step_vehicle(state: VehicleState, u: ControlInput, dt: float) -> VehicleState:
    """Explicit forward-Euler update; the pre-update state feeds the right side."""
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    v_next = state.v + u.a * dt
    if v_next <= 0.0:
        raise RuntimeError(
            f"speed left its positive range ({v_next:.6g} m/s); the filter's "
            "positivity row should have prevented this"
        )
    return VehicleState(
        state.x + state.v * math.cos(state.psi) * dt,
        state.y + state.v * math.sin(state.psi) * dt,
        wrap_to_pi(state.psi + u.r * dt),
        v_next,
    )


@dataclass(slots=True)
class TrajectoryLog:
    """Columnar per-step record of one run.

    The final row of a completed run is a terminal row: the arrival state
    with no commands (None) and empty statuses. Barrier columns hold None
    outside the speed-activation distance and wherever the steering barrier
    is undefined or unusable.
    """

    obstacle_count: int
    t: list[float] = field(default_factory=list)
    x: list[float] = field(default_factory=list)
    y: list[float] = field(default_factory=list)
    psi: list[float] = field(default_factory=list)
    v: list[float] = field(default_factory=list)
    r_cmd: list[float | None] = field(default_factory=list)
    a_cmd: list[float | None] = field(default_factory=list)
    a_status: list[str] = field(default_factory=list)
    r_status: list[str] = field(default_factory=list)
    d: list[list[float]] = field(init=False)
    h_v: list[list[float | None]] = field(init=False)
    h_psi: list[list[float | None]] = field(init=False)
    gate_v: list[list[int]] = field(init=False)
    gate_psi: list[list[int]] = field(init=False)

    def __post_init__(self) -> None:
        n = self.obstacle_count
        self.d = [[] for _ in range(n)]
        self.h_v = [[] for _ in range(n)]
        self.h_psi = [[] for _ in range(n)]
        self.gate_v = [[] for _ in range(n)]
        self.gate_psi = [[] for _ in range(n)]

    def __len__(self) -> int:
        return len(self.t)

    def _append_obstacles(self, infos) -> None:
        for i, info in enumerate(infos):
            self.d[i].append(info.d)
            self.h_v[i].append(info.h_v)
            self.h_psi[i].append(info.h_psi)
            self.gate_v[i].append(1 if info.gate_v else 0)
            self.gate_psi[i].append(1 if info.gate_psi else 0)

    def append_step(self, t, state, u, diag) -> None:
        self.t.append(t)
        self.x.append(state.x)
        self.y.append(state.y)
        self.psi.append(state.psi)
        self.v.append(state.v)
        self.r_cmd.append(u.r)
        self.a_cmd.append(u.a)
        self.a_status.append(diag.accel.status)
        self.r_status.append(diag.steer.status)
        self._append_obstacles(diag.obstacles)

    def append_terminal(self, t, state, infos) -> None:
        self.t.append(t)
        self.x.append(state.x)
        self.y.append(state.y)
        self.psi.append(state.psi)
        self.v.append(state.v)
        self.r_cmd.append(None)
        self.a_cmd.append(None)
        self.a_status.append("")
        self.r_status.append("")
        self._append_obstacles(infos)

    @property
    def completed(self) -> bool:
        """True when the run ended by arrival (terminal row present)."""
        return bool(self.a_status) and self.a_status[-1] == ""


@dataclass(slots=True)
class SummaryMetrics:
    """Run summary; every value is recomputable from the trajectory CSV."""

    reached: bool
    t_final: float
    min_distance: list[float]
    max_abs_r: float
    max_abs_a: float
    max_v: float
    min_v: float
    events: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "reached": self.reached,
            "t_final": self.t_final,
            "min_distance": list(self.min_distance),
            "max_abs_r": self.max_abs_r,
            "max_abs_a": self.max_abs_a,
            "max_v": self.max_v,
            "min_v": self.min_v,
            "events": dict(self.events),
        }


def summarize(log: TrajectoryLog, d_min: list[float]) -> SummaryMetrics:
    """Reduce a log to its summary, at CSV precision.

    Event counts: ``violation`` counts (step, obstacle) pairs closer than
    d_min; ``infeasible`` counts filter outcomes that reported best-effort
    infeasibility (acceleration and steering separately); ``edge_undefined``
    counts steering-gated pairs whose barrier was unusable.
    """
    if not log.t:
        raise ValueError("cannot summarize an empty log")
    commands_r = [r for r in log.r_cmd if r is not None]
    commands_a = [a for a in log.a_cmd if a is not None]
    violation = 0
    edge_undefined = 0
    for i in range(log.obstacle_count):
        limit = d_min[i]
        for step, dist in enumerate(log.d[i]):
            if round9(dist) < limit:
                violation += 1
            if log.gate_psi[i][step] and log.h_psi[i][step] is None:
                edge_undefined += 1
    infeasible = sum(1 for s in log.a_status if s == "infeasible_best_effort")
    infeasible += sum(1 for s in log.r_status if s == "infeasible_best_effort")
    return SummaryMetrics(
        reached=log.completed,
        t_final=round9(log.t[-1]),
        min_distance=[round9(min(log.d[i])) for i in range(log.obstacle_count)],
        max_abs_r=round9(max(abs(r) for r in commands_r)) if commands_r else 0.0,
        max_abs_a=round9(max(abs(a) for a in commands_a)) if commands_a else 0.0,
        max_v=round9(max(log.v)),
        min_v=round9(min(log.v)),
        events={
            "violation": violation,
            "infeasible": infeasible,
            "edge_undefined": edge_undefined,
        },
    )


def run_scenario(config: "ScenarioConfig") -> tuple[TrajectoryLog, SummaryMetrics]:
    """Closed-loop run until arrival or t_max.

    Per tick: query the obstacle views, compute the nominal inputs, filter
    them, log, integrate. Arrival appends a terminal diagnostics row; hitting
    t_max without arrival is reported through ``reached``, not an exception.
    """
    state = VehicleState(config.start.x, config.start.y, config.start.psi, config.start.v)
    params = config.safety
    dt = config.dt
    n_max = int(round(config.t_max / dt))
    log = TrajectoryLog(len(config.obstacles))
    k = 0
    while True:
        t = k * dt
        views = [obstacle_state_at(ob, t) for ob in config.obstacles]
        if target_reached(state.position, config.guidance):
            infos, _, _ = gather_obstacle_terms(state, views, params)
            log.append_terminal(t, state, infos)
            break
        guidance_cmd = nominal_inputs(state, config.guidance)
        u, diag = control_step(state, views, guidance_cmd, params, dt)
        log.append_step(t, state, u, diag)
        if k >= n_max:
            break
        state = step_vehicle(state, u, dt)
        if state.v > params.v_max + 1e-9:
            raise RuntimeError(
                f"speed {state.v:.9g} exceeded the cap {params.v_max} at t={t:.6g}"
            )
        k += 1
    return log, summarize(log, [ob.d_min for ob in config.obstacles])
