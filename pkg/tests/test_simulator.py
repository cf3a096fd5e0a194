import math

import pytest

from vocbf.guidance import GuidanceConfig
from vocbf.obstacles import ConstantVelocity, LinePatrol, build_obstacle
from vocbf.safety_filter import SafetyParams
from vocbf.scenario import ScenarioConfig
from vocbf.simulator import round9, run_scenario, step_vehicle, summarize
from vocbf.types import ControlInput, Vec2, VehicleState

PARAMS = SafetyParams(0.05, 0.05, 0.05, 0.05, 0.5, 0.5, 0.25, 0.7)


def make_config(target=Vec2(30.0, 0.0), obstacles=(), t_max=2000.0, v0=0.3, dt=0.01):
    return ScenarioConfig(
        start=VehicleState(0.0, 0.0, 0.0, v0),
        vehicle_radius=5.0,
        guidance=GuidanceConfig(target=target, v_d=v0, k_r=0.5, k_a=0.5, d_acc=4.0),
        safety=PARAMS,
        d_psi_margin=30.0,
        d_v_margin=35.0,
        obstacles=list(obstacles),
        dt=dt,
        t_max=t_max,
    )


class TestStepVehicle:
    def test_straight_line(self):
        state = step_vehicle(VehicleState(0, 0, 0, 1.0), ControlInput(0.0, 0.0), 0.01)
        assert state.x == pytest.approx(0.01)
        assert state.y == 0.0 and state.psi == 0.0 and state.v == 1.0

    def test_heading_wraps(self):
        state = step_vehicle(
            VehicleState(0, 0, math.pi / 2, 1.0), ControlInput(math.pi / 0.01, 0.0), 0.01
        )
        assert -math.pi < state.psi <= math.pi
        assert state.psi == pytest.approx(-math.pi / 2)

    def test_acceleration(self):
        state = step_vehicle(VehicleState(0, 0, 0, 0.3), ControlInput(0.0, 0.25), 0.01)
        assert state.v == pytest.approx(0.3025)

    def test_rejects_nonpositive_dt(self):
        with pytest.raises(ValueError):
            step_vehicle(VehicleState(0, 0, 0, 0.3), ControlInput(0, 0), 0.0)

    def test_speed_collapse_is_fatal(self):
        with pytest.raises(RuntimeError):
            step_vehicle(VehicleState(0, 0, 0, 0.001), ControlInput(0.0, -0.25), 0.01)


class TestRunScenario:
    def test_empty_environment(self):
        config = make_config()
        log, summary = run_scenario(config)
        assert summary.reached
        assert summary.events == {"violation": 0, "infeasible": 0, "edge_undefined": 0}
        # one row per applied control step plus the terminal row
        assert len(log.t) == math.ceil(summary.t_final / config.dt) + 1
        assert log.a_status[-1] == "" and log.r_cmd[-1] is None
        assert all(s != "" for s in log.a_status[:-1])

    def test_determinism_bit_identical(self):
        config = make_config(
            obstacles=[
                build_obstacle(LinePatrol(x=20.0, y0=-10.0, direction=1), 5.0, 5.0, 30.0, 35.0)
            ],
            target=Vec2(60.0, 0.0),
        )
        log1, s1 = run_scenario(config)
        log2, s2 = run_scenario(config)
        assert log1.t == log2.t
        assert log1.x == log2.x and log1.y == log2.y
        assert log1.psi == log2.psi and log1.v == log2.v
        assert log1.r_cmd == log2.r_cmd and log1.a_cmd == log2.a_cmd
        assert log1.d == log2.d and log1.h_v == log2.h_v and log1.h_psi == log2.h_psi
        assert s1 == s2

    def test_non_completion_reported(self):
        config = make_config(target=Vec2(500.0, 0.0), t_max=5.0)
        log, summary = run_scenario(config)
        assert not summary.reached
        assert summary.t_final == 5.0
        assert log.a_status[-1] != ""
        assert len(log.t) == math.ceil(5.0 / config.dt) + 1

    def test_barrier_columns_follow_gating(self):
        ob = build_obstacle(
            ConstantVelocity(Vec2(70.0, 0.0), Vec2(0.0, 0.0)), 5.0, 5.0, 30.0, 35.0
        )
        config = make_config(target=Vec2(40.0, 20.0), obstacles=[ob])
        log, _ = run_scenario(config)
        saw_far = saw_near = False
        for step in range(len(log.t)):
            gated = log.gate_v[0][step]
            if gated:
                saw_near = True
                assert log.h_v[0][step] is not None
            else:
                saw_far = True
                assert log.h_v[0][step] is None
                assert log.h_psi[0][step] is None
        assert saw_far and saw_near

    def test_speed_stays_in_envelope(self):
        ob = build_obstacle(
            LinePatrol(x=30.0, y0=-15.0, direction=1), 5.0, 5.0, 30.0, 35.0
        )
        config = make_config(target=Vec2(80.0, 0.0), obstacles=[ob])
        log, summary = run_scenario(config)
        assert summary.reached
        assert summary.min_v >= PARAMS.kappa_min - 1e-9
        assert summary.max_v <= PARAMS.v_max + 1e-9

    def test_summary_matches_log(self):
        config = make_config(
            obstacles=[
                build_obstacle(
                    ConstantVelocity(Vec2(25.0, -2.0), Vec2(-0.2, 0.1)), 5.0, 5.0, 30.0, 35.0
                )
            ]
        )
        log, summary = run_scenario(config)
        again = summarize(log, [10.0])
        assert again == summary
        assert summary.min_distance[0] == round9(min(log.d[0]))
        assert summary.max_v == round9(max(log.v))
