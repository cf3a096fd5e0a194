import math

import pytest

from vocbf.guidance import GuidanceConfig, desired_heading, nominal_inputs, target_reached
from vocbf.safety_filter import SafetyParams
from vocbf.scenario import ScenarioConfig
from vocbf.simulator import run_scenario
from vocbf.types import Vec2, VehicleState

CONFIG = GuidanceConfig(target=Vec2(100.0, 0.0), v_d=0.3, k_r=0.5, k_a=0.5, d_acc=4.0)


class TestDesiredHeading:
    def test_cardinal_directions(self):
        assert desired_heading(Vec2(0, 0), Vec2(1, 0)) == 0.0
        assert desired_heading(Vec2(0, 0), Vec2(0, 1)) == pytest.approx(math.pi / 2)
        assert desired_heading(Vec2(0, 0), Vec2(-1, 0)) == pytest.approx(math.pi)

    def test_at_target_raises(self):
        with pytest.raises(ValueError):
            desired_heading(Vec2(3, 4), Vec2(3, 4))


class TestNominalInputs:
    def test_settled(self):
        r_d, a_d = nominal_inputs(VehicleState(0, 0, 0, 0.3), CONFIG)
        assert r_d == 0.0 and a_d == 0.0

    def test_proportional_heading(self):
        r_d, _ = nominal_inputs(VehicleState(0, 0, math.pi / 2, 0.3), CONFIG)
        assert r_d == pytest.approx(-math.pi / 4)

    def test_wrap_commands_shorter_turn(self):
        # heading error just above pi wraps negative, so the command is a
        # positive (left) turn
        state = VehicleState(0, 0, -math.pi + 0.01, 0.3)
        r_d, _ = nominal_inputs(state, CONFIG)
        assert r_d == pytest.approx(0.5 * (math.pi - 0.01))
        assert r_d > 0

    def test_outputs_unclamped(self):
        r_d, a_d = nominal_inputs(VehicleState(0, 0, math.pi, 5.0), CONFIG)
        assert abs(r_d) > 0.5 or abs(a_d) > 0.25

    def test_heading_hold_at_target(self):
        state = VehicleState(100.0, 0.0, 1.2, 0.3)
        r_d, _ = nominal_inputs(state, CONFIG)
        assert r_d == 0.0

    def test_continuity_near_wrap(self):
        below = nominal_inputs(VehicleState(0, 0, math.pi - 1e-9, 0.3), CONFIG)[0]
        above = nominal_inputs(VehicleState(0, 0, -math.pi + 1e-9, 0.3), CONFIG)[0]
        # the two sides of the antipode command full turns of opposite sign
        assert below == pytest.approx(-0.5 * math.pi, abs=1e-6)
        assert above == pytest.approx(0.5 * math.pi, abs=1e-6)


class TestTargetReached:
    @pytest.mark.parametrize("distance,expected", [(3.9, True), (4.0, True), (4.1, False)])
    def test_inclusive_boundary(self, distance, expected):
        assert target_reached(Vec2(100.0 - distance, 0.0), CONFIG) is expected


class TestObstacleFreeClosedLoop:
    def test_reaches_and_speed_converges(self):
        config = ScenarioConfig(
            start=VehicleState(0.0, 0.0, 2.5, 0.55),
            vehicle_radius=5.0,
            guidance=GuidanceConfig(target=Vec2(60.0, -30.0), v_d=0.3, k_r=0.5, k_a=0.5, d_acc=4.0),
            safety=SafetyParams(0.05, 0.05, 0.05, 0.05, 0.5, 0.5, 0.25, 0.7),
            d_psi_margin=30.0,
            d_v_margin=35.0,
            obstacles=[],
            dt=0.01,
            t_max=2000.0,
        )
        log, summary = run_scenario(config)
        assert summary.reached
        assert summary.events == {"violation": 0, "infeasible": 0, "edge_undefined": 0}
        # cruise speed settles well before arrival and stays settled
        tail = [v for v in log.v[-int(0.2 * len(log.v)):]]
        assert all(abs(v - 0.3) <= 1e-3 for v in tail)
