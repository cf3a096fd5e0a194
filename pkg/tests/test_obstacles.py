import math

import numpy as np
import pytest

from vocbf.obstacles import (
    CircularOrbit,
    ConstantVelocity,
    LinePatrol,
    Obstacle,
    build_obstacle,
    check_obstacle_bounds,
    obstacle_state_at,
)
from vocbf.types import Vec2


class TestConstantVelocity:
    def test_state(self):
        motion = ConstantVelocity(Vec2(1.0, 2.0), Vec2(0.3, -0.4))
        x, y, v, course, vdot, cdot = motion.state_at(10.0)
        assert (x, y) == (4.0, -2.0)
        assert v == pytest.approx(0.5)
        assert course == pytest.approx(math.atan2(-0.4, 0.3))
        assert vdot == 0.0 and cdot == 0.0

    def test_stationary_course_zero(self):
        motion = ConstantVelocity(Vec2(0, 0), Vec2(0, 0))
        assert motion.state_at(5.0)[3] == 0.0

    def test_bounds_hold(self):
        motion = ConstantVelocity(Vec2(0, 0), Vec2(0.3, -0.4))
        assert motion.bounds() == (0.5, 0.0, 0.0)
        assert check_obstacle_bounds(motion, horizon=20.0)


class TestLinePatrol:
    def test_cruise_state(self):
        motion = LinePatrol(x=40.0, y0=0.0, direction=1)
        x, y, v, course, vdot, cdot = motion.state_at(0.0)
        assert (x, y) == (40.0, 0.0)
        assert v == 0.5
        assert course == pytest.approx(math.pi / 2)
        assert vdot == 0.0 and cdot == 0.0

    def test_reversal_instant(self):
        # starting exactly at the top bound: zero speed, ramping back down
        motion = LinePatrol(x=0.0, y0=50.0, direction=-1)
        x, y, v, course, vdot, cdot = motion.state_at(0.0)
        assert y == pytest.approx(50.0)
        assert v == 0.0
        assert vdot == pytest.approx(0.1)
        assert course == pytest.approx(-math.pi / 2)
        assert cdot == 0.0

    def test_motion_reaches_bounds_exactly(self):
        motion = LinePatrol(x=0.0, y0=-50.0, direction=1)
        t_ramp = 0.5 / 0.1
        t_cruise = 2 * (50.0 - 1.25) / 0.5
        half = 2 * t_ramp + t_cruise
        _, y_top, v_top, _, _, _ = motion.state_at(half)
        assert y_top == pytest.approx(50.0)
        assert v_top == pytest.approx(0.0)
        _, y_back, _, _, _, _ = motion.state_at(2 * half)
        assert y_back == pytest.approx(-50.0)

    def test_position_continuous_and_bounded(self):
        motion = LinePatrol(x=0.0, y0=25.0, direction=-1)
        ts = np.arange(0.0, 900.0, 0.05)
        ys = [motion.state_at(float(t))[1] for t in ts]
        assert max(ys) <= 50.0 + 1e-9
        assert min(ys) >= -50.0 - 1e-9
        steps = np.abs(np.diff(ys))
        assert steps.max() <= 0.5 * 0.05 + 1e-9

    def test_initial_condition_inversion(self):
        for y0, direction in [(0.0, 1), (25.0, 1), (-25.0, -1), (50.0, -1), (-48.9, 1)]:
            motion = LinePatrol(x=0.0, y0=y0, direction=direction)
            _, y, v, course, _, _ = motion.state_at(0.0)
            assert y == pytest.approx(y0, abs=1e-9)
            if v > 0:
                assert math.copysign(1, math.sin(course)) == direction

    def test_bound_direction_consistency(self):
        with pytest.raises(ValueError):
            LinePatrol(x=0.0, y0=50.0, direction=1)
        with pytest.raises(ValueError):
            LinePatrol(x=0.0, y0=-50.0, direction=-1)
        with pytest.raises(ValueError):
            LinePatrol(x=0.0, y0=60.0, direction=1)

    def test_declared_bounds_hold(self):
        motion = LinePatrol(x=0.0, y0=10.0, direction=1)
        assert motion.bounds() == (0.5, 0.1, 0.0)
        assert check_obstacle_bounds(motion, horizon=900.0)


class TestCircularOrbit:
    def test_speed_from_rate_and_radius(self):
        motion = CircularOrbit(Vec2(80.0, 0.0), 60.0, -0.00875)
        assert motion.bounds() == (pytest.approx(0.525), 0.0, 0.00875)

    def test_tangent_course_clockwise(self):
        motion = CircularOrbit(Vec2(0.0, 0.0), 10.0, -0.1, phase=math.pi)
        x, y, v, course, vdot, cdot = motion.state_at(0.0)
        assert (x, y) == (pytest.approx(-10.0), pytest.approx(0.0, abs=1e-9))
        # at the leftmost point a clockwise orbit moves up
        assert course == pytest.approx(math.pi / 2)
        assert cdot == -0.1
        assert vdot == 0.0

    def test_velocity_matches_position_derivative(self):
        motion = CircularOrbit(Vec2(5.0, -3.0), 20.0, 0.02, phase=0.7)
        h = 1e-6
        for t in (0.0, 13.0, 100.0):
            xp, yp, v, course, _, _ = motion.state_at(t)
            xa, ya, *_ = motion.state_at(t - h)
            xb, yb, *_ = motion.state_at(t + h)
            vx = (xb - xa) / (2 * h)
            vy = (yb - ya) / (2 * h)
            assert vx == pytest.approx(v * math.cos(course), abs=1e-6)
            assert vy == pytest.approx(v * math.sin(course), abs=1e-6)

    def test_declared_bounds_hold(self):
        motion = CircularOrbit(Vec2(80.0, 0.0), 60.0, -0.00875)
        assert check_obstacle_bounds(motion, horizon=720.0)


class TestObstacleAssembly:
    def test_gate_resolution(self):
        motion = ConstantVelocity(Vec2(0, 0), Vec2(0, 0))
        ob = build_obstacle(motion, radius=5.0, vehicle_radius=5.0,
                            d_psi_margin=30.0, d_v_margin=35.0)
        assert ob.d_min == 10.0
        assert ob.d_psi == 40.0
        assert ob.d_v == 45.0

    def test_d_min_override_only_larger(self):
        motion = ConstantVelocity(Vec2(0, 0), Vec2(0, 0))
        ob = build_obstacle(motion, 5.0, 5.0, 30.0, 35.0, d_min=12.0)
        assert ob.d_min == 12.0 and ob.d_psi == 42.0
        with pytest.raises(ValueError):
            build_obstacle(motion, 5.0, 5.0, 30.0, 35.0, d_min=9.0)

    def test_margin_ordering_enforced(self):
        motion = ConstantVelocity(Vec2(0, 0), Vec2(0, 0))
        with pytest.raises(ValueError):
            build_obstacle(motion, 5.0, 5.0, 35.0, 30.0)
        with pytest.raises(ValueError):
            Obstacle(motion, 5.0, 10.0, 45.0, 40.0)

    def test_view_carries_annotations(self):
        motion = LinePatrol(x=40.0, y0=0.0, direction=1)
        ob = build_obstacle(motion, 5.0, 5.0, 30.0, 35.0)
        view = obstacle_state_at(ob, 3.0)
        assert view.p.x == 40.0
        assert view.p.y == pytest.approx(1.5)
        assert view.v_i == 0.5
        assert (view.d_min, view.d_psi, view.d_v) == (10.0, 40.0, 45.0)
        assert view.bounds == (0.5, 0.1, 0.0)
