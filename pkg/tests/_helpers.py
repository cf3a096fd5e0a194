"""Shared test utilities: exact flows for finite-difference oracles and
factories for states and obstacle views."""

from __future__ import annotations

import math

from vocbf.geometry import wrap_to_pi
from vocbf.types import ObstacleBounds, ObstacleView, Vec2, VehicleState


def make_view(
    px=0.0,
    py=0.0,
    v_i=0.0,
    psi_i=0.0,
    v_i_dot=0.0,
    psi_i_dot=0.0,
    d_min=10.0,
    d_psi=40.0,
    d_v=45.0,
    bounds=None,
) -> ObstacleView:
    if bounds is None:
        bounds = ObstacleBounds(v_i, abs(v_i_dot), abs(psi_i_dot))
    return ObstacleView(
        p=Vec2(px, py),
        v_i=v_i,
        psi_i=psi_i,
        v_i_dot=v_i_dot,
        psi_i_dot=psi_i_dot,
        d_min=d_min,
        d_psi=d_psi,
        d_v=d_v,
        bounds=bounds,
    )


def flow_vehicle(state: VehicleState, r: float, a: float, t: float) -> VehicleState:
    """Exact unicycle flow under constant turn rate and acceleration.

    Closed-form integral of (v0 + a s) cos/sin(psi0 + r s); used as the
    independent trajectory oracle for derivative checks, so it must not
    share code with the Euler integrator.
    """
    v0 = state.v
    psi0 = state.psi
    psi1 = psi0 + r * t
    v1 = v0 + a * t
    if abs(r) > 1e-8:
        dx = (v1 * math.sin(psi1) - v0 * math.sin(psi0)) / r + (
            a / (r * r)
        ) * (math.cos(psi1) - math.cos(psi0))
        dy = (-v1 * math.cos(psi1) + v0 * math.cos(psi0)) / r + (
            a / (r * r)
        ) * (math.sin(psi1) - math.sin(psi0))
    else:
        arc = v0 * t + 0.5 * a * t * t
        dx = arc * math.cos(psi0)
        dy = arc * math.sin(psi0)
    return VehicleState(state.x + dx, state.y + dy, wrap_to_pi(psi1), v1)


def central_diff(f, h: float) -> float:
    """Central difference of a scalar function of the time offset."""
    return (f(h) - f(-h)) / (2.0 * h)


def central_diff_angle(f, h: float) -> float:
    """Central difference of an angle-valued function, wrap-aware."""
    return wrap_to_pi(f(h) - f(-h)) / (2.0 * h)


def assert_close(analytic: float, reference: float, rel: float = 1e-3, floor: float = 1e-6):
    err = abs(analytic - reference)
    assert err <= max(floor, rel * abs(reference)), (
        f"analytic {analytic!r} vs reference {reference!r}: error {err:.3e}"
    )


def qp_grid_oracle(desired, box, constraints, step=1e-4):
    """Dense grid search over [-box, box]; returns (any_feasible, best_value).

    Endpoints are exact so every candidate honors the box.
    """
    import numpy as np

    num = int(math.ceil(2.0 * box / step)) + 1
    grid = np.linspace(-box, box, num)
    ok = np.ones(grid.shape, dtype=bool)
    for con in constraints:
        ok &= con.slope * grid >= con.lower_rhs
    if not ok.any():
        return False, None
    feasible = grid[ok]
    return True, float(feasible[np.argmin(np.abs(feasible - desired))])
