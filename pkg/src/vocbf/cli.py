"""Command-line interface: run scenarios and validate their safety margins.

Exit codes for ``simulate``: 0 target reached with no violation or
infeasibility events, 2 any such event occurred (whether or not the target
was reached), 3 the run hit t_max without reaching the target, 1 scenario or
I/O failure. ``validate`` exits 0 when every hard capability check passes,
2 otherwise, 1 on load failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .report import write_outputs
from .safety_filter import validate_margins
from .scenario import ScenarioError, load_scenario
from .simulator import run_scenario


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vocbf",
        description=(
            "Velocity-obstacle barrier-function collision avoidance: "
            "simulate scenarios or validate their safety margins."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser(
        "simulate", help="run a scenario and write trajectory/summary outputs"
    )
    sim.add_argument("--scenario", required=True, help="path to a scenario JSON file")
    sim.add_argument("--out", required=True, help="output directory (created if needed)")
    sim.add_argument(
        "--dt", type=float, default=None,
        help="override the integration step (default: scenario value, 0.01 s)",
    )
    sim.add_argument(
        "--csv", action=argparse.BooleanOptionalAction, default=True,
        help="write trajectory.csv (default: on)",
    )
    sim.add_argument(
        "--svg", action=argparse.BooleanOptionalAction, default=False,
        help="render trajectory.svg (default: off)",
    )

    val = sub.add_parser(
        "validate", help="check the vehicle limits against every obstacle's bounds"
    )
    val.add_argument("--scenario", required=True, help="path to a scenario JSON file")
    return parser


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        config = load_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.dt is not None:
        if args.dt <= 0:
            print("error: --dt must be positive", file=sys.stderr)
            return 1
        config.dt = args.dt
    print(f"scenario: {args.scenario}")
    print(f"dt: {config.dt} s, t_max: {config.t_max} s, obstacles: {len(config.obstacles)}")

    log, summary = run_scenario(config)
    try:
        write_outputs(log, summary, config, args.out, csv=args.csv, svg=args.svg)
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return 1

    events = summary.events
    print(
        f"reached: {summary.reached}, t_final: {summary.t_final} s, "
        f"min distances: {summary.min_distance}"
    )
    print(
        f"events: violation={events['violation']} infeasible={events['infeasible']} "
        f"edge_undefined={events['edge_undefined']}"
    )
    if events["violation"] > 0 or events["infeasible"] > 0:
        return 2
    if not summary.reached:
        return 3
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        config = load_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    params = config.safety
    report = validate_margins(params, [ob.bounds for ob in config.obstacles])
    for i, check in enumerate(report.checks):
        bounds = config.obstacles[i].bounds
        print(
            f"obstacle {i}: "
            f"speed margin {'ok' if check.speed_ok else 'FAIL'} "
            f"(v_max {params.v_max} vs {bounds.v_max} + {params.kappa_min}), "
            f"acceleration {'ok' if check.accel_ok else 'FAIL'} "
            f"(a_max {params.a_max} vs {bounds.a_max})"
        )
        if not check.turn_rate_ok:
            print(
                f"obstacle {i}: warning: turn rate r_max {params.r_max} rad/s is below "
                f"the conservative bound {check.turn_rate_required:.6g} rad/s; the bound "
                "is typically far from tight"
            )
    if not report.checks:
        print("no obstacles: nothing to check")
    if report.hard_pass:
        print("hard capability checks: pass")
        return 0
    print("hard capability checks: FAIL")
    return 2


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = _build_parser().parse_args(argv)
    if args.command == "simulate":
        return cmd_simulate(args)
    return cmd_validate(args)


if __name__ == "__main__":
    sys.exit(main())
