"""Trajectory and summary output: delimited CSV, summary JSON, SVG figure.

The CSV uses a fixed 9-significant-digit format so repeated runs of the same
scenario produce byte-identical files; summary metrics are defined at that
same precision, which makes them exactly recomputable from the CSV.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import TYPE_CHECKING

from .simulator import SummaryMetrics, TrajectoryLog, summarize

if TYPE_CHECKING:
    from .scenario import ScenarioConfig

_FMT = "%.9g"


def _cell(value: float | None) -> str:
    return "" if value is None else _FMT % value


def csv_header(obstacle_count: int) -> list[str]:
    columns = ["t", "x", "y", "psi", "v", "r_cmd", "a_cmd", "a_status", "r_status"]
    for i in range(obstacle_count):
        columns += [f"d_{i}", f"h_v_{i}", f"h_psi_{i}", f"gate_v_{i}", f"gate_psi_{i}"]
    return columns


def emit_csv(log: TrajectoryLog, path: str | Path) -> None:
    """Write the trajectory log; one row per step plus the terminal row."""
    if not log.t:
        raise ValueError("cannot emit an empty log")
    n = log.obstacle_count
    lines = [",".join(csv_header(n))]
    for row in range(len(log.t)):
        cells = [
            _FMT % log.t[row],
            _FMT % log.x[row],
            _FMT % log.y[row],
            _FMT % log.psi[row],
            _FMT % log.v[row],
            _cell(log.r_cmd[row]),
            _cell(log.a_cmd[row]),
            log.a_status[row],
            log.r_status[row],
        ]
        for i in range(n):
            cells.append(_FMT % log.d[i][row])
            cells.append(_cell(log.h_v[i][row]))
            cells.append(_cell(log.h_psi[i][row]))
            cells.append(str(log.gate_v[i][row]))
            cells.append(str(log.gate_psi[i][row]))
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_csv_log(path: str | Path, obstacle_count: int) -> TrajectoryLog:
    """Parse a trajectory CSV back into a log (at CSV precision)."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or lines[0].split(",") != csv_header(obstacle_count):
        raise ValueError(f"{path}: unexpected CSV header")
    log = TrajectoryLog(obstacle_count)
    for line in lines[1:]:
        cells = line.split(",")
        log.t.append(float(cells[0]))
        log.x.append(float(cells[1]))
        log.y.append(float(cells[2]))
        log.psi.append(float(cells[3]))
        log.v.append(float(cells[4]))
        log.r_cmd.append(float(cells[5]) if cells[5] else None)
        log.a_cmd.append(float(cells[6]) if cells[6] else None)
        log.a_status.append(cells[7])
        log.r_status.append(cells[8])
        for i in range(obstacle_count):
            base = 9 + 5 * i
            log.d[i].append(float(cells[base]))
            log.h_v[i].append(float(cells[base + 1]) if cells[base + 1] else None)
            log.h_psi[i].append(float(cells[base + 2]) if cells[base + 2] else None)
            log.gate_v[i].append(int(cells[base + 3]))
            log.gate_psi[i].append(int(cells[base + 4]))
    return log


def summary_from_csv(path: str | Path, d_min: list[float]) -> SummaryMetrics:
    """Recompute the summary from an emitted CSV; equals the original exactly."""
    return summarize(read_csv_log(path, len(d_min)), d_min)


def emit_summary(summary: SummaryMetrics, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(summary.to_dict(), indent=2) + "\n", encoding="utf-8"
    )


def read_summary(path: str | Path) -> SummaryMetrics:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return SummaryMetrics(
        reached=data["reached"],
        t_final=data["t_final"],
        min_distance=data["min_distance"],
        max_abs_r=data["max_abs_r"],
        max_abs_a=data["max_abs_a"],
        max_v=data["max_v"],
        min_v=data["min_v"],
        events=dict(data["events"]),
    )


def emit_svg(log: TrajectoryLog, config: "ScenarioConfig", path: str | Path) -> None:
    """Render the planar trajectory to an SVG file.

    Shows the vehicle path, each obstacle's path over the run, required
    separation circles at a few sampled instants, and the target marker
    with its acceptance circle.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Circle

    if not log.t:
        raise ValueError("cannot render an empty log")
    fig, ax = plt.subplots(figsize=(9, 6))
    ax.plot(log.x, log.y, color="tab:blue", lw=1.5, label="vehicle", gid="vehicle-path")

    t_final = log.t[-1]
    n_rows = len(log.t)
    stride = max(1, n_rows // 2000)
    times = [log.t[row] for row in range(0, n_rows, stride)]
    if times[-1] != t_final:
        times.append(t_final)
    snapshot_times = [t_final * frac for frac in (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)]

    for i, obstacle in enumerate(config.obstacles):
        xs = []
        ys = []
        for t in times:
            ox, oy, *_ = obstacle.motion.state_at(t)
            xs.append(ox)
            ys.append(oy)
        (line,) = ax.plot(xs, ys, color="0.55", lw=1.0)
        line.set_gid(f"obstacle-path-{i}")
        for t in snapshot_times:
            ox, oy, *_ = obstacle.motion.state_at(t)
            ax.add_patch(
                Circle(
                    (ox, oy),
                    obstacle.d_min,
                    fill=False,
                    edgecolor="tab:red",
                    linestyle="--",
                    lw=0.6,
                    alpha=0.6,
                )
            )

    target = config.guidance.target
    ax.plot([target.x], [target.y], marker="*", markersize=12, color="tab:green",
            linestyle="none", label="target", gid="target-marker")
    ax.add_patch(
        Circle((target.x, target.y), config.guidance.d_acc, fill=False,
               edgecolor="tab:green", linestyle=":", lw=0.8)
    )

    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, linestyle=":", alpha=0.4)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def write_outputs(
    log: TrajectoryLog,
    summary: SummaryMetrics,
    config: "ScenarioConfig",
    out_dir: str | Path,
    csv: bool = True,
    svg: bool = False,
) -> None:
    """Write summary.json plus the optional trajectory.csv / trajectory.svg."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    emit_summary(summary, out / "summary.json")
    if csv:
        emit_csv(log, out / "trajectory.csv")
    if svg:
        emit_svg(log, config, out / "trajectory.svg")
