"""Deterministic text output: CSV geometry, JSON scalars, demo table.

Numbers are serialized with 17 significant digits, enough to round-trip
any double exactly, and every renderer emits newline-terminated bodies
so identical inputs give byte-identical output.
"""

from __future__ import annotations

import json

from .fence import Fence, SnapshotSeries
from .kinematics import (
    ClockModel,
    SpeedRecord,
    distance_individual,
    distance_observer_discrete,
)
from .quad import QuadResult

__all__ = [
    "format_float",
    "scalar_json",
    "fence_csv",
    "snapshots_csv",
    "table1_text",
]


def format_float(x: float) -> str:
    return f"{x:.17g}"


def scalar_json(op: str, alpha: float | None, t: float, result: QuadResult) -> str:
    """One-line JSON record for a scalar operator result."""
    alpha_text = "null" if alpha is None else format_float(alpha)
    return (
        "{"
        f'"op": {json.dumps(op)}, '
        f'"alpha": {alpha_text}, '
        f'"t": {format_float(t)}, '
        f'"value": {format_float(result.value)}, '
        f'"error_estimate": {format_float(result.error_estimate)}, '
        f'"nodes_used": {result.nodes_used}'
        "}\n"
    )


def fence_csv(fence: Fence) -> str:
    lines = ["tau,g,f"]
    for tau, g, f in zip(fence.tau, fence.g, fence.f):
        lines.append(f"{format_float(tau)},{format_float(g)},{format_float(f)}")
    return "\n".join(lines) + "\n"


def snapshots_csv(series: SnapshotSeries) -> str:
    lines = ["t,tau,g,f"]
    for snap in series:
        t_text = format_float(snap.t)
        fence = snap.fence
        for tau, g, f in zip(fence.tau, fence.g, fence.f):
            lines.append(
                f"{t_text},{format_float(tau)},{format_float(g)},{format_float(f)}"
            )
    return "\n".join(lines) + "\n"


def table1_text() -> str:
    """The slowing-clock demonstration: speed log, both clocks, both sums."""
    record = SpeedRecord.table1()
    clock = ClockModel.doubling(len(record))
    lines = ["velocity [m/s]  observer clock [s]"]
    for speed, tick in zip(record.speeds, clock.tick_times):
        lines.append(f"{speed:>14g}  {tick:>18g}")
    lines.append("")
    lines.append(f"S_N = {distance_individual(record):g}")
    lines.append(f"S_O = {distance_observer_discrete(record, clock):g}")
    return "\n".join(lines) + "\n"
