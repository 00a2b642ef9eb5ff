"""Schedules as verifiable artifacts: validation, makespan, export.

Everything here recomputes from the instance definition and raw start times
alone, with no reliance on the environment's bookkeeping, so a schedule
produced by any component can be checked independently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .instances import Instance

__all__ = [
    "Schedule",
    "ScheduleReport",
    "Violation",
    "extract_schedule",
    "validate_schedule",
    "schedule_makespan",
    "export_json",
    "import_json",
    "export_gantt_svg",
]


@dataclass(frozen=True)
class Schedule:
    """Start time of every operation, indexed [job][op position]. -1 = unset."""

    starts: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_array(arr: np.ndarray) -> "Schedule":
        return Schedule(starts=tuple(tuple(int(v) for v in row) for row in arr))

    def to_array(self) -> np.ndarray:
        return np.array(self.starts, dtype=np.int64)

    @property
    def complete(self) -> bool:
        return all(v >= 0 for row in self.starts for v in row)


@dataclass(frozen=True)
class Violation:
    """One broken constraint: kind is "precedence" or "overlap"."""

    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


@dataclass
class ScheduleReport:
    """Constraint violations plus the recomputed makespan; empty = valid."""

    makespan: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    # Short alias; reads better at call sites.
    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return not self.violations


def extract_schedule(env) -> Schedule:
    """Pull the completed schedule out of a finished environment."""
    if not env.is_done:
        raise ValueError("episode not finished; schedule would be incomplete")
    return Schedule.from_array(env.starts)


def validate_schedule(instance: Instance, schedule: Schedule) -> ScheduleReport:
    """Check precedence and machine-exclusivity from first principles.

    Requires a complete schedule; validating an incomplete one is an error
    because absent start times make the constraints undecidable.
    """
    if not schedule.complete:
        raise ValueError("schedule is incomplete (unset start times)")
    starts = schedule.starts
    if len(starts) != instance.job_count or any(
        len(row) != instance.machine_count for row in starts
    ):
        raise ValueError(
            f"schedule shape mismatch: expected {instance.job_count} x "
            f"{instance.machine_count} start times"
        )

    violations: list[Violation] = []
    makespan = 0
    per_machine: dict[int, list[tuple[int, int, int, int]]] = {
        m: [] for m in range(instance.machine_count)
    }
    for j, job in enumerate(instance.jobs):
        prev_end = None
        for k, op in enumerate(job):
            s = starts[j][k]
            e = s + op.duration
            if e > makespan:
                makespan = e
            if prev_end is not None and s < prev_end:
                violations.append(
                    Violation(
                        "precedence",
                        f"job {j} op {k} starts at {s} before "
                        f"op {k - 1} ends at {prev_end}",
                    )
                )
            prev_end = e
            per_machine[op.machine].append((s, e, j, k))

    for m, intervals in per_machine.items():
        intervals.sort()
        for (s1, e1, j1, k1), (s2, e2, j2, k2) in zip(intervals, intervals[1:]):
            if s2 < e1:
                violations.append(
                    Violation(
                        "overlap",
                        f"machine {m} runs job {j1} op {k1} [{s1}, {e1}) "
                        f"and job {j2} op {k2} [{s2}, {e2})",
                    )
                )
    return ScheduleReport(makespan=makespan, violations=violations)


def schedule_makespan(instance: Instance, schedule: Schedule) -> int:
    """Latest completion across all operations."""
    if not schedule.complete:
        raise ValueError("schedule is incomplete (unset start times)")
    best = 0
    for j, job in enumerate(instance.jobs):
        for k, op in enumerate(job):
            end = schedule.starts[j][k] + op.duration
            if end > best:
                best = end
    return best


def export_json(instance: Instance, schedule: Schedule) -> str:
    payload = {
        "instance_name": instance.name,
        "makespan": schedule_makespan(instance, schedule),
        "starts": [list(row) for row in schedule.starts],
    }
    return json.dumps(payload, separators=(",", ":")) + "\n"


def import_json(instance: Instance, text: str) -> Schedule:
    """Parse an exported schedule and cross-check its recorded makespan."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"schedule JSON is malformed: {exc}") from None
    for key in ("instance_name", "makespan", "starts"):
        if key not in payload:
            raise ValueError(f"schedule JSON missing field {key!r}")
    starts = payload["starts"]
    if (
        not isinstance(starts, list)
        or len(starts) != instance.job_count
        or any(
            not isinstance(row, list) or len(row) != instance.machine_count
            for row in starts
        )
    ):
        raise ValueError(
            f"starts must be a {instance.job_count} x {instance.machine_count} "
            "integer matrix"
        )
    schedule = Schedule(
        starts=tuple(tuple(int(v) for v in row) for row in starts)
    )
    actual = schedule_makespan(instance, schedule)
    if actual != payload["makespan"]:
        raise ValueError(
            f"recorded makespan {payload['makespan']} does not match "
            f"recomputed {actual}"
        )
    return schedule


# 20 well-separated fill colors, reused cyclically for larger job counts.
_PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def export_gantt_svg(instance: Instance, schedule: Schedule) -> bytes:
    """Render the schedule as SVG: one row per machine, colored by job.

    Pure function of its inputs; identical schedules yield identical bytes.
    """
    report = validate_schedule(instance, schedule)
    if not report.ok:
        raise ValueError(
            f"refusing to render an invalid schedule: {report.violations[0]}"
        )

    makespan = schedule_makespan(instance, schedule)
    row_h = 28
    left = 64
    top = 36
    chart_w = 1000
    width = left + chart_w + 20
    height = top + instance.machine_count * row_h + 36
    sx = chart_w / makespan if makespan else 1.0

    def x(t: int) -> str:
        return f"{left + t * sx:.2f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" font-family="monospace" font-size="11">',
        f'<text x="{left}" y="16">{_esc(instance.name or "schedule")} '
        f"makespan={makespan}</text>",
    ]
    for m in range(instance.machine_count):
        y = top + m * row_h
        parts.append(
            f'<text x="4" y="{y + row_h - 10}">M{m}</text>'
        )
        parts.append(
            f'<line x1="{left}" y1="{y + row_h - 4}" x2="{left + chart_w}" '
            f'y2="{y + row_h - 4}" stroke="#ddd"/>'
        )
    for j, job in enumerate(instance.jobs):
        color = _PALETTE[j % len(_PALETTE)]
        for k, op in enumerate(job):
            s = schedule.starts[j][k]
            y = top + op.machine * row_h
            w = f"{op.duration * sx:.2f}"
            parts.append(
                f'<rect x="{x(s)}" y="{y + 2}" width="{w}" height="{row_h - 8}" '
                f'fill="{color}" stroke="#333" stroke-width="0.5">'
                f"<title>J{j} op{k} [{s}, {s + op.duration})</title></rect>"
            )
    end_x = x(makespan)
    parts.append(
        f'<line x1="{end_x}" y1="{top - 6}" x2="{end_x}" '
        f'y2="{height - 30}" stroke="#e15759" stroke-dasharray="4 3"/>'
    )
    parts.append(
        f'<text x="{end_x}" y="{height - 14}" text-anchor="middle">{makespan}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts).encode("utf-8")


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )
