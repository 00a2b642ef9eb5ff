"""Classic job-shop instance model, text-format I/O, and aggregates.

An instance is a set of jobs, each visiting every machine exactly once in a
fixed order, with integer processing times. The on-disk format is the
de-facto standard one used by the public benchmark distributions:

    # optional comment lines
    <job_count> <machine_count>
    <machine> <duration> <machine> <duration> ...   (one line per job)

Machine indices are 0-based. Files that use 1-based indices can be ingested
with ``one_based=True``, which shifts every machine index down by one before
validation.

Aggregates (total duration, per-machine load, trivial lower bound) are
computed once and reused by the environment for feature scaling and by the
benchmark harness for sanity bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterator

import numpy as np

__all__ = [
    "Operation",
    "JobSpec",
    "Instance",
    "InstanceStats",
    "ValidationReport",
    "InstanceFormatError",
    "parse_instance",
    "load_instance",
    "serialize_instance",
    "validate",
    "generate_random",
    "builtin_instance_dir",
]


class InstanceFormatError(ValueError):
    """Raised when instance text cannot be parsed. Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Operation:
    """One non-preemptive step of a job: a machine and an integer duration."""

    machine: int
    duration: int


@dataclass(frozen=True)
class JobSpec:
    """Ordered operations of a single job."""

    ops: tuple[Operation, ...]

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[Operation]:
        return iter(self.ops)

    @property
    def total_duration(self) -> int:
        return sum(op.duration for op in self.ops)


@dataclass(frozen=True)
class InstanceStats:
    """Instance-level aggregates used for feature scaling and sanity bounds."""

    max_op_duration: int
    total_duration: int
    job_totals: tuple[int, ...]
    machine_totals: tuple[int, ...]
    trivial_lower_bound: int


@dataclass(frozen=True)
class Instance:
    """Immutable problem definition: jobs, machine count, and a display name."""

    name: str
    machine_count: int
    jobs: tuple[JobSpec, ...]

    @property
    def job_count(self) -> int:
        return len(self.jobs)

    @property
    def op_count(self) -> int:
        return sum(len(job) for job in self.jobs)

    @cached_property
    def stats(self) -> InstanceStats:
        job_totals = tuple(job.total_duration for job in self.jobs)
        machine_totals = [0] * self.machine_count
        max_op = 0
        for job in self.jobs:
            for op in job:
                if 0 <= op.machine < self.machine_count:
                    machine_totals[op.machine] += op.duration
                if op.duration > max_op:
                    max_op = op.duration
        total = sum(job_totals)
        lb = max(max(job_totals, default=0), max(machine_totals, default=0))
        return InstanceStats(
            max_op_duration=max_op,
            total_duration=total,
            job_totals=job_totals,
            machine_totals=tuple(machine_totals),
            trivial_lower_bound=lb,
        )

    def machines_array(self) -> np.ndarray:
        """(job_count, machine_count) int64 array of operation machines."""
        return np.array(
            [[op.machine for op in job] for job in self.jobs], dtype=np.int64
        )

    def durations_array(self) -> np.ndarray:
        """(job_count, machine_count) int64 array of operation durations."""
        return np.array(
            [[op.duration for op in job] for job in self.jobs], dtype=np.int64
        )


@dataclass
class ValidationReport:
    """All model-level invariant violations found. Empty list means valid."""

    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    """Yield (1-based line number, stripped line), skipping blanks and comments."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def parse_instance(text: str, name: str = "", one_based: bool = False) -> Instance:
    """Parse standard-format instance text into a validated Instance.

    Raises InstanceFormatError (with a line number) on a malformed header,
    wrong field counts, machine indices out of range, non-positive durations,
    or a job visiting the same machine twice.
    """
    lines = _content_lines(text)
    try:
        header_no, header = next(lines)
    except StopIteration:
        raise InstanceFormatError("empty instance text") from None

    fields = header.split()
    if len(fields) != 2:
        raise InstanceFormatError(
            f"header must be '<jobs> <machines>', got {header!r}", header_no
        )
    try:
        job_count, machine_count = int(fields[0]), int(fields[1])
    except ValueError:
        raise InstanceFormatError(
            f"header must contain two integers, got {header!r}", header_no
        ) from None
    if job_count < 1 or machine_count < 1:
        raise InstanceFormatError(
            f"job and machine counts must be positive, got {job_count} {machine_count}",
            header_no,
        )

    shift = 1 if one_based else 0
    jobs: list[JobSpec] = []
    for lineno, line in lines:
        if len(jobs) == job_count:
            raise InstanceFormatError(
                f"expected {job_count} job lines, found extra data", lineno
            )
        tokens = line.split()
        if len(tokens) != 2 * machine_count:
            raise InstanceFormatError(
                f"job {len(jobs)} must have {machine_count} 'machine duration' "
                f"pairs ({2 * machine_count} fields), got {len(tokens)}",
                lineno,
            )
        try:
            values = [int(tok) for tok in tokens]
        except ValueError:
            raise InstanceFormatError(
                f"job {len(jobs)} contains a non-integer field", lineno
            ) from None

        ops: list[Operation] = []
        seen: set[int] = set()
        for k in range(machine_count):
            machine = values[2 * k] - shift
            duration = values[2 * k + 1]
            if not 0 <= machine < machine_count:
                raise InstanceFormatError(
                    f"job {len(jobs)} op {k}: machine {machine} out of range "
                    f"[0, {machine_count})",
                    lineno,
                )
            if machine in seen:
                raise InstanceFormatError(
                    f"job {len(jobs)} visits machine {machine} twice", lineno
                )
            if duration < 1:
                raise InstanceFormatError(
                    f"job {len(jobs)} op {k}: duration {duration} must be >= 1",
                    lineno,
                )
            seen.add(machine)
            ops.append(Operation(machine=machine, duration=duration))
        jobs.append(JobSpec(ops=tuple(ops)))

    if len(jobs) != job_count:
        raise InstanceFormatError(
            f"expected {job_count} job lines, found {len(jobs)}"
        )
    return Instance(name=name, machine_count=machine_count, jobs=tuple(jobs))


def load_instance(path: str | Path, one_based: bool = False) -> Instance:
    """Parse an instance file; the instance name is the file stem."""
    path = Path(path)
    return parse_instance(path.read_text(), name=path.stem, one_based=one_based)


def serialize_instance(instance: Instance) -> str:
    """Canonical standard-format text. parse(serialize(x)) == x up to the name."""
    out = [f"{instance.job_count} {instance.machine_count}"]
    for job in instance.jobs:
        out.append(" ".join(f"{op.machine} {op.duration}" for op in job))
    return "\n".join(out) + "\n"


def validate(instance: Instance) -> ValidationReport:
    """Model-level validation. Violations are data, not exceptions.

    Checks the classic-JSS shape: every job visits every machine exactly once,
    all durations are positive integers, machine indices are in range.
    """
    report = ValidationReport()
    m = instance.machine_count
    if m < 1:
        report.violations.append(f"machine_count must be >= 1, got {m}")
    if instance.job_count < 1:
        report.violations.append("instance has no jobs")
    for j, job in enumerate(instance.jobs):
        if len(job) != m:
            report.violations.append(
                f"job {j} has {len(job)} ops, expected {m} (one per machine)"
            )
        seen: set[int] = set()
        for k, op in enumerate(job):
            if not 0 <= op.machine < m:
                report.violations.append(
                    f"job {j} op {k}: machine {op.machine} out of range [0, {m})"
                )
            elif op.machine in seen:
                report.violations.append(
                    f"job {j} visits machine {op.machine} more than once"
                )
            seen.add(op.machine)
            if op.duration < 1:
                report.violations.append(
                    f"job {j} op {k}: duration {op.duration} must be >= 1"
                )
    return report


def generate_random(
    job_count: int,
    machine_count: int,
    seed: int,
    duration_range: tuple[int, int] = (1, 99),
    name: str | None = None,
) -> Instance:
    """Seeded random classic instance: uniform integer durations over
    ``duration_range`` and an independent machine permutation per job.

    The same (job_count, machine_count, seed, duration_range) always produces
    the same instance.
    """
    lo, hi = duration_range
    if lo < 1 or hi < lo:
        raise ValueError(f"bad duration range {duration_range}")
    rng = np.random.default_rng(seed)
    jobs = []
    for _ in range(job_count):
        order = rng.permutation(machine_count)
        durations = rng.integers(lo, hi + 1, size=machine_count)
        jobs.append(
            JobSpec(
                ops=tuple(
                    Operation(machine=int(mach), duration=int(dur))
                    for mach, dur in zip(order, durations)
                )
            )
        )
    if name is None:
        name = f"rand{job_count}x{machine_count}_s{seed}"
    return Instance(name=name, machine_count=machine_count, jobs=tuple(jobs))


def builtin_instance_dir() -> Path:
    """Directory of instance files shipped with the package."""
    return Path(__file__).parent / "data" / "instances"
