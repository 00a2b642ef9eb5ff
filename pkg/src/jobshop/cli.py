"""Command-line entry point: inspect, validate, render, roll out, benchmark."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import bench as bench_mod
from .agents import make_agent, rollout
from .engine import TrajectoryRecorder
from .instances import (
    InstanceFormatError,
    builtin_instance_dir,
    load_instance,
    validate,
)
from .schedule import export_gantt_svg, export_json, import_json, validate_schedule


def _load(path: str, one_based: bool = False):
    try:
        return load_instance(path, one_based=one_based)
    except FileNotFoundError:
        sys.exit(f"error: no such file: {path}")
    except InstanceFormatError as exc:
        sys.exit(f"error: {path}: {exc}")


def _cmd_inspect(args) -> int:
    instance = _load(args.instance, one_based=args.one_based)
    report = validate(instance)
    stats = instance.stats
    payload = {
        "name": instance.name,
        "job_count": instance.job_count,
        "machine_count": instance.machine_count,
        "max_op_duration": stats.max_op_duration,
        "total_duration": stats.total_duration,
        "job_totals": list(stats.job_totals),
        "machine_totals": list(stats.machine_totals),
        "trivial_lower_bound": stats.trivial_lower_bound,
        "valid": report.ok,
        "violations": list(report.violations),
    }
    print(json.dumps(payload, indent=2))
    return 0 if report.ok else 1


def _cmd_validate(args) -> int:
    instance = _load(args.instance)
    try:
        schedule = import_json(instance, Path(args.schedule).read_text())
    except FileNotFoundError:
        sys.exit(f"error: no such file: {args.schedule}")
    except ValueError as exc:
        print(f"invalid schedule file: {exc}")
        return 1
    report = validate_schedule(instance, schedule)
    if report.valid:
        print(f"valid schedule, makespan {report.makespan}")
        return 0
    for violation in report.violations:
        print(violation)
    return 1


def _cmd_gantt(args) -> int:
    instance = _load(args.instance)
    try:
        schedule = import_json(instance, Path(args.schedule).read_text())
    except FileNotFoundError:
        sys.exit(f"error: no such file: {args.schedule}")
    except ValueError as exc:
        sys.exit(f"error: invalid schedule file: {exc}")
    svg = export_gantt_svg(instance, schedule)
    Path(args.out).write_bytes(svg)
    print(f"wrote {args.out} ({len(svg)} bytes)")
    return 0


def _cmd_rollout(args) -> int:
    instance = _load(args.instance)
    agent = make_agent(args.agent, seed=args.seed)
    recorder = TrajectoryRecorder() if args.dump else None
    result = rollout(instance, agent, recorder=recorder)
    report = validate_schedule(instance, result.schedule)
    if args.dump:
        recorder.write(args.dump)
    if args.schedule_out:
        Path(args.schedule_out).write_text(export_json(instance, result.schedule))
    if args.gantt_out:
        Path(args.gantt_out).write_bytes(export_gantt_svg(instance, result.schedule))
    print(
        json.dumps(
            {
                "instance": instance.name,
                "agent": agent.name,
                "makespan": result.makespan,
                "steps": result.steps,
                "reward_raw_sum": result.reward_raw_sum,
                "schedule_valid": report.valid,
            }
        )
    )
    return 0 if report.valid else 1


def _parse_seeds(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        lo, _, hi = text.partition("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",") if part]


def _cmd_bench_run(args) -> int:
    directory = builtin_instance_dir() if args.instances == "builtin" else args.instances
    try:
        instances = bench_mod.load_instances(directory)
    except FileNotFoundError as exc:
        sys.exit(f"error: {exc}")
    if args.only:
        keep = set(args.only.split(","))
        instances = [i for i in instances if i.name in keep]
        missing = keep - {i.name for i in instances}
        if missing:
            sys.exit(f"error: instances not found: {', '.join(sorted(missing))}")
    agents = [a for a in args.agents.split(",") if a]
    seeds = _parse_seeds(args.seeds)
    workers = (
        args.workers
        if args.workers is not None
        else bench_mod.worker_count_from_env()
    )
    records = bench_mod.run_grid(
        instances, agents, budget_s=args.budget, seeds=seeds, workers=workers
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {
        "schema_version": 1,
        "records": [dataclasses.asdict(r) for r in records],
    }
    (out_dir / "records.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n"
    )
    failures = [r for r in records if r.error]
    for r in failures:
        print(f"FAILED {r.instance} {r.agent} seed={r.seed}: {r.error}")
    print(f"wrote {out_dir / 'records.json'} ({len(records)} records)")
    return 1 if failures else 0


def _cmd_bench_report(args) -> int:
    records_path = Path(args.results) / "records.json"
    if not records_path.exists():
        sys.exit(f"error: no such file: {records_path}")
    payload = json.loads(records_path.read_text())
    records = [bench_mod.RunRecord(**r) for r in payload["records"]]
    if args.bounds == "builtin":
        bounds = bench_mod.embedded_bounds()
    elif args.bounds == "none":
        bounds = {}
    else:
        sys.exit("error: --bounds must be 'builtin' or 'none'")
    bundle = bench_mod.report(records, bounds)
    out_dir = Path(args.results)
    (out_dir / "report.md").write_text(bundle.markdown)
    (out_dir / "report.csv").write_text(bundle.csv)
    (out_dir / "report.json").write_text(bundle.json)
    print(bundle.markdown, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jobshop",
        description="Job-shop scheduling toolkit: environment, agents, benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="print instance stats and validation as JSON")
    p.add_argument("instance")
    p.add_argument(
        "--one-based",
        action="store_true",
        help="treat machine indices in the file as 1-based and convert",
    )
    p.set_defaults(func=_cmd_inspect)

    p = sub.add_parser("validate", help="check a schedule JSON against an instance")
    p.add_argument("instance")
    p.add_argument("schedule")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("gantt", help="render a schedule JSON to SVG")
    p.add_argument("instance")
    p.add_argument("schedule")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=_cmd_gantt)

    p = sub.add_parser("rollout", help="run one episode and report the outcome")
    p.add_argument("instance")
    p.add_argument("--agent", default="fifo")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump", help="write the trajectory as JSON lines")
    p.add_argument("--schedule", dest="schedule_out", help="write the schedule JSON")
    p.add_argument("--gantt", dest="gantt_out", help="write a Gantt SVG")
    p.set_defaults(func=_cmd_rollout)

    p = sub.add_parser("bench", help="benchmark harness")
    bench_sub = p.add_subparsers(dest="bench_command", required=True)

    pr = bench_sub.add_parser("run", help="run an agent x instance grid")
    pr.add_argument(
        "--instances",
        required=True,
        help="directory of instance files, or 'builtin' for the bundled set",
    )
    pr.add_argument("--only", help="comma-separated instance names to keep")
    pr.add_argument("--agents", required=True, help="comma-separated agent specs")
    pr.add_argument("--budget", type=float, default=600.0)
    pr.add_argument("--seeds", default="0", help="e.g. '0..4' or '0,3,7'")
    pr.add_argument("--out", required=True, help="output directory")
    pr.add_argument(
        "--workers",
        type=int,
        help=f"parallel cells (default: ${bench_mod.WORKERS_ENV_VAR} or 1)",
    )
    pr.set_defaults(func=_cmd_bench_run)

    pp = bench_sub.add_parser("report", help="render reports from a results directory")
    pp.add_argument("results")
    pp.add_argument("--bounds", default="builtin", help="'builtin' or 'none'")
    pp.set_defaults(func=_cmd_bench_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
