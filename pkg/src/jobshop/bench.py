"""Benchmark harness: agent grids, reference bounds, deterministic reports.

CSV schema v1 columns, in order: instance, dataset, agent, seed,
wall_budget_s, makespan, episodes, wall_time_s, engine_steps_per_second,
gap_to_upper_bound_pct, error. The JSON payload carries the same records
under a schema_version key.
"""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict
from pathlib import Path

from .agents import make_agent, rollout
from .engine import EnvConfig
from .instances import Instance, load_instance
from .schedule import validate_schedule
from .search import best_of_search

__all__ = [
    "BoundsEntry",
    "RunRecord",
    "ReportBundle",
    "embedded_bounds",
    "load_instances",
    "run_grid",
    "report",
    "worker_count_from_env",
]

WORKERS_ENV_VAR = "JOBSHOP_WORKERS"


@dataclass(frozen=True)
class BoundsEntry:
    """Reference makespans for one benchmark instance.

    The reference columns are published results for this instance: classic
    FIFO and most-work-remaining dispatchers run through an environment of
    this design, a learned dispatcher trained on the instance, and a
    constraint-programming solver, plus the best known completion time.
    """

    name: str
    dataset: str
    jobs: int
    machines: int
    upper_bound: int
    cp_reference: int
    learned_reference: int
    fifo_reference: int
    mwkr_reference: int


def _tai(name, learned, fifo, mwkr, cp, ub):
    return BoundsEntry(name, "taillard", 30, 20, ub, cp, learned, fifo, mwkr)


def _dmu(name, learned, fifo, mwkr, cp, ub):
    return BoundsEntry(name, "demirkol", 30, 20, ub, cp, learned, fifo, mwkr)


_BOUNDS = {
    e.name: e
    for e in (
        _tai("ta41", 2208, 2543, 2632, 2144, 2005),
        _tai("ta42", 2168, 2578, 2401, 2071, 1937),
        _tai("ta43", 2086, 2506, 2385, 1967, 1846),
        _tai("ta44", 2261, 2555, 2532, 2094, 1979),
        _tai("ta45", 2227, 2565, 2431, 2032, 2000),
        _tai("ta46", 2349, 2617, 2485, 2129, 2004),
        _tai("ta47", 2101, 2508, 2301, 1952, 1889),
        _tai("ta48", 2267, 2541, 2350, 2091, 1941),
        _tai("ta49", 2154, 2550, 2474, 2089, 1961),
        _tai("ta50", 2216, 2531, 2496, 2010, 1923),
        _dmu("dmu16", 4188, 4934, 4550, 3903, 3751),
        _dmu("dmu17", 4274, 5014, 4874, 3960, 3814),
        _dmu("dmu18", 4326, 4936, 4792, 4073, 3844),
        _dmu("dmu19", 4195, 4902, 4842, 3922, 3764),
        _dmu("dmu20", 4074, 4539, 4500, 3913, 3703),
    )
}


def embedded_bounds() -> dict[str, BoundsEntry]:
    """Reference table for the standard 30x20 benchmark instances."""
    return dict(_BOUNDS)


@dataclass(frozen=True)
class RunRecord:
    instance: str
    agent: str
    seed: int | None
    wall_budget_s: float
    makespan: int | None
    episodes: int
    wall_time_s: float
    engine_steps_per_second: float
    error: str | None = None


@dataclass(frozen=True)
class ReportBundle:
    markdown: str
    csv: str
    json: str


def worker_count_from_env(default: int = 1) -> int:
    raw = os.environ.get(WORKERS_ENV_VAR, "")
    if not raw:
        return default
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV_VAR} must be an integer, got {raw!r}")
    if n < 1:
        raise ValueError(f"{WORKERS_ENV_VAR} must be >= 1, got {n}")
    return n


def load_instances(directory: str | Path) -> list[Instance]:
    """All *.txt instances in a directory, sorted by file name."""
    directory = Path(directory)
    paths = sorted(directory.glob("*.txt"))
    if not paths:
        raise FileNotFoundError(f"no *.txt instance files in {directory}")
    return [load_instance(p) for p in paths]


def _deterministic(agent_spec: str) -> bool:
    return agent_spec.partition(":")[0] in ("fifo", "mwkr", "greedy")


def _make_deterministic(agent_spec: str):
    head, _, rest = agent_spec.partition(":")
    if head == "greedy":
        from .agents import GreedyFeatureAgent

        return GreedyFeatureAgent(rest or "work_left")
    return make_agent(agent_spec)


def _run_cell(
    instance: Instance,
    agent_spec: str,
    seed: int | None,
    budget_s: float,
    config: EnvConfig | None,
) -> RunRecord:
    steps_per_episode = instance.job_count * instance.machine_count
    try:
        t0 = time.perf_counter()
        if seed is None:
            result = rollout(instance, _make_deterministic(agent_spec), config=config)
            wall = time.perf_counter() - t0
            rep = validate_schedule(instance, result.schedule)
            if not rep.ok:
                raise AssertionError(f"schedule failed validation: {rep.violations[0]}")
            return RunRecord(
                instance=instance.name,
                agent=agent_spec,
                seed=None,
                wall_budget_s=budget_s,
                makespan=result.makespan,
                episodes=1,
                wall_time_s=wall,
                engine_steps_per_second=result.steps / wall if wall > 0 else 0.0,
            )
        search = best_of_search(
            instance, agent_spec, budget_s=budget_s, seed=seed, config=config
        )
        rep = validate_schedule(instance, search.best_schedule)
        if not rep.ok:
            raise AssertionError(f"schedule failed validation: {rep.violations[0]}")
        steps_total = search.episodes * steps_per_episode
        return RunRecord(
            instance=instance.name,
            agent=agent_spec,
            seed=seed,
            wall_budget_s=budget_s,
            makespan=search.best_makespan,
            episodes=search.episodes,
            wall_time_s=search.wall_time,
            engine_steps_per_second=(
                steps_total / search.wall_time if search.wall_time > 0 else 0.0
            ),
        )
    except Exception as exc:
        return RunRecord(
            instance=instance.name,
            agent=agent_spec,
            seed=seed,
            wall_budget_s=budget_s,
            makespan=None,
            episodes=0,
            wall_time_s=0.0,
            engine_steps_per_second=0.0,
            error=f"{type(exc).__name__}: {exc}",
        )


def run_grid(
    instances: list[Instance],
    agent_specs: list[str],
    budget_s: float = 600.0,
    seeds: list[int] | None = None,
    workers: int = 1,
    config: EnvConfig | None = None,
) -> list[RunRecord]:
    """One record per grid cell; deterministic agents run once per instance,
    stochastic ones run a budgeted search per seed. A failing cell yields a
    record with its error message; the grid keeps going.
    """
    seeds = list(seeds) if seeds is not None else [0]
    cells: list[tuple[Instance, str, int | None]] = []
    for instance in instances:
        for spec in agent_specs:
            if _deterministic(spec):
                cells.append((instance, spec, None))
            else:
                for seed in seeds:
                    cells.append((instance, spec, seed))

    if workers <= 1 or len(cells) <= 1:
        records = [
            _run_cell(inst, spec, seed, budget_s, config)
            for inst, spec, seed in cells
        ]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_cell, inst, spec, seed, budget_s, config)
                for inst, spec, seed in cells
            ]
            records = [f.result() for f in futures]
    records.sort(key=lambda r: (r.instance, r.agent, -1 if r.seed is None else r.seed))
    return records


def _gap_pct(makespan: int, upper_bound: int) -> float:
    return (makespan - upper_bound) / upper_bound * 100.0


def report(
    records: list[RunRecord],
    bounds: dict[str, BoundsEntry] | None = None,
) -> ReportBundle:
    """Render records as aligned markdown, CSV, and JSON; same input, same bytes."""
    if not records:
        raise ValueError("no records to report")
    bounds = bounds or {}

    def dataset_of(name: str) -> str:
        entry = bounds.get(name)
        return entry.dataset if entry else "other"

    rows = []
    for r in records:
        entry = bounds.get(r.instance)
        gap = (
            _gap_pct(r.makespan, entry.upper_bound)
            if entry and r.makespan is not None
            else None
        )
        rows.append((r, dataset_of(r.instance), gap))

    # Per-dataset, per-agent averages over error-free records.
    averages = []
    seen_groups = []
    for r, ds, _ in rows:
        key = (ds, r.agent)
        if key not in seen_groups:
            seen_groups.append(key)
    for ds, agent in sorted(seen_groups):
        group = [
            (r, gap)
            for r, d, gap in rows
            if d == ds and r.agent == agent and r.makespan is not None
        ]
        if not group:
            continue
        mean_ms = sum(r.makespan for r, _ in group) / len(group)
        gaps = [gap for _, gap in group if gap is not None]
        averages.append(
            {
                "dataset": ds,
                "agent": agent,
                "instances": len(group),
                "mean_makespan": round(mean_ms, 1),
                "mean_gap_to_upper_bound_pct": (
                    round(sum(gaps) / len(gaps), 2) if gaps else None
                ),
            }
        )

    md = io.StringIO()
    md.write(
        "| dataset | instance | agent | seed | makespan | gap_ub_% | episodes | wall_s |\n"
    )
    md.write("|---|---|---|---|---|---|---|---|\n")
    for r, ds, gap in rows:
        seed = "" if r.seed is None else str(r.seed)
        if r.error:
            md.write(
                f"| {ds} | {r.instance} | {r.agent} | {seed} | ERROR | | | "
                f"{r.error} |\n"
            )
            continue
        gap_s = "" if gap is None else f"{gap:.2f}"
        md.write(
            f"| {ds} | {r.instance} | {r.agent} | {seed} | {r.makespan} "
            f"| {gap_s} | {r.episodes} | {r.wall_time_s:.2f} |\n"
        )
    for avg in averages:
        gap_s = (
            ""
            if avg["mean_gap_to_upper_bound_pct"] is None
            else f"{avg['mean_gap_to_upper_bound_pct']:.2f}"
        )
        md.write(
            f"| {avg['dataset']} | average | {avg['agent']} | | "
            f"{avg['mean_makespan']:.1f} | {gap_s} | | |\n"
        )

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        [
            "instance",
            "dataset",
            "agent",
            "seed",
            "wall_budget_s",
            "makespan",
            "episodes",
            "wall_time_s",
            "engine_steps_per_second",
            "gap_to_upper_bound_pct",
            "error",
        ]
    )
    for r, ds, gap in rows:
        writer.writerow(
            [
                r.instance,
                ds,
                r.agent,
                "" if r.seed is None else r.seed,
                f"{r.wall_budget_s:g}",
                "" if r.makespan is None else r.makespan,
                r.episodes,
                f"{r.wall_time_s:.3f}",
                f"{r.engine_steps_per_second:.0f}",
                "" if gap is None else f"{gap:.2f}",
                r.error or "",
            ]
        )

    payload = {
        "schema_version": 1,
        "records": [
            {**asdict(r), "dataset": ds, "gap_to_upper_bound_pct": gap}
            for r, ds, gap in rows
        ],
        "averages": averages,
    }
    js = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    return ReportBundle(markdown=md.getvalue(), csv=buf.getvalue(), json=js)
