"""Best-of-many episode search under a wall-clock budget.

Episode 0 always runs the deterministic greedy counterpart of the sampling
policy, so the search result is never worse than the plain dispatching rule;
every further episode resamples with a fresh stream derived from the base
seed, making the history prefix reproducible for any fixed episode count.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .agents import GreedyFeatureAgent, make_agent, rollout
from .engine import EnvConfig
from .instances import Instance
from .schedule import Schedule, validate_schedule

__all__ = ["SearchResult", "best_of_search"]


@dataclass
class SearchResult:
    best_makespan: int
    best_schedule: Schedule
    episodes: int
    wall_time: float
    makespan_history: list[int] = field(default_factory=list)


def _greedy_twin(agent_spec: str, seed: int):
    head, _, rest = agent_spec.partition(":")
    if head == "softmax":
        feature = rest.partition(":")[0] or "work_left"
        return GreedyFeatureAgent(feature)
    return make_agent(agent_spec, seed=seed)


def best_of_search(
    instance: Instance,
    agent_spec: str = "softmax:work_left:0.05",
    budget_s: float = 60.0,
    seed: int = 0,
    config: EnvConfig | None = None,
    max_episodes: int | None = None,
) -> SearchResult:
    """Keep rolling episodes until the time budget runs out; return the best.

    ``max_episodes`` pins the episode count for exact reproducibility;
    otherwise the count depends on machine speed while the per-episode
    outcomes stay seed-determined.
    """
    if budget_s <= 0.0 and max_episodes is None:
        raise ValueError("budget_s must be > 0 unless max_episodes is set")
    t0 = time.perf_counter()
    best_makespan: int | None = None
    best_schedule: Schedule | None = None
    history: list[int] = []

    episode = 0
    while True:
        if episode == 0:
            agent = _greedy_twin(agent_spec, seed)
        else:
            agent = make_agent(agent_spec, seed=seed + episode)
        result = rollout(instance, agent, config=config)
        history.append(result.makespan)
        if best_makespan is None or result.makespan < best_makespan:
            best_makespan = result.makespan
            best_schedule = result.schedule
        episode += 1
        if max_episodes is not None and episode >= max_episodes:
            break
        if time.perf_counter() - t0 >= budget_s:
            break

    assert best_makespan is not None and best_schedule is not None
    assert best_makespan == min(history)
    report = validate_schedule(instance, best_schedule)
    if not report.ok:
        raise AssertionError(
            f"search produced an invalid schedule: {report.violations[0]}"
        )
    return SearchResult(
        best_makespan=best_makespan,
        best_schedule=best_schedule,
        episodes=episode,
        wall_time=time.perf_counter() - t0,
        makespan_history=history,
    )
