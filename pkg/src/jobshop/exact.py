"""Exhaustive solvers for tiny instances.

Two deliberately independent searches:

* ``brute_force_optimal`` enumerates active schedules directly from the
  instance data (Giffler-Thompson branching with a lower-bound cutoff) and
  never touches the environment, so it can serve as an outside oracle.
* ``env_tree_best`` explores every action sequence the environment itself
  permits, which measures what the restricted action space can still reach.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import EnvConfig, JobShopEnv
from .instances import Instance
from .schedule import Schedule

__all__ = [
    "ExactResult",
    "EnvTreeResult",
    "brute_force_optimal",
    "env_tree_best",
]

_DEFAULT_OP_LIMIT = 12


@dataclass(frozen=True)
class ExactResult:
    makespan: int
    schedule: Schedule
    nodes: int


@dataclass(frozen=True)
class EnvTreeResult:
    makespan: int
    actions: tuple[int, ...]
    nodes: int


def _check_size(instance: Instance, op_limit: int) -> None:
    total = instance.job_count * instance.machine_count
    if total > op_limit:
        raise ValueError(
            f"instance has {total} operations; exhaustive search is capped "
            f"at {op_limit} (raise op_limit at your own risk)"
        )


def brute_force_optimal(
    instance: Instance,
    op_limit: int = _DEFAULT_OP_LIMIT,
    node_budget: int = 2_000_000,
    upper_bound: int | None = None,
) -> ExactResult:
    """Provably optimal makespan via active-schedule enumeration.

    Branches on the conflict set of the machine that can finish an operation
    earliest; every active schedule (and therefore at least one optimum) is
    reachable. A max(job tail, machine load) bound prunes the rest;
    ``upper_bound`` may pass a makespan known to be achievable (from any
    feasible schedule) to tighten pruning from the first node.
    """
    _check_size(instance, op_limit)
    J = instance.job_count
    M = instance.machine_count
    op_mach = instance.machines_array()
    op_dur = instance.durations_array()
    total_ops = J * M

    # rem_work[j][k]: work left for job j from op k on (inclusive).
    rem_work = np.zeros((J, M + 1), dtype=np.int64)
    for j in range(J):
        for k in range(M - 1, -1, -1):
            rem_work[j, k] = rem_work[j, k + 1] + op_dur[j, k]
    rem_load = np.zeros(M, dtype=np.int64)
    for j in range(J):
        for k in range(M):
            rem_load[op_mach[j, k]] += op_dur[j, k]

    next_op = [0] * J
    job_ready = [0] * J
    mach_ready = [0] * M
    starts = [[-1] * M for _ in range(J)]
    # Some active schedule matches any feasible bound, so +1 keeps it findable.
    best = [float("inf") if upper_bound is None else upper_bound + 1]
    best_starts: list[list[list[int]] | None] = [None]
    nodes = [0]

    def dfs(done: int) -> None:
        nodes[0] += 1
        if nodes[0] > node_budget:
            raise RuntimeError(f"search exceeded {node_budget} nodes")
        if done == total_ops:
            cmax = max(job_ready)
            if cmax < best[0]:
                best[0] = cmax
                best_starts[0] = [row[:] for row in starts]
            return

        ect_star = None
        m_star = -1
        for j in range(J):
            k = next_op[j]
            if k >= M:
                continue
            m = op_mach[j, k]
            ect = max(job_ready[j], mach_ready[m]) + op_dur[j, k]
            if ect_star is None or ect < ect_star:
                ect_star = ect
                m_star = m

        for j in range(J):
            k = next_op[j]
            if k >= M or op_mach[j, k] != m_star:
                continue
            est = max(job_ready[j], mach_ready[m_star])
            if est >= ect_star:
                continue
            end = est + op_dur[j, k]
            saved_job = job_ready[j]
            saved_mach = mach_ready[m_star]
            starts[j][k] = est
            job_ready[j] = end
            mach_ready[m_star] = end
            rem_load[m_star] -= op_dur[j, k]
            next_op[j] = k + 1

            lb = 0
            for i in range(J):
                t = job_ready[i] + rem_work[i, next_op[i]]
                if t > lb:
                    lb = t
            for m in range(M):
                t = mach_ready[m] + rem_load[m]
                if t > lb:
                    lb = t
            if lb < best[0]:
                dfs(done + 1)

            next_op[j] = k
            rem_load[m_star] += op_dur[j, k]
            mach_ready[m_star] = saved_mach
            job_ready[j] = saved_job
            starts[j][k] = -1

    dfs(0)
    if best_starts[0] is None:
        raise ValueError(
            "upper_bound is below the optimal makespan; pass a bound taken "
            "from a feasible schedule"
        )
    return ExactResult(
        makespan=int(best[0]),
        schedule=Schedule(
            starts=tuple(tuple(row) for row in best_starts[0])
        ),
        nodes=nodes[0],
    )


def env_tree_best(
    instance: Instance,
    config: EnvConfig | None = None,
    op_limit: int = _DEFAULT_OP_LIMIT,
    node_budget: int = 2_000_000,
) -> EnvTreeResult:
    """Best makespan reachable through the environment's own action space.

    Depth-first over legal actions with transposition caching on the packed
    state, so converging action orders are explored once.
    """
    _check_size(instance, op_limit)
    memo: dict[bytes, tuple[int, int]] = {}
    nodes = [0]

    def dfs(env: JobShopEnv) -> int:
        if env.is_done:
            return env.makespan()
        key = env.state_key()
        hit = memo.get(key)
        if hit is not None:
            return hit[0]
        nodes[0] += 1
        if nodes[0] > node_budget:
            raise RuntimeError(f"search exceeded {node_budget} nodes")
        best_value = None
        best_action = -1
        for action in env.legal_actions():
            child = env.copy()
            child.step(action)
            value = dfs(child)
            if best_value is None or value < best_value:
                best_value = value
                best_action = action
        assert best_value is not None
        memo[key] = (best_value, best_action)
        return best_value

    root = JobShopEnv(instance, config=config)
    root.reset()
    best = dfs(root)

    actions: list[int] = []
    env = JobShopEnv(instance, config=config)
    env.reset()
    while not env.is_done:
        entry = memo.get(env.state_key())
        if entry is None:
            # Terminal states are never memoized; anything else is a bug.
            raise AssertionError("lost the principal variation")
        actions.append(entry[1])
        env.step(entry[1])
    if env.makespan() != best:
        raise AssertionError("replayed actions do not reproduce the best value")
    return EnvTreeResult(
        makespan=int(best), actions=tuple(actions), nodes=nodes[0]
    )
