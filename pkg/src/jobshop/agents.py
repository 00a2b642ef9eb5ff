"""Dispatching policies that map observations to actions.

Feature columns are referred to by what they measure; the mapping to the
observation matrix lives in FEATURE_COLUMNS.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

import numpy as np
from numba import njit

from .engine import EnvConfig, JobShopEnv, Observation, TrajectoryRecorder
from .instances import Instance
from .schedule import Schedule, extract_schedule

__all__ = [
    "Agent",
    "FEATURE_COLUMNS",
    "GreedyFeatureAgent",
    "FifoAgent",
    "MwkrAgent",
    "RandomAgent",
    "PrioritySoftmaxAgent",
    "ScriptedAgent",
    "masked_softmax",
    "make_agent",
    "rollout",
    "RolloutResult",
]

# Observation feature matrix, one row per job.
FEATURE_COLUMNS = {
    "legal": 0,
    "run_left": 1,      # time left on the running operation
    "progress": 2,      # fraction of the route already allocated
    "work_left": 3,     # unallocated work plus the running remainder
    "machine_wait": 4,  # time until the next operation's machine frees up
    "job_wait": 5,      # idle time since the job last finished an operation
    "idle_total": 6,    # cumulative idle time over the whole episode
}


class Agent(Protocol):
    name: str

    def decide(self, obs: Observation) -> int: ...


@njit(cache=True)
def _pick_best_legal(features, mask, column):
    # Features are nonnegative by construction, so -1 is below every score.
    best = -1
    best_v = -1.0
    for j in range(features.shape[0]):
        if mask[j] and features[j, column] > best_v:
            best_v = features[j, column]
            best = j
    return best


def _greedy_job(obs: Observation, column: int) -> int:
    """Highest-scoring legal job, lowest index on ties; wait if none legal."""
    j = _pick_best_legal(obs.features, obs.mask, column)
    return j if j >= 0 else len(obs.mask) - 1


class GreedyFeatureAgent:
    """Always allocate the legal job with the highest value of one feature."""

    def __init__(self, feature: str):
        if feature not in FEATURE_COLUMNS:
            raise ValueError(
                f"unknown feature {feature!r}; choose from "
                f"{sorted(FEATURE_COLUMNS)}"
            )
        self.feature = feature
        self.name = f"greedy:{feature}"
        self._column = FEATURE_COLUMNS[feature]

    def decide(self, obs: Observation) -> int:
        return _greedy_job(obs, self._column)


class FifoAgent:
    """Allocate the job that has been waiting the longest."""

    name = "fifo"

    def decide(self, obs: Observation) -> int:
        return _greedy_job(obs, FEATURE_COLUMNS["job_wait"])


class MwkrAgent:
    """Allocate the job with the most work remaining."""

    name = "mwkr"

    def decide(self, obs: Observation) -> int:
        return _greedy_job(obs, FEATURE_COLUMNS["work_left"])


class RandomAgent:
    """Uniform over all legal actions, waiting included."""

    def __init__(self, seed: int = 0):
        self.name = f"random:{seed}"
        self._rng = np.random.default_rng(seed)

    def decide(self, obs: Observation) -> int:
        legal = np.flatnonzero(obs.mask)
        return int(self._rng.choice(legal))


def masked_softmax(
    scores: np.ndarray, mask: np.ndarray, temperature: float = 1.0
) -> np.ndarray:
    """Softmax over the masked entries; illegal entries get probability zero."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    if not mask.any():
        raise ValueError("mask admits no entries")
    z = np.where(mask, scores / temperature, np.finfo(np.float64).min)
    e = np.exp(z - z.max())
    e = np.where(mask, e, 0.0)
    return e / e.sum()


class PrioritySoftmaxAgent:
    """Sample a legal job with probability softmax(feature / temperature).

    Low temperatures concentrate on the greedy choice while still exploring;
    the agent never samples the wait action, falling back to it only when no
    job is allocatable.
    """

    def __init__(
        self,
        feature: str = "work_left",
        temperature: float = 1.0,
        seed: int = 0,
    ):
        if feature not in FEATURE_COLUMNS:
            raise ValueError(
                f"unknown feature {feature!r}; choose from "
                f"{sorted(FEATURE_COLUMNS)}"
            )
        if temperature <= 0.0:
            raise ValueError("temperature must be > 0")
        self.feature = feature
        self.temperature = float(temperature)
        self.name = f"softmax:{feature}:{self.temperature:g}"
        self._column = FEATURE_COLUMNS[feature]
        self._rng = np.random.default_rng(seed)

    def decide(self, obs: Observation) -> int:
        job_mask = obs.mask[:-1]
        if not job_mask.any():
            return len(job_mask)
        probs = masked_softmax(
            obs.features[:, self._column], job_mask, self.temperature
        )
        return int(self._rng.choice(len(job_mask), p=probs))


class ScriptedAgent:
    """Replay a fixed action sequence; raises when it runs out."""

    name = "scripted"

    def __init__(self, actions):
        self._actions = list(actions)
        self._cursor = 0

    def decide(self, obs: Observation) -> int:
        if self._cursor >= len(self._actions):
            raise IndexError("scripted agent exhausted its action list")
        action = self._actions[self._cursor]
        self._cursor += 1
        return int(action)


def make_agent(spec: str, seed: int = 0) -> Agent:
    """Build an agent from a string like "fifo" or "softmax:work_left:0.05"."""
    head, _, rest = spec.partition(":")
    if head == "fifo":
        return FifoAgent()
    if head == "mwkr":
        return MwkrAgent()
    if head == "random":
        return RandomAgent(seed=int(rest) if rest else seed)
    if head == "softmax":
        feature, _, temp = rest.partition(":")
        return PrioritySoftmaxAgent(
            feature=feature or "work_left",
            temperature=float(temp) if temp else 1.0,
            seed=seed,
        )
    raise ValueError(f"unknown agent spec {spec!r}")


@dataclass
class RolloutResult:
    makespan: int
    reward_raw_sum: int
    reward_sum: float
    steps: int
    schedule: Schedule
    actions: list[int] = field(default_factory=list)


def rollout(
    instance: Instance,
    agent: Agent,
    config: EnvConfig | None = None,
    recorder: TrajectoryRecorder | None = None,
) -> RolloutResult:
    """Run one full episode and package the outcome."""
    env = JobShopEnv(instance, config=config)
    obs = env.reset()
    actions: list[int] = []
    reward_sum = 0.0
    steps = 0
    while True:
        action = agent.decide(obs)
        outcome = env.step(action)
        if recorder is not None:
            recorder.record(action, outcome, env.clock)
        actions.append(action)
        reward_sum += outcome.reward
        steps += 1
        if outcome.done:
            break
        obs = outcome.observation
    return RolloutResult(
        makespan=env.makespan(),
        reward_raw_sum=int(env.cumulative_reward_raw),
        reward_sum=reward_sum,
        steps=steps,
        schedule=extract_schedule(env),
        actions=actions,
    )
