"""Event-driven scheduling environment with a dispatcher action model.

Actions are job indices (allocate that job's next operation at the current
clock) plus one extra "wait" action that deliberately advances time without
allocating. Whenever no job is allocatable, the engine advances through the
future-event queue on its own, so an agent always chooses among real
options; after the last allocation it advances to the final completion so
trailing idle is charged and the reward identity stays exact.

The per-step reward is the scheduled area added: allocated processing time
minus every machine-idle unit incurred while the clock advanced. Over a
completed episode the unscaled rewards sum to
``2 * total_duration - machine_count * makespan`` exactly.

All time arithmetic is 64-bit integer; a full episode is reproducible to the
byte given the instance, the config, and the action sequence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ..instances import Instance, validate
from .config import EnvConfig
from . import kernels
from .kernels import (
    META_CLOCK,
    META_HEAP,
    META_OPS,
    STATUS_DEADLOCK,
    STATUS_DONE,
    STATUS_ILLEGAL,
)

__all__ = [
    "JobShopEnv",
    "Observation",
    "StepOutcome",
    "IllegalActionError",
    "TrajectoryRecorder",
    "replay_actions",
]


class IllegalActionError(ValueError):
    """Rejected action; the environment state is unchanged."""

    def __init__(self, action: int, legal: list[int]):
        self.action = action
        self.legal = legal
        super().__init__(f"action {action} is illegal; legal actions: {legal}")


@dataclass
class Observation:
    """Per-job feature matrix (job_count, 7) and legal-action mask (job_count + 1).

    The last mask entry is the wait action. Feature columns:

    0. allocatable flag (mirrors the mask)
    1. remaining run time of the job's active operation / longest operation
    2. fraction of the job's operations already allocated
    3. remaining work including the active operation / longest job
    4. time until the next operation's machine frees / longest operation
    5. idle since the job's last completed operation / total work
    6. cumulative idle / total work
    """

    features: np.ndarray
    mask: np.ndarray


@dataclass
class StepOutcome:
    """Result of one env step.

    ``reward`` is scaled by the instance's longest operation when the config
    asks for scaling; ``reward_raw`` is always the integer scheduled-area
    value. ``holes`` is the per-machine idle charged during this step's clock
    advance and ``elapsed`` the advance itself.
    """

    observation: Observation
    reward: float
    reward_raw: int
    done: bool
    holes: np.ndarray
    elapsed: int


class JobShopEnv:
    """Deterministic scheduling environment over one instance.

    The constructor validates the instance and precomputes static arrays;
    ``reset`` starts an episode. Deep copies (``copy``) are cheap and make
    tree search over env states practical.
    """

    def __init__(self, instance: Instance, config: EnvConfig | None = None):
        report = validate(instance)
        if not report.ok:
            raise ValueError(
                "invalid instance: " + "; ".join(report.violations[:5])
            )
        self.instance = instance
        self.config = config or EnvConfig()
        if self.config.machines_cap < 1 or self.config.jobs_cap < 1:
            raise ValueError("legality caps must be >= 1")

        self.job_count = instance.job_count
        self.machine_count = instance.machine_count
        self.wait_action = self.job_count

        self._op_mach = instance.machines_array()
        self._op_dur = instance.durations_array()
        stats = instance.stats
        self._max_op = stats.max_op_duration
        self._max_job_total = max(stats.job_totals)
        self._total_dur = stats.total_duration
        self._job_totals = np.array(stats.job_totals, dtype=np.int64)

        J, M = self.job_count, self.machine_count
        self._next_op = np.zeros(J, dtype=np.int64)
        self._job_busy = np.zeros(J, dtype=np.int64)
        self._gap_last = np.zeros(J, dtype=np.int64)
        self._idle_acc = np.zeros(J, dtype=np.int64)
        self._rem_unalloc = np.zeros(J, dtype=np.int64)
        self._mach_busy = np.zeros(M, dtype=np.int64)
        self._paused = np.zeros(J, dtype=np.bool_)
        self._started = np.full((J, M), -1, dtype=np.int64)
        self._heap = np.zeros(M + 1, dtype=np.int64)
        self._meta = np.zeros(4, dtype=np.int64)
        self._holes = np.zeros(M, dtype=np.int64)

        cfg = self.config
        self._rule_args = (
            cfg.nonfinal_prioritization,
            cfg.wait_rule_future_work,
            cfg.wait_rule_caps,
            cfg.wait_rule_pending,
            cfg.machines_cap,
            cfg.jobs_cap,
        )
        self._started_episode = False
        self.steps = 0
        self.cumulative_reward_raw = 0

    # -- episode control ------------------------------------------------

    def reset(self) -> Observation:
        """Start a fresh episode and return the initial observation."""
        self._next_op[:] = 0
        self._job_busy[:] = 0
        self._gap_last[:] = 0
        self._idle_acc[:] = 0
        self._rem_unalloc[:] = self._job_totals
        self._mach_busy[:] = 0
        self._paused[:] = False
        self._started[:] = -1
        self._meta[:] = 0
        self._meta[META_OPS] = self.job_count * self.machine_count
        self.steps = 0
        self.cumulative_reward_raw = 0
        self._started_episode = True
        return self.observe()

    def step(self, action: int) -> StepOutcome:
        """Apply one action; reject illegal actions without touching state."""
        self._require_started()
        mask = np.empty(self.job_count + 1, dtype=np.bool_)
        feat = np.empty((self.job_count, 7), dtype=np.float64)
        reward_raw, elapsed, status = kernels.step_kernel(
            self._op_mach,
            self._op_dur,
            self._next_op,
            self._job_busy,
            self._gap_last,
            self._idle_acc,
            self._rem_unalloc,
            self._mach_busy,
            self._paused,
            self._started,
            self._heap,
            self._meta,
            int(action),
            *self._rule_args,
            self._max_op,
            self._max_job_total,
            self._total_dur,
            self._holes,
            mask,
            feat,
        )
        if status == STATUS_ILLEGAL:
            raise IllegalActionError(int(action), self.legal_actions())
        if status == STATUS_DEADLOCK:
            raise RuntimeError(
                "engine deadlock: a wait parked every remaining job with no "
                "pending arrival; this is only reachable with legality rules "
                "disabled in the config"
            )
        self.steps += 1
        self.cumulative_reward_raw += int(reward_raw)
        reward = (
            reward_raw / self._max_op if self.config.scale_rewards else float(reward_raw)
        )
        return StepOutcome(
            observation=Observation(features=feat, mask=mask),
            reward=reward,
            reward_raw=int(reward_raw),
            done=status == STATUS_DONE,
            holes=self._holes.copy(),
            elapsed=int(elapsed),
        )

    # -- views -----------------------------------------------------------

    def legal_actions(self) -> list[int]:
        """Indices of the currently legal actions, ascending."""
        self._require_started()
        if self.is_done:
            raise ValueError("episode is finished; no legal actions remain")
        return np.flatnonzero(self._mask()).tolist()

    def observe(self) -> Observation:
        self._require_started()
        mask = np.empty(self.job_count + 1, dtype=np.bool_)
        feat = np.empty((self.job_count, 7), dtype=np.float64)
        kernels.observe_kernel(
            self._op_mach,
            self._op_dur,
            self._next_op,
            self._job_busy,
            self._mach_busy,
            self._paused,
            self._gap_last,
            self._idle_acc,
            self._rem_unalloc,
            self._meta,
            *self._rule_args,
            self._max_op,
            self._max_job_total,
            self._total_dur,
            mask,
            feat,
        )
        return Observation(features=feat, mask=mask)

    def _mask(self) -> np.ndarray:
        mask = np.empty(self.job_count + 1, dtype=np.bool_)
        kernels.mask_kernel(
            self._op_mach,
            self._op_dur,
            self._next_op,
            self._job_busy,
            self._mach_busy,
            self._paused,
            self._meta,
            *self._rule_args,
            mask,
        )
        return mask

    @property
    def is_done(self) -> bool:
        return (
            self._started_episode
            and self._meta[META_OPS] == 0
            and self._meta[META_HEAP] == 0
        )

    @property
    def clock(self) -> int:
        return int(self._meta[META_CLOCK])

    @property
    def ops_remaining(self) -> int:
        return int(self._meta[META_OPS])

    @property
    def future_times(self) -> list[int]:
        """Pending event times, ascending, duplicates merged."""
        n = int(self._meta[META_HEAP])
        return sorted(set(self._heap[:n].tolist()))

    @property
    def cumulative_reward(self) -> float:
        if self.config.scale_rewards:
            return self.cumulative_reward_raw / self._max_op
        return float(self.cumulative_reward_raw)

    def makespan(self) -> int:
        """Completion time of the full schedule; defined once the episode is done."""
        if not self.is_done:
            raise ValueError("makespan is defined only on a finished episode")
        return int(self._job_busy.max())

    @property
    def starts(self) -> np.ndarray:
        """Copy of per-operation start times; -1 marks unallocated ops."""
        return self._started.copy()

    # -- search support ---------------------------------------------------

    def copy(self) -> "JobShopEnv":
        """Deep copy of the episode state; static data is shared."""
        clone = object.__new__(JobShopEnv)
        clone.__dict__.update(self.__dict__)
        for name in (
            "_next_op",
            "_job_busy",
            "_gap_last",
            "_idle_acc",
            "_rem_unalloc",
            "_mach_busy",
            "_paused",
            "_started",
            "_heap",
            "_meta",
        ):
            setattr(clone, name, getattr(self, name).copy())
        clone._holes = np.zeros_like(self._holes)
        return clone

    def state_key(self) -> bytes:
        """Canonical key of everything that determines future behavior."""
        return b"".join(
            (
                self._meta[:3].tobytes(),
                self._next_op.tobytes(),
                self._job_busy.tobytes(),
                self._mach_busy.tobytes(),
                self._paused.tobytes(),
            )
        )

    def _require_started(self) -> None:
        if not self._started_episode:
            raise RuntimeError("call reset() before using the environment")


class TrajectoryRecorder:
    """Accumulates one JSON record per step for byte-stable dumps.

    Each record holds the action taken, the unscaled reward, the done flag,
    the clock after the step, and the resulting legal-action mask as 0/1
    integers.
    """

    def __init__(self) -> None:
        self.records: list[dict] = []

    def record(self, action: int, outcome: StepOutcome, clock: int) -> None:
        self.records.append(
            {
                "step": len(self.records),
                "action": int(action),
                "reward_raw": outcome.reward_raw,
                "done": bool(outcome.done),
                "clock": int(clock),
                "mask": outcome.observation.mask.astype(np.int8).tolist(),
            }
        )

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps(rec, separators=(",", ":")) + "\n" for rec in self.records
        )

    def write(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_jsonl().encode("ascii"))


def replay_actions(
    instance: Instance,
    actions: Sequence[int],
    config: EnvConfig | None = None,
) -> tuple[JobShopEnv, list[StepOutcome]]:
    """Drive a fresh env through a fixed action sequence."""
    env = JobShopEnv(instance, config)
    env.reset()
    outcomes = []
    for action in actions:
        outcomes.append(env.step(int(action)))
    return env, outcomes
