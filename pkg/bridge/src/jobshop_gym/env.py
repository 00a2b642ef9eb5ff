"""Gym-style wrapper around the native scheduling environment.

The wrapper keeps the classic reinforcement-learning loop shape: ``reset``
returns an observation dict, ``step`` returns ``(obs, reward, done, info)``,
``render`` returns a printable snapshot. Observations are exposed as

* ``real_obs``: the (jobs, 7) float64 feature matrix, and
* ``action_mask``: a (jobs + 1,) boolean vector whose last entry is the
  wait action.

Everything is a thin pass-through; the native environment stays the single
source of truth for legality, rewards, and timing.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from jobshop import EnvConfig, IllegalActionError, JobShopEnv, load_instance
from jobshop.instances import Instance

__all__ = ["DiscreteSpace", "BoxSpace", "JobShopGym", "make"]


@dataclass(frozen=True)
class DiscreteSpace:
    """Integer actions 0..n-1."""

    n: int

    def contains(self, value) -> bool:
        return isinstance(value, (int, np.integer)) and 0 <= int(value) < self.n


@dataclass(frozen=True)
class BoxSpace:
    """Dense float observations with a fixed shape and inclusive bounds."""

    low: float
    high: float
    shape: tuple[int, ...]

    def contains(self, value) -> bool:
        arr = np.asarray(value)
        return arr.shape == self.shape and bool(
            np.all(arr >= self.low) and np.all(arr <= self.high)
        )


class JobShopGym:
    """reset/step/render front end for one scheduling instance."""

    metadata = {"render_modes": ["ansi"]}

    def __init__(self, instance: Instance, config: EnvConfig | None = None):
        self._env = JobShopEnv(instance, config)
        self.instance = instance
        self.action_space = DiscreteSpace(instance.job_count + 1)
        self.observation_space = {
            "real_obs": BoxSpace(0.0, 1.0, (instance.job_count, 7)),
            "action_mask": BoxSpace(0.0, 1.0, (instance.job_count + 1,)),
        }
        self._last_obs = None

    # -- core loop ----------------------------------------------------------

    def reset(self) -> dict:
        self._last_obs = self._env.reset()
        return self._to_dict(self._last_obs)

    def step(self, action) -> tuple[dict, float, bool, dict]:
        action = int(action)
        if not self.action_space.contains(action):
            raise IllegalActionError(action, self._env.legal_actions())
        outcome = self._env.step(action)
        self._last_obs = outcome.observation
        obs = self._to_dict(outcome.observation)
        info = {
            "clock": self._env.clock,
            "reward_raw": outcome.reward_raw,
        }
        if outcome.done:
            info["makespan"] = self._env.makespan()
        return obs, float(outcome.reward), bool(outcome.done), info

    def render(self) -> str:
        env = self._env
        lines = [
            f"{self.instance.name or 'instance'}: "
            f"t={env.clock} ops_left={env.ops_remaining} "
            f"done={env.is_done}"
        ]
        if self._last_obs is not None and not env.is_done:
            legal = ", ".join(str(a) for a in env.legal_actions())
            lines.append(f"legal actions: [{legal}] (wait={env.wait_action})")
        return "\n".join(lines)

    # -- conveniences -------------------------------------------------------

    @property
    def done(self) -> bool:
        return self._env.is_done

    @property
    def wait_action(self) -> int:
        return self._env.wait_action

    def legal_actions(self) -> list[int]:
        return self._env.legal_actions()

    @staticmethod
    def _to_dict(obs) -> dict:
        return {
            "real_obs": obs.features.copy(),
            "action_mask": obs.mask.copy(),
        }


def make(
    instance_path: str | Path,
    config: EnvConfig | None = None,
    one_based: bool = False,
) -> JobShopGym:
    """Build a wrapped environment from an instance file on disk."""
    return JobShopGym(load_instance(instance_path, one_based=one_based), config)
