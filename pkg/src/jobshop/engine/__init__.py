from .config import EnvConfig
from .env import (
    IllegalActionError,
    JobShopEnv,
    Observation,
    StepOutcome,
    TrajectoryRecorder,
    replay_actions,
)

__all__ = [
    "EnvConfig",
    "IllegalActionError",
    "JobShopEnv",
    "Observation",
    "StepOutcome",
    "TrajectoryRecorder",
    "replay_actions",
]
