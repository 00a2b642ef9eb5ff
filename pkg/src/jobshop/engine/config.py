"""Environment configuration."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class EnvConfig:
    """Toggles and caps for the action-legality rules and reward scaling.

    The default configuration is the intended behavior; toggles exist for
    ablation experiments.

    nonfinal_prioritization: suppress a job whose next operation is its last
        when another allocatable job still mid-route wants the same machine.
    wait_rule_future_work: the wait action is legal only if every machine
        with an allocatable job is guaranteed a new mid-route job arrival
        strictly sooner than that machine's shortest allocatable operation.
    wait_rule_caps: the wait action is illegal once too much work is
        allocatable (``machines_cap`` machines with candidates, or
        ``jobs_cap`` candidate jobs).
    wait_rule_pending: the wait action requires a pending future event.
        Disabling it (ablation only) lets a wait run the event queue dry,
        which the engine reports as a deadlock instead of hanging.
    scale_rewards: divide step rewards by the instance's longest operation.
    """

    nonfinal_prioritization: bool = True
    wait_rule_future_work: bool = True
    wait_rule_caps: bool = True
    wait_rule_pending: bool = True
    machines_cap: int = 4
    jobs_cap: int = 5
    scale_rewards: bool = True
