"""Deterministic job-shop scheduling environment and solver toolkit."""

from .instances import (
    Instance,
    InstanceFormatError,
    InstanceStats,
    JobSpec,
    Operation,
    ValidationReport,
    builtin_instance_dir,
    generate_random,
    load_instance,
    parse_instance,
    serialize_instance,
    validate,
)
from .engine import (
    EnvConfig,
    IllegalActionError,
    JobShopEnv,
    Observation,
    StepOutcome,
    TrajectoryRecorder,
    replay_actions,
)
from .schedule import (
    Schedule,
    ScheduleReport,
    Violation,
    export_gantt_svg,
    export_json,
    extract_schedule,
    import_json,
    schedule_makespan,
    validate_schedule,
)
from .agents import (
    FEATURE_COLUMNS,
    FifoAgent,
    GreedyFeatureAgent,
    MwkrAgent,
    PrioritySoftmaxAgent,
    RandomAgent,
    RolloutResult,
    ScriptedAgent,
    make_agent,
    masked_softmax,
    rollout,
)
from .search import SearchResult, best_of_search
from .exact import (
    EnvTreeResult,
    ExactResult,
    brute_force_optimal,
    env_tree_best,
)
from .bench import (
    BoundsEntry,
    RunRecord,
    embedded_bounds,
    load_instances,
    report,
    run_grid,
)

__version__ = "0.1.0"
