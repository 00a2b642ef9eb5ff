"""Shared fixtures and the acceptance-summary hook.

Acceptance tests register one line each; the summary block at the end of a
run shows every criterion's verdict regardless of how verbose the run was.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from jobshop import FifoAgent, builtin_instance_dir, generate_random, load_instance
from jobshop.agents import rollout

TAI_NAMES = [f"ta{i}" for i in range(41, 51)]
DMU_NAMES = [f"dmu{i}" for i in range(16, 21)]

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def record_acceptance(criterion: str, status: str, detail: str = "") -> None:
    _ACCEPTANCE[criterion] = (status, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(_ACCEPTANCE, key=_criterion_key):
        status, detail = _ACCEPTANCE[criterion]
        line = f"{status:>4}  {criterion}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


def _criterion_key(name: str):
    head = name.split(":")[0]
    digits = "".join(ch for ch in head if ch.isdigit())
    return (int(digits) if digits else 99, name)


@pytest.fixture(scope="session")
def warm_engine():
    """Compile the kernels once so timing-sensitive tests never pay JIT cost."""
    rollout(generate_random(2, 2, seed=0), FifoAgent())
    rollout(generate_random(30, 20, seed=0), FifoAgent())


@pytest.fixture(scope="session")
def instance_dir() -> Path:
    return builtin_instance_dir()


@pytest.fixture(scope="session")
def benchmark_files(instance_dir):
    """The 15 standard benchmark instances, if fetched; else the missing list."""
    present = {}
    missing = []
    for name in TAI_NAMES + DMU_NAMES:
        path = instance_dir / f"{name}.txt"
        if path.exists():
            present[name] = load_instance(path)
        else:
            missing.append(name)
    return present, missing


@pytest.fixture(scope="session")
def standins(instance_dir):
    """Ten synthetic 30x20 instances bundled for instance-agnostic checks."""
    return [
        load_instance(instance_dir / f"rand30x20_s{i}.txt") for i in range(10)
    ]


@pytest.fixture(scope="session")
def big_instance(benchmark_files, standins):
    """ta41 when the benchmark files are fetched, else the first stand-in."""
    present, _ = benchmark_files
    if "ta41" in present:
        return present["ta41"]
    return standins[0]


@pytest.fixture(scope="session")
def ft06(instance_dir):
    return load_instance(instance_dir / "ft06.txt")
