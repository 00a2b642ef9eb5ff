"""Fixtures and the parity-summary hook for the bridge suite."""

from pathlib import Path

import pytest

from jobshop.instances import builtin_instance_dir, load_instance

_PARITY: dict[str, tuple[str, str]] = {}


def record_parity(criterion: str, status: str, detail: str = "") -> None:
    _PARITY[criterion] = (status, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _PARITY:
        return
    terminalreporter.section("bridge acceptance")
    for criterion in sorted(_PARITY):
        status, detail = _PARITY[criterion]
        terminalreporter.write_line(
            f"{status:<5} {criterion}" + (f"  [{detail}]" if detail else "")
        )


@pytest.fixture(scope="session")
def instance_dir() -> Path:
    return builtin_instance_dir()


@pytest.fixture(scope="session")
def big_instance_path(instance_dir) -> Path:
    ta41 = instance_dir / "ta41.txt"
    return ta41 if ta41.exists() else instance_dir / "rand30x20_s0.txt"


@pytest.fixture(scope="session")
def big_instance(big_instance_path):
    return load_instance(big_instance_path)
