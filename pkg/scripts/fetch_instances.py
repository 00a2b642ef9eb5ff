#!/usr/bin/env python3
"""Download the 15 standard 30x20 benchmark instances into the package.

The files (ta41-ta50 and dmu16-dmu20) are pulled from the community
benchmark collection on GitHub, normalized to the canonical serialization,
and structurally verified: classic 30x20 shape, valid machine permutations,
positive durations, and a trivial lower bound consistent with the best
known makespan from the embedded reference table. Run it from any directory
on a machine with network access:

    python3 scripts/fetch_instances.py

Nothing here can verify provenance cryptographically; if your environment
mirrors the files elsewhere, pass --base-url pointing at a directory laid
out the same way (one file per instance, named ta41, ..., dmu20).
"""

from __future__ import annotations

import argparse
import sys
import urllib.error
import urllib.request
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from jobshop.bench import embedded_bounds
from jobshop.instances import parse_instance, serialize_instance, validate

DEFAULT_BASE_URL = "https://raw.githubusercontent.com/tamy0612/JSPLIB/master/instances"
NAMES = [f"ta{i}" for i in range(41, 51)] + [f"dmu{i}" for i in range(16, 21)]


def clean(text: str) -> str:
    """Drop comment and blank lines some distributions carry."""
    lines = [
        line
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    return "\n".join(lines) + "\n"


def fetch(name: str, base_url: str, timeout: float) -> str:
    url = f"{base_url}/{name}"
    with urllib.request.urlopen(url, timeout=timeout) as resp:
        return resp.read().decode("utf-8")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--base-url", default=DEFAULT_BASE_URL)
    parser.add_argument(
        "--dest",
        default=str(
            Path(__file__).resolve().parent.parent
            / "src"
            / "jobshop"
            / "data"
            / "instances"
        ),
    )
    parser.add_argument("--timeout", type=float, default=30.0)
    args = parser.parse_args()

    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    bounds = embedded_bounds()
    failures = 0
    for name in NAMES:
        try:
            raw = fetch(name, args.base_url, args.timeout)
        except (urllib.error.URLError, OSError) as exc:
            print(f"{name}: FETCH FAILED ({exc})")
            failures += 1
            continue
        try:
            instance = parse_instance(clean(raw), name=name)
        except ValueError as exc:
            print(f"{name}: PARSE FAILED ({exc})")
            failures += 1
            continue
        report = validate(instance)
        problems = list(report.violations)
        if instance.job_count != 30 or instance.machine_count != 20:
            problems.append(
                f"expected 30x20, got {instance.job_count}x{instance.machine_count}"
            )
        entry = bounds.get(name)
        if entry and instance.stats.trivial_lower_bound > entry.upper_bound:
            problems.append(
                f"trivial lower bound {instance.stats.trivial_lower_bound} exceeds "
                f"best known makespan {entry.upper_bound}; wrong file?"
            )
        if problems:
            print(f"{name}: REJECTED ({'; '.join(problems)})")
            failures += 1
            continue
        (dest / f"{name}.txt").write_text(serialize_instance(instance))
        print(
            f"{name}: ok ({instance.job_count}x{instance.machine_count}, "
            f"total work {instance.stats.total_duration})"
        )
    if failures:
        print(f"{failures} of {len(NAMES)} files failed", file=sys.stderr)
        return 1
    print(f"all {len(NAMES)} instances written to {dest}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
