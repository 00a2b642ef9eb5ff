"""Measure raw engine throughput on one instance.

Reports the median single-episode wall time under the FIFO rule and the
sampling-search episode rate, the two numbers that gate interactive use.

    python3 scripts/throughput.py ta41
    python3 scripts/throughput.py path/to/instance.txt --episodes 50
"""

import argparse
import statistics
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from jobshop import FifoAgent, best_of_search, load_instance, rollout
from jobshop.instances import builtin_instance_dir


def resolve(name: str):
    path = Path(name)
    if path.exists():
        return load_instance(path)
    builtin = builtin_instance_dir() / f"{name}.txt"
    if builtin.exists():
        return load_instance(builtin)
    sys.exit(f"error: no instance file or builtin named {name!r}")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("instance", help="instance path or builtin name")
    ap.add_argument("--episodes", type=int, default=30)
    ap.add_argument("--search-budget", type=float, default=6.0)
    args = ap.parse_args()

    inst = resolve(args.instance)
    rollout(inst, FifoAgent())  # compile before timing

    times = []
    for _ in range(args.episodes):
        t0 = time.perf_counter()
        result = rollout(inst, FifoAgent())
        times.append(time.perf_counter() - t0)
    median_ms = statistics.median(times) * 1000
    steps = result.steps

    search = best_of_search(inst, budget_s=args.search_budget, seed=0)
    eps_min = search.episodes / search.wall_time * 60

    print(f"instance            {inst.name} ({inst.job_count}x{inst.machine_count})")
    print(f"fifo episode median {median_ms:.2f} ms over {args.episodes} runs")
    print(f"engine step rate    {steps / (median_ms / 1000):,.0f} steps/s")
    print(f"search rate         {eps_min:,.0f} episodes/min "
          f"({search.episodes} episodes in {search.wall_time:.1f}s)")
    print(f"search best         {search.best_makespan}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
