"""Command line front end, exercised in-process through main(argv)."""

import json

import pytest

from jobshop import export_json, generate_random, parse_instance, serialize_instance
from jobshop.cli import _parse_seeds, main
from jobshop.schedule import Schedule


@pytest.fixture
def inst_file(tmp_path):
    inst = generate_random(3, 3, seed=6, duration_range=(1, 9))
    path = tmp_path / f"{inst.name}.txt"
    path.write_text(serialize_instance(inst))
    return inst, path


def test_inspect_reports_stats(inst_file, capsys):
    inst, path = inst_file
    assert main(["inspect", str(path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["name"] == inst.name
    assert payload["job_count"] == 3
    assert payload["machine_count"] == 3
    assert payload["valid"] is True
    assert payload["total_duration"] == inst.stats.total_duration


def test_inspect_missing_file_exits(tmp_path):
    with pytest.raises(SystemExit):
        main(["inspect", str(tmp_path / "nope.txt")])


def test_rollout_writes_everything(inst_file, tmp_path, capsys):
    inst, path = inst_file
    dump = tmp_path / "traj.jsonl"
    sched = tmp_path / "sched.json"
    gantt = tmp_path / "gantt.svg"
    code = main(
        [
            "rollout", str(path), "--agent", "mwkr",
            "--dump", str(dump), "--schedule", str(sched),
            "--gantt", str(gantt),
        ]
    )
    assert code == 0
    line = json.loads(capsys.readouterr().out)
    assert line["agent"] == "mwkr"
    assert line["steps"] == 9
    assert line["makespan"] >= inst.stats.trivial_lower_bound

    rows = [json.loads(l) for l in dump.read_text().splitlines()]
    assert len(rows) == 9
    assert set(rows[0]) == {"step", "action", "reward_raw", "done", "clock", "mask"}
    assert rows[-1]["done"] is True
    assert all(not r["done"] for r in rows[:-1])
    assert [r["step"] for r in rows] == list(range(9))

    saved = json.loads(sched.read_text())
    assert saved["makespan"] == line["makespan"]
    assert gantt.read_bytes().count(b"<rect") == 9


def test_validate_good_and_bad(inst_file, tmp_path, capsys):
    inst, path = inst_file
    good = tmp_path / "good.json"
    main(["rollout", str(path), "--agent", "fifo", "--schedule", str(good)])
    capsys.readouterr()
    assert main(["validate", str(path), str(good)]) == 0
    assert "valid schedule" in capsys.readouterr().out

    bad_inst = parse_instance("2 1\n0 4\n0 4\n")
    bad_path = tmp_path / "clash.txt"
    bad_path.write_text(serialize_instance(bad_inst))
    bad_sched = tmp_path / "bad.json"
    payload = export_json(bad_inst, Schedule(((0,), (4,))))
    bad_sched.write_text(payload.replace('[[0],[4]]', '[[0],[0]]').replace('"makespan":8', '"makespan":4'))
    assert main(["validate", str(bad_path), str(bad_sched)]) == 1
    assert "overlap" in capsys.readouterr().out


def test_gantt_command(inst_file, tmp_path, capsys):
    inst, path = inst_file
    sched = tmp_path / "s.json"
    main(["rollout", str(path), "--agent", "fifo", "--schedule", str(sched)])
    out = tmp_path / "g.svg"
    assert main(["gantt", str(path), str(sched), "-o", str(out)]) == 0
    assert out.read_bytes().startswith(b"<svg")


def test_bench_run_and_report_round_trip(inst_file, tmp_path, capsys):
    inst, path = inst_file
    out_dir = tmp_path / "results"
    code = main(
        [
            "bench", "run", "--instances", str(path.parent),
            "--agents", "fifo,mwkr", "--budget", "0.2",
            "--out", str(out_dir),
        ]
    )
    assert code == 0
    records = json.loads((out_dir / "records.json").read_text())["records"]
    assert len(records) == 2
    capsys.readouterr()

    assert main(["bench", "report", str(out_dir), "--bounds", "none"]) == 0
    md = capsys.readouterr().out
    assert "| dataset | instance | agent" in md
    assert (out_dir / "report.md").exists()
    assert (out_dir / "report.csv").exists()
    assert (out_dir / "report.json").exists()


def test_bench_run_reports_failures(inst_file, tmp_path, capsys):
    inst, path = inst_file
    out_dir = tmp_path / "results"
    code = main(
        [
            "bench", "run", "--instances", str(path.parent),
            "--agents", "fifo,bogus", "--budget", "0.2",
            "--out", str(out_dir),
        ]
    )
    assert code == 1
    assert "FAILED" in capsys.readouterr().out


def test_bench_run_builtin_only_filter(tmp_path, capsys):
    out_dir = tmp_path / "r"
    code = main(
        [
            "bench", "run", "--instances", "builtin", "--only", "ft06",
            "--agents", "fifo", "--budget", "0.2", "--out", str(out_dir),
        ]
    )
    assert code == 0
    records = json.loads((out_dir / "records.json").read_text())["records"]
    assert [r["instance"] for r in records] == ["ft06"]
    assert records[0]["makespan"] == 60


def test_bench_run_unknown_only_name(tmp_path):
    with pytest.raises(SystemExit):
        main(
            [
                "bench", "run", "--instances", "builtin", "--only", "ta99",
                "--agents", "fifo", "--out", str(tmp_path / "x"),
            ]
        )


def test_parse_seeds():
    assert _parse_seeds("0..4") == [0, 1, 2, 3, 4]
    assert _parse_seeds("0,3,7") == [0, 3, 7]
    assert _parse_seeds("5") == [5]
