import pytest
from hypothesis import given, settings, strategies as st

from jobshop import (
    Instance,
    InstanceFormatError,
    JobSpec,
    Operation,
    generate_random,
    parse_instance,
    serialize_instance,
    validate,
)


def test_parse_minimal():
    inst = parse_instance("1 1\n0 5\n", name="unit")
    assert inst.job_count == 1
    assert inst.machine_count == 1
    assert inst.jobs[0].ops == (Operation(0, 5),)


def test_parse_skips_blank_and_comment_lines():
    inst = parse_instance("# tiny\n\n1 1\n\n0 5\n")
    assert inst.job_count == 1


def test_parse_reports_line_numbers():
    with pytest.raises(InstanceFormatError, match="line 1"):
        parse_instance("not a header here\n")
    with pytest.raises(InstanceFormatError, match="line 3"):
        parse_instance("2 2\n0 1 1 1\n0 1 1\n")


def test_parse_rejects_machine_out_of_range():
    with pytest.raises(InstanceFormatError, match="out of range"):
        parse_instance("1 2\n0 1 2 1\n")


def test_parse_rejects_repeat_machine_visit():
    with pytest.raises(InstanceFormatError, match="twice"):
        parse_instance("1 2\n0 1 0 1\n")


def test_parse_rejects_nonpositive_duration():
    with pytest.raises(InstanceFormatError, match="duration"):
        parse_instance("1 2\n0 0 1 1\n")


def test_parse_rejects_missing_and_extra_jobs():
    with pytest.raises(InstanceFormatError, match="expected 2 job lines"):
        parse_instance("2 1\n0 1\n")
    with pytest.raises(InstanceFormatError, match="extra"):
        parse_instance("1 1\n0 1\n0 2\n")


def test_one_based_ingest_converts_indices():
    inst = parse_instance("1 2\n1 4 2 6\n", one_based=True)
    assert [op.machine for op in inst.jobs[0]] == [0, 1]
    # the same text is invalid as 0-based: machine index 2 out of range
    with pytest.raises(InstanceFormatError):
        parse_instance("1 2\n1 4 2 6\n")


def test_stats_single_op():
    inst = parse_instance("1 1\n0 5\n")
    stats = inst.stats
    assert stats.max_op_duration == 5
    assert stats.total_duration == 5
    assert stats.trivial_lower_bound == 5


def test_stats_two_jobs_one_machine():
    inst = parse_instance("2 1\n0 5\n0 7\n")
    assert inst.stats.machine_totals == (12,)
    assert inst.stats.trivial_lower_bound == 12


def test_stats_match_independent_recompute():
    inst = generate_random(7, 5, seed=11)
    durations = [[op.duration for op in job] for job in inst.jobs]
    assert inst.stats.total_duration == sum(map(sum, durations))
    assert inst.stats.max_op_duration == max(map(max, durations))
    assert inst.stats.job_totals == tuple(sum(row) for row in durations)
    per_machine = [0] * inst.machine_count
    for job in inst.jobs:
        for op in job:
            per_machine[op.machine] += op.duration
    assert inst.stats.machine_totals == tuple(per_machine)
    assert inst.stats.trivial_lower_bound == max(
        max(inst.stats.job_totals), max(per_machine)
    )


@given(
    jobs=st.integers(min_value=1, max_value=8),
    machines=st.integers(min_value=1, max_value=8),
    seed=st.integers(min_value=0, max_value=10_000),
)
@settings(max_examples=60, deadline=None)
def test_parse_serialize_round_trip(jobs, machines, seed):
    inst = generate_random(jobs, machines, seed=seed)
    again = parse_instance(serialize_instance(inst), name=inst.name)
    assert again == inst


@given(seed=st.integers(min_value=0, max_value=10_000))
@settings(max_examples=30, deadline=None)
def test_generator_is_deterministic_and_classic(seed):
    a = generate_random(5, 4, seed=seed)
    b = generate_random(5, 4, seed=seed)
    assert a == b
    assert validate(a).ok
    # classic shape: each machine appears once per job
    counts = [0] * a.machine_count
    for job in a.jobs:
        for op in job:
            counts[op.machine] += 1
    assert counts == [a.job_count] * a.machine_count


def test_generator_names_and_duration_range():
    inst = generate_random(3, 2, seed=9, duration_range=(5, 6))
    assert inst.name == "rand3x2_s9"
    assert all(5 <= op.duration <= 6 for job in inst.jobs for op in job)


def test_validate_flags_model_level_problems():
    bad = Instance(
        name="bad",
        machine_count=2,
        jobs=(JobSpec(ops=(Operation(0, 3), Operation(0, 2))),),
    )
    report = validate(bad)
    assert not report.ok
    assert any("more than once" in v for v in report.violations)


def test_serialize_is_canonical():
    inst = parse_instance("2 2\n0 3   1 4\n1 2 0 9\n")
    assert serialize_instance(inst) == "2 2\n0 3 1 4\n1 2 0 9\n"
