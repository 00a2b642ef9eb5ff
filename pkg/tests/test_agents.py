"""Decision rules: softmax math, greedy tie-breaking, rollout plumbing."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jobshop import (
    FifoAgent,
    GreedyFeatureAgent,
    JobShopEnv,
    MwkrAgent,
    PrioritySoftmaxAgent,
    RandomAgent,
    ScriptedAgent,
    generate_random,
    make_agent,
    masked_softmax,
    parse_instance,
    rollout,
    validate_schedule,
)
from jobshop.agents import FEATURE_COLUMNS

WAIT_INSTANCE = "2 3\n0 10 1 1 2 1\n1 2 0 3 2 1\n"


def test_feature_columns_cover_observation_width():
    assert sorted(FEATURE_COLUMNS.values()) == list(range(7))
    assert FEATURE_COLUMNS["legal"] == 0
    assert FEATURE_COLUMNS["work_left"] == 3


# -- masked softmax ---------------------------------------------------------


def test_softmax_single_legal_entry():
    probs = masked_softmax(np.array([0.0, 0.0]), np.array([True, False]))
    assert probs[0] == 1.0
    assert probs[1] == 0.0


def test_softmax_uniform_on_equal_scores():
    probs = masked_softmax(np.zeros(4), np.ones(4, dtype=bool))
    assert np.allclose(probs, 0.25, atol=1e-12)


def test_softmax_known_ratio():
    probs = masked_softmax(
        np.array([math.log(2.0), 0.0]), np.array([True, True])
    )
    assert abs(probs[0] - 2.0 / 3.0) < 1e-12
    assert abs(probs[1] - 1.0 / 3.0) < 1e-12


def test_softmax_low_temperature_concentrates():
    probs = masked_softmax(
        np.array([0.3, 0.7, 0.5]), np.ones(3, dtype=bool), temperature=1e-6
    )
    assert probs[1] > 0.9999


def test_softmax_rejects_bad_inputs():
    with pytest.raises(ValueError):
        masked_softmax(np.zeros(2), np.zeros(2, dtype=bool))
    with pytest.raises(ValueError):
        masked_softmax(np.zeros(2), np.ones(2, dtype=bool), temperature=0.0)
    with pytest.raises(ValueError):
        masked_softmax(np.zeros(2), np.ones(2, dtype=bool), temperature=-1.0)


def test_softmax_does_not_mutate_inputs():
    scores = np.array([1.0, 2.0, 3.0])
    mask = np.array([True, False, True])
    masked_softmax(scores, mask)
    assert scores.tolist() == [1.0, 2.0, 3.0]
    assert mask.tolist() == [True, False, True]


@given(
    scores=st.lists(
        st.floats(min_value=-50, max_value=50), min_size=2, max_size=9
    ),
    bits=st.integers(min_value=1, max_value=511),
)
@settings(max_examples=80, deadline=None)
def test_softmax_properties(scores, bits):
    scores = np.array(scores)
    mask = np.array(
        [(bits >> i) & 1 == 1 for i in range(len(scores))], dtype=bool
    )
    if not mask.any():
        mask[0] = True
    probs = masked_softmax(scores, mask)
    assert abs(probs.sum() - 1.0) < 1e-12
    assert np.all(probs[~mask] == 0.0)
    assert np.all(probs[mask] > 0.0)
    # ordering respects scores among legal entries
    legal = np.flatnonzero(mask)
    for a in legal:
        for b in legal:
            if scores[a] > scores[b]:
                assert probs[a] >= probs[b]


# -- sampling agent ---------------------------------------------------------


def observed_state(instance_text, actions):
    env = JobShopEnv(parse_instance(instance_text))
    env.reset()
    for a in actions:
        env.step(a)
    return env, env.observe()


def test_priority_softmax_prefers_high_feature_at_low_temperature():
    inst = generate_random(6, 4, seed=3)
    greedy = GreedyFeatureAgent("work_left")
    agent = PrioritySoftmaxAgent("work_left", temperature=1e-6, seed=0)
    env = JobShopEnv(inst)
    obs = env.reset()
    matches = 0
    for _ in range(10):
        choice = agent.decide(obs)
        if choice == greedy.decide(obs):
            matches += 1
        out = env.step(greedy.decide(obs))
        if out.done:
            break
        obs = out.observation
    assert matches >= 9  # argmax w.p. > 0.9999 per draw


def test_priority_softmax_sampling_matches_probabilities():
    env, obs = observed_state(WAIT_INSTANCE, [])
    feats = obs.features[:, FEATURE_COLUMNS["work_left"]]
    probs = masked_softmax(feats, obs.mask[:-1], temperature=1.0)
    agent = PrioritySoftmaxAgent("work_left", temperature=1.0, seed=12)
    n = 10_000
    counts = np.zeros(len(probs))
    for _ in range(n):
        counts[agent.decide(obs)] += 1
    freq = counts / n
    for p, f in zip(probs, freq):
        sigma = math.sqrt(p * (1 - p) / n)
        assert abs(f - p) <= max(3 * sigma, 1e-9)


def test_priority_softmax_is_seed_reproducible():
    inst = generate_random(5, 4, seed=9)
    runs = [rollout(inst, PrioritySoftmaxAgent(seed=4)) for _ in range(2)]
    assert runs[0].actions == runs[1].actions
    assert runs[0].makespan == runs[1].makespan


def test_priority_softmax_never_waits_when_a_job_is_legal():
    env, obs = observed_state(WAIT_INSTANCE, [1])
    assert obs.mask.tolist() == [True, False, True]
    agent = PrioritySoftmaxAgent(seed=0)
    for _ in range(50):
        assert agent.decide(obs) == 0


# -- deterministic rules ----------------------------------------------------


def test_fifo_picks_longest_waiting_job():
    inst = generate_random(6, 5, seed=17)
    env = JobShopEnv(inst)
    obs = env.reset()
    agent = FifoAgent()
    rng = np.random.default_rng(1)
    for _ in range(12):
        legal = np.flatnonzero(obs.mask[:-1])
        if legal.size:
            waits = np.array(
                [env.clock - int(env._job_busy[j]) for j in legal]
            )
            expected = int(legal[int(np.argmax(waits))])
            assert agent.decide(obs) == expected
        out = env.step(int(rng.choice(np.flatnonzero(obs.mask))))
        if out.done:
            break
        obs = out.observation


def test_mwkr_picks_most_remaining_work():
    inst = generate_random(6, 5, seed=23)
    env = JobShopEnv(inst)
    obs = env.reset()
    agent = MwkrAgent()
    rng = np.random.default_rng(2)
    for _ in range(12):
        legal = np.flatnonzero(obs.mask[:-1])
        if legal.size:
            rem = []
            for j in legal:
                left = sum(
                    op.duration for op in inst.jobs[j].ops[int(env._next_op[j]) :]
                )
                rem.append(left + max(0, int(env._job_busy[j]) - env.clock))
            expected = int(legal[int(np.argmax(rem))])
            assert agent.decide(obs) == expected
        out = env.step(int(rng.choice(np.flatnonzero(obs.mask))))
        if out.done:
            break
        obs = out.observation


def test_greedy_breaks_ties_on_lowest_index():
    inst = parse_instance("2 1\n0 4\n0 4\n")
    obs = JobShopEnv(inst).reset()
    assert GreedyFeatureAgent("work_left").decide(obs) == 0


def test_random_agent_streams_are_legal_and_reproducible():
    inst = generate_random(5, 4, seed=29)
    a = rollout(inst, RandomAgent(seed=6))
    b = rollout(inst, RandomAgent(seed=6))
    assert a.actions == b.actions
    c = rollout(inst, RandomAgent(seed=7))
    assert validate_schedule(inst, c.schedule).valid


def test_scripted_agent_replays_then_exhausts():
    inst = parse_instance("2 1\n0 3\n0 4\n")
    agent = ScriptedAgent([1, 0])
    result = rollout(inst, agent)
    assert result.actions == [1, 0]
    obs = JobShopEnv(inst).reset()
    with pytest.raises(IndexError):
        agent.decide(obs)


# -- spec strings -----------------------------------------------------------


def test_make_agent_parses_specs():
    assert make_agent("fifo").name == "fifo"
    assert make_agent("mwkr").name == "mwkr"
    assert make_agent("random:7").name == "random:7"
    assert make_agent("softmax").name.startswith("softmax:work_left")
    assert make_agent("softmax:job_wait:0.5").name == "softmax:job_wait:0.5"


def test_make_agent_rejects_unknown():
    with pytest.raises(ValueError):
        make_agent("spt")
    with pytest.raises(ValueError):
        make_agent("softmax:not_a_feature")
    with pytest.raises(ValueError):
        make_agent("softmax:work_left:0")


# -- rollout ----------------------------------------------------------------


def test_rollout_result_is_complete_and_replayable():
    inst = generate_random(4, 4, seed=41)
    result = rollout(inst, FifoAgent())
    assert result.steps == len(result.actions)
    assert validate_schedule(inst, result.schedule).valid
    replayed = rollout(inst, ScriptedAgent(result.actions))
    assert replayed.makespan == result.makespan
    assert replayed.schedule == result.schedule
    expected = 2 * inst.stats.total_duration - 4 * result.makespan
    assert result.reward_raw_sum == expected


def test_rollout_episode_length_without_waiting():
    # deterministic rules never pick the wait action, so episode length is
    # exactly the operation count
    inst = generate_random(8, 6, seed=2)
    for agent in (FifoAgent(), MwkrAgent()):
        result = rollout(inst, agent)
        assert result.steps == 8 * 6
