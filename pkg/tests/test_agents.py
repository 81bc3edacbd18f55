"""Baseline policies: random, scripted, tabular Q, distribution logging."""

import numpy as np
import pytest

from railmarket import (
    PricingEnv,
    QConfig,
    RandomPolicy,
    ScriptedPolicy,
    TabularQPolicy,
    log_policy_distribution,
    preset,
)
from railmarket.errors import EmptyTraceError, IncompatibleSpaceError

DISCRETE_SPACE = {
    "type": "discrete", "levels": 11, "dimension": 1,
    "cells": [{"service_id": "svc", "origin": "X", "destination": "Y",
               "seat_class": "standard"}],
}
CONTINUOUS_SPACE = {
    "type": "continuous", "low": -1.0, "high": 1.0, "dimension": 2,
    "cells": [
        {"service_id": "s1", "origin": "X", "destination": "Y", "seat_class": "standard"},
        {"service_id": "s2", "origin": "Y", "destination": "Z", "seat_class": "standard"},
    ],
}
OBS = {"day": 0, "services": []}


def test_random_discrete_uniform():
    policy = RandomPolicy(DISCRETE_SPACE, np.random.default_rng(0))
    counts = np.zeros(11)
    n = 100_000
    for _ in range(n):
        counts[policy.act(OBS)[0]] += 1
    assert np.all(np.abs(counts / n - 1 / 11) <= 0.01)


def test_random_continuous_centered():
    policy = RandomPolicy(CONTINUOUS_SPACE, np.random.default_rng(1))
    draws = np.array([policy.act(OBS) for _ in range(100_000)])
    assert draws.shape == (100_000, 2)
    assert np.all(np.abs(draws.mean(axis=0)) <= 0.02)
    assert np.all(draws >= -1.0) and np.all(draws <= 1.0)


def test_random_reproducible():
    a = RandomPolicy(DISCRETE_SPACE, np.random.default_rng(7))
    b = RandomPolicy(DISCRETE_SPACE, np.random.default_rng(7))
    assert [a.act(OBS) for _ in range(50)] == [b.act(OBS) for _ in range(50)]


def test_scripted_constant_and_schedule(tmp_path):
    policy = ScriptedPolicy(CONTINUOUS_SPACE, {"constant": -1.0})
    assert policy.act({"day": 0}) == [-1.0, -1.0]
    policy = ScriptedPolicy(DISCRETE_SPACE, {"per_day": [0, 5, 10]})
    assert policy.act({"day": 0}) == [0]
    assert policy.act({"day": 2}) == [10]
    assert policy.act({"day": 9}) == [10]  # clamped to last entry
    path = tmp_path / "policy.json"
    path.write_text('{"constant": 5}')
    loaded = ScriptedPolicy.from_file(DISCRETE_SPACE, str(path))
    assert loaded.act({"day": 0}) == [5]
    with pytest.raises(ValueError):
        ScriptedPolicy(DISCRETE_SPACE, {"bogus": 1})


def test_tabular_q_rejects_continuous_space():
    with pytest.raises(IncompatibleSpaceError):
        TabularQPolicy(CONTINUOUS_SPACE, np.random.default_rng(0))


def test_tabular_q_epsilon_one_is_uniform():
    policy = TabularQPolicy(DISCRETE_SPACE, np.random.default_rng(2),
                            QConfig(epsilon=1.0))
    obs = {"day": 0, "services": [{"service_id": "svc", "prices": [
        {"origin": "X", "destination": "Y", "seat_class": "standard", "price": 50.0}]}]}
    counts = np.zeros(11)
    n = 50_000
    for _ in range(n):
        counts[policy.act(obs)[0]] += 1
    assert np.all(np.abs(counts / n - 1 / 11) <= 0.015)


def test_tabular_q_greedy_tie_break_lowest_index():
    policy = TabularQPolicy(DISCRETE_SPACE, np.random.default_rng(3),
                            QConfig(epsilon=0.0))
    obs = {"day": 0, "services": [{"service_id": "svc", "prices": [
        {"origin": "X", "destination": "Y", "seat_class": "standard", "price": 50.0}]}]}
    assert policy.act(obs) == [0]  # all-zero Q row: lowest action index


def test_tabular_q_converges_on_two_state_mdp():
    # synthetic MDP: s0/s1, two actions. a1 is optimal everywhere:
    # s0 --a0--> s0 (+1), s0 --a1--> s1 (+0), s1 --a0--> s0 (+0),
    # s1 --a1--> s1 (+2). gamma=0.9 -> V = (18, 20), greedy = a1, a1.
    space = {"type": "discrete", "levels": 2, "dimension": 1,
             "cells": DISCRETE_SPACE["cells"]}
    policy = TabularQPolicy(space, np.random.default_rng(4),
                            QConfig(learning_rate=0.1, gamma=0.9, epsilon=0.0))
    transitions = {
        ("s0", 0): (1.0, "s0"),
        ("s0", 1): (0.0, "s1"),
        ("s1", 0): (0.0, "s0"),
        ("s1", 1): (2.0, "s1"),
    }
    rng = np.random.default_rng(5)
    for _ in range(10_000):
        state = "s0" if rng.random() < 0.5 else "s1"
        action = int(rng.integers(0, 2))
        reward, nxt = transitions[(state, action)]
        policy.update(state, action, reward, nxt, terminal=False)
    assert policy.greedy_action_index("s0") == 1
    assert policy.greedy_action_index("s1") == 1
    # learned values approach the fixed point
    assert policy.q_table["s1"][1] == pytest.approx(20.0, abs=0.5)
    assert policy.q_table["s0"][1] == pytest.approx(18.0, abs=0.5)


def test_q_update_on_environment_observations():
    env = PricingEnv(preset("business"), action_mode="discrete")
    obs = env.reset(seed=0)
    policy = TabularQPolicy(env.action_space("agent_1"), np.random.default_rng(6),
                            QConfig(epsilon=0.5))
    action = policy.act(obs["agent_1"])
    result = env.step({
        "agent_1": action,
        "agent_2": [5, 5],
        "agent_3": [5, 5],
    })
    policy.observe_transition(obs["agent_1"], action, float(result.rewards["agent_1"]),
                              result.observations["agent_1"], result.terminal)
    assert policy.q_table  # one backed-up state


# -- policy distribution logging ----------------------------------------------


def _trace(levels_per_step):
    return {
        "spaces": {"agent": DISCRETE_SPACE},
        "actions": [{"agent": [level]} for level in levels_per_step],
    }


def test_distribution_constant_no_change():
    log = log_policy_distribution([_trace([5, 5, 5, 5])])
    assert log["agent"]["X-Y"]["no_change"] == 1.0


def test_distribution_uniform_levels():
    log = log_policy_distribution([_trace(list(range(11)))])
    row = log["agent"]["X-Y"]
    assert row["max_reduction"] == pytest.approx(2 / 11)
    assert row["moderate_reduction"] == pytest.approx(3 / 11)
    assert row["no_change"] == pytest.approx(1 / 11)
    assert row["moderate_increase"] == pytest.approx(3 / 11)
    assert row["max_increase"] == pytest.approx(2 / 11)


def test_distribution_rows_sum_to_one():
    log = log_policy_distribution([_trace([0, 3, 5, 7, 10, 10, 2])])
    assert sum(log["agent"]["X-Y"].values()) == pytest.approx(1.0, abs=1e-9)


def test_distribution_empty_traces():
    with pytest.raises(EmptyTraceError):
        log_policy_distribution([])
    with pytest.raises(EmptyTraceError):
        log_policy_distribution([{"spaces": {"agent": DISCRETE_SPACE}, "actions": []}])
