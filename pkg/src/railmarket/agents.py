"""Desk-scale baseline policies: random, scripted, and tabular Q-learning.

Every policy sees only its own agent's observation and action space. A
policy instance is bound to one environment stream; build separate
instances for parallel environments.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import EmptyTraceError, IncompatibleSpaceError

# Table-style bins over the 11 discrete levels (0-indexed):
# 0-1 max reduction, 2-4 moderate reduction, 5 no change,
# 6-8 moderate increase, 9-10 max increase.
BIN_LABELS = ("max_reduction", "moderate_reduction", "no_change",
              "moderate_increase", "max_increase")


def bin_of_level(level: int) -> str:
    if level <= 1:
        return "max_reduction"
    if level <= 4:
        return "moderate_reduction"
    if level == 5:
        return "no_change"
    if level <= 8:
        return "moderate_increase"
    return "max_increase"


class Policy:
    """Minimal per-agent policy interface used by the harness."""

    def act(self, observation: dict) -> list:
        raise NotImplementedError

    def begin_episode(self) -> None:
        pass

    def observe_transition(self, observation: dict, action: list, reward: float,
                           next_observation: dict, terminal: bool) -> None:
        pass


class RandomPolicy(Policy):
    """Uniform over the action space (continuous box or discrete levels)."""

    def __init__(self, action_space: dict, rng: np.random.Generator):
        self.space = action_space
        self.rng = rng

    def act(self, observation: dict) -> list:
        d = self.space["dimension"]
        if self.space["type"] == "discrete":
            return [int(v) for v in self.rng.integers(0, self.space["levels"], size=d)]
        return [float(v) for v in self.rng.uniform(self.space["low"], self.space["high"], size=d)]


class ScriptedPolicy(Policy):
    """Fixed action schedule from a small JSON spec.

    ``{"constant": v}`` plays v on every cell every day; ``{"per_day":
    [v0, v1, ...]}`` plays v_t on day t (0-based, clamped to the last
    entry). Values are alphas in continuous mode, levels in discrete mode.
    """

    def __init__(self, action_space: dict, spec: dict):
        self.space = action_space
        if not isinstance(spec, dict) or not ({"constant", "per_day"} & set(spec)):
            raise ValueError("scripted policy spec needs a 'constant' or 'per_day' key")
        self.spec = spec

    @classmethod
    def from_file(cls, action_space: dict, path: str) -> "ScriptedPolicy":
        with open(path) as fh:
            return cls(action_space, json.load(fh))

    def act(self, observation: dict) -> list:
        if "constant" in self.spec:
            value = self.spec["constant"]
        else:
            schedule = self.spec["per_day"]
            value = schedule[min(observation["day"], len(schedule) - 1)]
        if self.space["type"] == "discrete":
            return [int(value)] * self.space["dimension"]
        return [float(value)] * self.space["dimension"]


@dataclass
class QConfig:
    learning_rate: float = 0.2
    gamma: float = 0.95
    epsilon: float = 0.1
    price_bin_percent: float = 10.0  # digest bin width as % of initial price


class TabularQPolicy(Policy):
    """Independent epsilon-greedy Q-learner over the discrete joint action set.

    The state digest is (day, per-own-cell price bin): bins are
    ``price_bin_percent`` of the initial price wide, capped at +/-100%.
    Joint actions enumerate the 11 levels per cell, so this stays desk-scale
    (one or two priced cells per agent).
    """

    def __init__(self, action_space: dict, rng: np.random.Generator,
                 config: QConfig | None = None):
        if action_space["type"] != "discrete":
            raise IncompatibleSpaceError("tabular Q-learning needs the discrete action space")
        self.space = action_space
        self.rng = rng
        self.config = config or QConfig()
        self.actions = list(itertools.product(range(action_space["levels"]),
                                              repeat=action_space["dimension"]))
        self.q_table: dict[tuple, list[float]] = {}
        self._initial_prices: list[float] | None = None
        self._last: tuple[tuple, int] | None = None

    # -- digest ---------------------------------------------------------

    def _own_prices(self, observation: dict) -> list[float]:
        price_by_cell = {}
        for record in observation["services"]:
            for entry in record["prices"]:
                key = (record["service_id"], entry["origin"], entry["destination"],
                       entry["seat_class"])
                price_by_cell.setdefault(key, entry["price"])
        return [
            price_by_cell[(c["service_id"], c["origin"], c["destination"], c["seat_class"])]
            for c in self.space["cells"]
        ]

    def state_digest(self, observation: dict) -> tuple:
        prices = self._own_prices(observation)
        if self._initial_prices is None or observation["day"] == 0:
            self._initial_prices = prices
        bins = []
        for price, base in zip(prices, self._initial_prices):
            if base <= 0:
                bins.append(0)
                continue
            steps = 100.0 / self.config.price_bin_percent
            rel = (price / base - 1.0) * steps
            bins.append(int(np.clip(round(rel), -steps, steps)))
        return (observation["day"], tuple(bins))

    # -- acting and learning ---------------------------------------------

    def _q_values(self, digest: tuple) -> list[float]:
        if digest not in self.q_table:
            self.q_table[digest] = [0.0] * len(self.actions)
        return self.q_table[digest]

    def greedy_action_index(self, digest: tuple) -> int:
        values = self._q_values(digest)
        best = max(values)
        return values.index(best)  # lowest index wins ties

    def act(self, observation: dict) -> list:
        digest = self.state_digest(observation)
        if self.rng.random() < self.config.epsilon:
            index = int(self.rng.integers(0, len(self.actions)))
        else:
            index = self.greedy_action_index(digest)
        self._last = (digest, index)
        return list(self.actions[index])

    def observe_transition(self, observation: dict, action: list, reward: float,
                           next_observation: dict, terminal: bool) -> None:
        digest = self.state_digest(observation)
        index = self.actions.index(tuple(int(a) for a in action))
        self.update(digest, index, float(reward),
                    self.state_digest(next_observation), terminal)

    def update(self, digest: tuple, action_index: int, reward: float,
               next_digest: tuple, terminal: bool) -> None:
        """One Q-learning backup on (s, a, r, s')."""
        values = self._q_values(digest)
        target = reward
        if not terminal:
            target += self.config.gamma * max(self._q_values(next_digest))
        values[action_index] += self.config.learning_rate * (target - values[action_index])

    def begin_episode(self) -> None:
        self._last = None


def log_policy_distribution(traces: list[dict]) -> dict:
    """Empirical action-bin frequencies per agent and market.

    ``traces`` are discrete-mode episode traces as produced by the harness:
    each has an ``actions`` list (one {agent: [level, ...]} per step) and a
    ``spaces`` mapping with each agent's action descriptor. The 11 levels
    collapse into the five report bins.
    """
    if not traces:
        raise EmptyTraceError("no episode traces supplied")
    counts: dict[str, dict[str, dict[str, int]]] = {}
    saw_any = False
    for trace in traces:
        spaces = trace["spaces"]
        for step_actions in trace["actions"]:
            for agent, levels in step_actions.items():
                cells = spaces[agent]["cells"]
                for cell, level in zip(cells, levels):
                    market = f"{cell['origin']}-{cell['destination']}"
                    row = counts.setdefault(agent, {}).setdefault(
                        market, {label: 0 for label in BIN_LABELS})
                    row[bin_of_level(int(level))] += 1
                    saw_any = True
    if not saw_any:
        raise EmptyTraceError("traces contain no actions")
    result: dict[str, dict[str, dict[str, float]]] = {}
    for agent, markets in counts.items():
        result[agent] = {}
        for market, row in markets.items():
            total = sum(row.values())
            result[agent][market] = {label: row[label] / total for label in BIN_LABELS}
    return result
