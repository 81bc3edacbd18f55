"""The multi-agent pricing game over one booking horizon.

Each step is one simulated day: agents' relative price updates are applied
first, then the day's passengers arrive, evaluate journeys at seat level,
and either buy tickets leg by leg (inventory mutates immediately, so later
passengers see updated availability) or opt out. Rewards are each agent's
exact day-over-day revenue delta in decimal currency.

An environment instance is a strictly serialised state machine; run one
reset/step at a time per instance. Independent instances may run in
parallel.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal

import numpy as np

from .choice import choose_journey
from .demand import Passenger, sample_daily_demand
from .errors import (
    AlreadyTerminalError,
    MalformedActionError,
    UnknownAgentError,
)
from .journeys import Journey, enumerate_journeys
from .scenario import Scenario
from .supply import DISCRETE_LEVELS, CellKey, SupplyState, discretize_action, sell_ticket


@dataclass(frozen=True)
class PassengerOutcome:
    passenger_id: str
    type_id: str
    market: tuple[str, str]
    travelled: bool
    utility: float | None
    spend: Decimal
    service_ids: tuple[str, ...]


@dataclass
class DayLog:
    day: int
    rewards: dict[str, Decimal]
    outcomes: list[PassengerOutcome]


@dataclass
class EpisodeLog:
    scenario_name: str
    agent_ids: tuple[str, ...]
    horizon_days: int
    days: list[DayLog] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return len(self.days) == self.horizon_days


@dataclass(frozen=True)
class StepResult:
    observations: dict[str, dict]
    rewards: dict[str, Decimal]
    terminal: bool
    info: dict


def discounted_return(rewards, gamma: float) -> float:
    """Discounted sum of a reward sequence: sum_l gamma^l * r_l."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must be in [0, 1], got {gamma}")
    total = 0.0
    weight = 1.0
    for r in rewards:
        total += weight * float(r)
        weight *= gamma
    return total


class PricingEnv:
    """Markov game: per-agent price actions, masked observations, profit rewards."""

    def __init__(self, scenario: Scenario, action_mode: str = "continuous"):
        if action_mode not in ("continuous", "discrete"):
            raise ValueError(f"action_mode must be continuous or discrete, got {action_mode!r}")
        self.scenario = scenario
        self.action_mode = action_mode
        self.agent_ids = scenario.agent_ids
        self.horizon = scenario.episode.horizon_days
        self.beta = scenario.episode.price_scaling_percent
        self.day = 0
        self.supply: SupplyState | None = None
        self.episode_log: EpisodeLog | None = None
        self._rng_demand: np.random.Generator | None = None
        self._rng_choice: np.random.Generator | None = None
        self._profit_prev: dict[str, Decimal] = {}
        self._journey_cache: dict[tuple[tuple[str, str], int], list[Journey]] = {}
        self._static = _StaticIndices(scenario)
        self._agent_cells = {a: _cells_of_agent(scenario, a) for a in self.agent_ids}

    # -- lifecycle ----------------------------------------------------------

    @property
    def terminal(self) -> bool:
        return self.day >= self.horizon

    def reset(self, seed: int | None = None) -> dict[str, dict]:
        """Start a new episode; returns the per-agent initial observations.

        With an integer seed the rng streams are derived deterministically
        from it; with ``seed=None`` the previous episode's streams continue
        (the instance must have been seeded once before).
        """
        if seed is not None:
            children = np.random.SeedSequence(seed).spawn(2)
            self._rng_demand = np.random.Generator(np.random.PCG64(children[0]))
            self._rng_choice = np.random.Generator(np.random.PCG64(children[1]))
        elif self._rng_demand is None:
            raise ValueError("first reset() of an instance needs an integer seed")
        self.day = 0
        self.supply = SupplyState(self.scenario)
        self._journey_cache.clear()
        self._profit_prev = {a: Decimal("0.00") for a in self.agent_ids}
        self.episode_log = EpisodeLog(scenario_name=self.scenario.name,
                                      agent_ids=self.agent_ids,
                                      horizon_days=self.horizon)
        return self.observations()

    def step(self, joint_action: dict) -> StepResult:
        """Advance one day with one price action per agent."""
        if self.supply is None:
            raise ValueError("reset() must be called before step()")
        if self.terminal:
            raise AlreadyTerminalError(f"episode ended at day {self.day}")
        alphas = self._validate_joint_action(joint_action)
        for agent_id in self.agent_ids:
            self.supply.apply_price_action(agent_id, alphas[agent_id], self.beta)

        self.day += 1
        passengers = sample_daily_demand(self.scenario, self.day, self._rng_demand)

        outcomes: list[PassengerOutcome] = []
        tickets_by_agent = {a: 0 for a in self.agent_ids}
        for passenger in passengers:
            outcome = self._process_passenger(passenger, tickets_by_agent)
            outcomes.append(outcome)

        rewards: dict[str, Decimal] = {}
        for agent_id in self.agent_ids:
            revenue = self.supply.agent_revenue(agent_id)
            rewards[agent_id] = revenue - self._profit_prev[agent_id]
            self._profit_prev[agent_id] = revenue

        self.episode_log.days.append(DayLog(day=self.day, rewards=dict(rewards),
                                            outcomes=outcomes))
        travelled = sum(1 for o in outcomes if o.travelled)
        per_type: dict[str, dict[str, int]] = {}
        for o in outcomes:
            slot = per_type.setdefault(o.type_id, {"generated": 0, "travelled": 0})
            slot["generated"] += 1
            slot["travelled"] += int(o.travelled)
        info = {
            "day": self.day,
            "passengers_generated": len(outcomes),
            "passengers_travelled": travelled,
            "passengers_opted_out": len(outcomes) - travelled,
            "tickets_sold": tickets_by_agent,
            "per_type": per_type,
        }
        return StepResult(observations=self.observations(), rewards=rewards,
                          terminal=self.terminal, info=info)

    def _process_passenger(self, passenger: Passenger,
                           tickets_by_agent: dict[str, int]) -> PassengerOutcome:
        candidates = self._candidates(passenger.market, passenger.desired_travel_date)
        ptype = self.scenario.type_by_id(passenger.type_id)
        choice = choose_journey(passenger, ptype, candidates, self.day, self._rng_choice)
        if not choice.travelled:
            return PassengerOutcome(
                passenger_id=passenger.passenger_id, type_id=passenger.type_id,
                market=passenger.market, travelled=False, utility=None,
                spend=Decimal("0.00"), service_ids=())
        spend = Decimal("0.00")
        for leg, seat_class in zip(choice.journey.legs, choice.seats):
            price = sell_ticket(leg.instance, leg.board, leg.alight, seat_class)
            self.supply.record_sale(self.day, leg.instance,
                                    (leg.board, leg.alight, seat_class), price)
            tickets_by_agent[leg.instance.operator] += 1
            spend += price
        return PassengerOutcome(
            passenger_id=passenger.passenger_id, type_id=passenger.type_id,
            market=passenger.market, travelled=True, utility=choice.utility.total,
            spend=spend,
            service_ids=tuple(leg.instance.instance_id for leg in choice.journey.legs))

    def _candidates(self, market: tuple[str, str], travel_date: int) -> list[Journey]:
        key = (market, travel_date)
        if key not in self._journey_cache:
            self._journey_cache[key] = enumerate_journeys(
                self.supply, market, travel_date,
                self.scenario.min_transfer_minutes,
                self.scenario.episode.max_transfers)
        return self._journey_cache[key]

    # -- actions ------------------------------------------------------------

    def _validate_joint_action(self, joint_action: dict) -> dict[str, dict[tuple[str, CellKey], float]]:
        if not isinstance(joint_action, dict):
            raise MalformedActionError("joint action must map agent id -> action vector")
        missing = [a for a in self.agent_ids if a not in joint_action]
        extra = [a for a in joint_action if a not in self.agent_ids]
        if missing or extra:
            raise MalformedActionError(
                f"joint action agent set mismatch: missing {missing}, unexpected {extra}")
        out: dict[str, dict[tuple[str, CellKey], float]] = {}
        for agent_id in self.agent_ids:
            cells = self._agent_cells[agent_id]
            vector = joint_action[agent_id]
            try:
                values = list(vector)
            except TypeError:
                raise MalformedActionError(
                    f"action of {agent_id!r} must be a sequence, got {vector!r}") from None
            if len(values) != len(cells):
                raise MalformedActionError(
                    f"action of {agent_id!r} has length {len(values)}, expected {len(cells)}")
            alphas: dict[tuple[str, CellKey], float] = {}
            for cell, value in zip(cells, values):
                if self.action_mode == "discrete":
                    level = int(value)
                    if isinstance(value, float) and not value.is_integer():
                        raise MalformedActionError(
                            f"discrete action of {agent_id!r} must be integer levels, got {value!r}")
                    if not 0 <= level < DISCRETE_LEVELS:
                        raise MalformedActionError(
                            f"discrete level {level} of {agent_id!r} outside [0, 10]")
                    alpha = discretize_action(level)
                else:
                    alpha = float(value)
                    if not -1.0 <= alpha <= 1.0:
                        raise MalformedActionError(
                            f"alpha {alpha} of {agent_id!r} outside [-1, 1]")
                alphas[cell] = alpha
            out[agent_id] = alphas
        return out

    def action_space(self, agent_id: str) -> dict:
        """Stable action descriptor: one component per priced cell of the agent."""
        self._check_agent(agent_id)
        cells = [
            {"service_id": sid, "origin": c[0], "destination": c[1], "seat_class": c[2]}
            for sid, c in self._agent_cells[agent_id]
        ]
        if self.action_mode == "discrete":
            return {"type": "discrete", "levels": DISCRETE_LEVELS,
                    "dimension": len(cells), "cells": cells}
        return {"type": "continuous", "low": -1.0, "high": 1.0,
                "dimension": len(cells), "cells": cells}

    def observation_space(self, agent_id: str) -> dict:
        self._check_agent(agent_id)
        owned = [s.service_id for s in self.scenario.services if s.operator == agent_id]
        return {
            "day_range": [0, self.horizon],
            "fields": {
                "static": ["operator", "corridor", "line", "time_slot", "rolling_stock"],
                "public_dynamic": ["prices"],
                "private_dynamic": ["tickets_sold"],
            },
            "services": [s.service_id for s in self.scenario.services],
            "owned_services": owned,
            "travel_date_mode": self.scenario.episode.travel_date_mode,
        }

    def _check_agent(self, agent_id: str) -> None:
        if agent_id not in self.agent_ids:
            raise UnknownAgentError(f"unknown agent {agent_id!r}")

    # -- observations -------------------------------------------------------

    def observations(self) -> dict[str, dict]:
        """Per-agent masked views of the current state."""
        return {agent_id: self._observe(agent_id) for agent_id in self.agent_ids}

    def _observe(self, agent_id: str) -> dict:
        services = []
        for template in self.scenario.services:
            for inst in sorted(self.supply.instances_of_template(template.service_id),
                               key=lambda i: i.travel_date):
                record = {
                    "service_id": inst.service_id,
                    "travel_date": inst.travel_date,
                    "operator": self._static.operator_index[inst.operator],
                    "corridor": self._static.corridor_index_of_service[inst.service_id],
                    "line": self._static.line_index_of_service[inst.service_id],
                    "time_slot": inst.stop_times[0] // self.scenario.episode.time_slot_minutes,
                    "rolling_stock": self._static.rolling_stock_index[inst.service_id],
                    "prices": [
                        {"origin": o, "destination": d, "seat_class": s,
                         "price": float(cell.price)}
                        for (o, d, s), cell in inst.cells.items()
                    ],
                }
                if inst.operator == agent_id:
                    record["tickets_sold"] = [
                        {"origin": o, "destination": d, "seat_class": s,
                         "sold": cell.tickets_sold}
                        for (o, d, s), cell in inst.cells.items()
                    ]
                services.append(record)
        return {"agent_id": agent_id, "day": self.day, "services": services}

    # -- accounting ---------------------------------------------------------

    def agent_profit(self, agent_id: str) -> Decimal:
        self._check_agent(agent_id)
        if self.supply is None:
            return Decimal("0.00")
        return self.supply.agent_revenue(agent_id)


def _cells_of_agent(scenario: Scenario, agent_id: str) -> list[tuple[str, CellKey]]:
    out = []
    for template in scenario.services:
        if template.operator != agent_id:
            continue
        for p in template.initial_prices:
            out.append((template.service_id, (p.origin, p.destination, p.seat_class)))
    return out


class _StaticIndices:
    """Integer encodings of the static service attributes."""

    def __init__(self, scenario: Scenario):
        self.operator_index = {a: i for i, a in enumerate(scenario.agent_ids)}
        corridor_index = {c.corridor_id: i for i, c in enumerate(scenario.corridors)}
        line_index = {l.line_id: i for i, l in enumerate(scenario.lines)}
        self.corridor_index_of_service = {}
        self.line_index_of_service = {}
        self.rolling_stock_index = {}
        stock_registry: dict[tuple, int] = {}
        for s in scenario.services:
            line = scenario.line_by_id(s.line)
            self.corridor_index_of_service[s.service_id] = corridor_index[line.corridor]
            self.line_index_of_service[s.service_id] = line_index[s.line]
            signature = tuple(sorted((seat.seat_class, seat.capacity) for seat in s.seats))
            if signature not in stock_registry:
                stock_registry[signature] = len(stock_registry)
            self.rolling_stock_index[s.service_id] = stock_registry[signature]
