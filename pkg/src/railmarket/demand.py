"""Daily passenger demand: market volumes, passenger types, travel dates.

Sampling is a pure function of (scenario, day, rng state): markets are
visited in declaration order and each passenger consumes a fixed number of
draws, so a given seed always reproduces the same passenger list.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import MarketDemandSpec, Scenario


@dataclass(frozen=True)
class Passenger:
    passenger_id: str
    type_id: str
    market: tuple[str, str]
    desired_travel_date: int
    purchase_day: int
    preferred_departure: int
    preferred_arrival: int


def _day_type_probs(scenario: Scenario, market: MarketDemandSpec, day: int) -> tuple[list[str], np.ndarray]:
    """Per-type probabilities for a booking day.

    In single-terminal-date mode each type's mixture share is reweighted by
    its purchase-anticipation mass for this day of the booking horizon
    (uniform anticipation leaves the mixture untouched). If every type has
    zero mass for the day, the raw mixture applies.
    """
    type_ids = list(market.type_mixture.keys())
    base = np.array([market.type_mixture[t] for t in type_ids])
    if scenario.episode.travel_date_mode != "single-terminal-date":
        return type_ids, base / base.sum()
    horizon = scenario.episode.horizon_days
    day_w = np.array([
        scenario.type_by_id(t).purchase_anticipation.day_weights(horizon)[day - 1]
        for t in type_ids
    ])
    weighted = base * day_w
    total = weighted.sum()
    if total <= 0.0:
        return type_ids, base / base.sum()
    return type_ids, weighted / total


def sample_daily_demand(scenario: Scenario, day: int, rng: np.random.Generator) -> list[Passenger]:
    """Generate the passengers purchasing on booking day ``day`` (1-based)."""
    if not 1 <= day <= scenario.episode.horizon_days:
        raise ValueError(f"day {day} outside booking horizon 1..{scenario.episode.horizon_days}")
    horizon = scenario.episode.horizon_days
    terminal_mode = scenario.episode.travel_date_mode == "single-terminal-date"
    passengers: list[Passenger] = []
    for market in scenario.markets:
        count = market.volume.sample(rng)
        if count <= 0:
            continue
        type_ids, probs = _day_type_probs(scenario, market, day)
        for i in range(count):
            type_id = type_ids[int(rng.choice(len(type_ids), p=probs))]
            ptype = scenario.type_by_id(type_id)
            if terminal_mode:
                travel_date = horizon + 1
            else:
                lag = ptype.purchase_anticipation.sample_days_before(rng, horizon)
                travel_date = min(day + lag, horizon)
            dep_lo, dep_hi = ptype.preferred_departure_window
            arr_lo, arr_hi = ptype.preferred_arrival_window
            preferred_departure = int(rng.integers(dep_lo, dep_hi + 1))
            preferred_arrival = int(rng.integers(arr_lo, arr_hi + 1))
            passengers.append(Passenger(
                passenger_id=f"d{day}-{market.origin}{market.destination}-{i}",
                type_id=type_id,
                market=market.market,
                desired_travel_date=travel_date,
                purchase_day=day,
                preferred_departure=preferred_departure,
                preferred_arrival=preferred_arrival,
            ))
    return passengers
