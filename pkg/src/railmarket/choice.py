"""Passenger choice: seat-level screening, journey utility, argmax-or-opt-out.

Utility of a journey for a passenger: per-operator affinity and seat utility
(averaged over legs), minus penalties for arrival/departure time deviation,
summed ticket price, travel time, transfer time and transfer count, plus one
noise draw. A journey with any sold-out leg has utility -inf. The passenger
travels only if the best utility is strictly positive.

Draw discipline (fixed for determinism): journeys are evaluated in candidate
order; within a journey, legs in order and seat classes in declared order;
one screening draw per available seat cell, then one journey draw if every
leg has an available seat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal

import numpy as np

from .demand import Passenger
from .journeys import Journey, Leg, n_transfers, total_transfer_time, total_travel_time
from .scenario import PassengerType


@dataclass(frozen=True)
class UtilityBreakdown:
    tsp_term: float
    seat_term: float
    arrival_penalty: float
    departure_penalty: float
    price_penalty: float
    travel_time_penalty: float
    transfer_time_penalty: float
    transfer_count_penalty: float
    noise: float
    total: float

    @classmethod
    def infeasible(cls) -> "UtilityBreakdown":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -math.inf)


@dataclass(frozen=True)
class Choice:
    """Outcome of a passenger's decision; ``journey is None`` means no travel."""

    journey: Journey | None
    seats: tuple[str, ...] | None
    utility: UtilityBreakdown | None

    @property
    def travelled(self) -> bool:
        return self.journey is not None


NO_TRAVEL = Choice(journey=None, seats=None, utility=None)


def seat_screening_utility(ptype: PassengerType, leg: Leg, seat_class: str,
                           rng: np.random.Generator) -> float:
    """Seat-level screening value: seat utility plus noise, -inf if sold out.

    Consumes one draw only when the cell has tickets available.
    """
    if not leg.instance.cell(leg.board, leg.alight, seat_class).available:
        return -math.inf
    return ptype.seat_utility[seat_class] + ptype.noise.sample(rng)


def screen_seats(ptype: PassengerType, journey: Journey,
                 rng: np.random.Generator) -> tuple[str, ...] | None:
    """Pick the best seat class per leg; None if some leg has no seat left."""
    chosen: list[str | None] = []
    for leg in journey.legs:
        best_seat, best_value = None, -math.inf
        for seat_class in leg.instance.seat_classes_for(leg.board, leg.alight):
            value = seat_screening_utility(ptype, leg, seat_class, rng)
            if value > best_value:
                best_seat, best_value = seat_class, value
        chosen.append(best_seat)
    if any(seat is None for seat in chosen):
        return None
    return tuple(chosen)  # type: ignore[arg-type]


def journey_utility(passenger: Passenger, ptype: PassengerType, journey: Journey,
                    chosen_seats: tuple[str, ...] | None, day: int,
                    rng: np.random.Generator) -> UtilityBreakdown:
    """Full utility of a journey with one chosen seat per leg.

    ``chosen_seats is None`` marks an infeasible journey (sold-out leg):
    the result is -inf and no draw is consumed. Prices are read from the
    live cells, i.e. at their purchase-day values.
    """
    if chosen_seats is None:
        return UtilityBreakdown.infeasible()
    legs = journey.legs
    tsp = sum(ptype.operator_affinity[leg.instance.operator] for leg in legs) / len(legs)
    seat = sum(ptype.seat_utility[s] for s in chosen_seats) / len(legs)
    total_price = sum(
        (leg.instance.cell(leg.board, leg.alight, s).price for leg, s in zip(legs, chosen_seats)),
        start=Decimal(0))
    arrival_dev = abs(journey.arrival - passenger.preferred_arrival)
    departure_dev = abs(journey.departure - passenger.preferred_departure)
    f = ptype.arrival_penalty(arrival_dev)
    r = ptype.departure_penalty(departure_dev)
    g = ptype.price_sensitivity(float(total_price))
    h = ptype.travel_time_penalty(total_travel_time(journey))
    tau = ptype.transfer_time_penalty(total_transfer_time(journey))
    ell = ptype.transfer_count_penalty * n_transfers(journey)
    noise = ptype.noise.sample(rng)
    total = tsp + seat - f - r - g - h - tau - ell + noise
    return UtilityBreakdown(
        tsp_term=tsp, seat_term=seat, arrival_penalty=f, departure_penalty=r,
        price_penalty=g, travel_time_penalty=h, transfer_time_penalty=tau,
        transfer_count_penalty=ell, noise=noise, total=total)


def choose_journey(passenger: Passenger, ptype: PassengerType,
                   candidate_journeys: list[Journey], day: int,
                   rng: np.random.Generator) -> Choice:
    """Utility-maximising journey, or no travel if the best utility is <= 0.

    Ties break to the first candidate in enumeration order. Inventory is not
    mutated here; purchasing happens in the environment step.
    """
    best: Choice | None = None
    for journey in candidate_journeys:
        seats = screen_seats(ptype, journey, rng)
        breakdown = journey_utility(passenger, ptype, journey, seats, day, rng)
        if math.isinf(breakdown.total):
            continue
        if best is None or breakdown.total > best.utility.total:
            best = Choice(journey=journey, seats=seats, utility=breakdown)
    if best is None or best.utility.total <= 0.0:
        return NO_TRAVEL
    return best
