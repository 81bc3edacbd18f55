"""Journey enumeration and structure metrics.

A journey is an ordered sequence of service legs connecting a market on a
travel date. A leg is one (service instance, boarding station, alighting
station) triple drawn from the instance's priced cells; seat classes are
chosen later by the choice model.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .errors import UnknownMarketError
from .supply import ServiceInstance, SupplyState

# Validity verdicts
VALID = "valid"
NO_LEGS = "no_legs"
WRONG_ORIGIN = "wrong_origin"
WRONG_DESTINATION = "wrong_destination"
DISCONNECTED = "disconnected"
TRANSFER_TOO_SHORT = "transfer_too_short"


@dataclass(frozen=True)
class Leg:
    instance: ServiceInstance
    board: str
    alight: str

    @property
    def departure(self) -> int:
        return self.instance.stop_time(self.board)

    @property
    def arrival(self) -> int:
        return self.instance.stop_time(self.alight)

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.instance.instance_id, self.board, self.alight)


@dataclass(frozen=True)
class Journey:
    legs: tuple[Leg, ...]
    market: tuple[str, str]
    travel_date: int

    @property
    def departure(self) -> int:
        return self.legs[0].departure

    @property
    def arrival(self) -> int:
        return self.legs[-1].arrival

    @property
    def key(self) -> tuple:
        return tuple(leg.key for leg in self.legs)

    def sort_key(self) -> tuple:
        return (self.departure, len(self.legs),
                tuple(leg.instance.instance_id for leg in self.legs),
                tuple((leg.board, leg.alight) for leg in self.legs))


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    reason: str
    detail: str = ""


def validate_journey(journey: Journey, min_transfer_minutes: int) -> ValidityReport:
    """Classify a candidate journey against the validity rules.

    Check order: origin, leg connectivity, transfer gaps, destination; the
    first violated rule is reported.
    """
    origin, destination = journey.market
    if not journey.legs:
        return ValidityReport(False, NO_LEGS)
    if journey.legs[0].board != origin:
        return ValidityReport(False, WRONG_ORIGIN,
                              f"first boarding {journey.legs[0].board!r} != {origin!r}")
    for prev, nxt in zip(journey.legs, journey.legs[1:]):
        if prev.alight != nxt.board:
            return ValidityReport(False, DISCONNECTED,
                                  f"alight {prev.alight!r} then board {nxt.board!r}")
        gap = nxt.departure - prev.arrival
        if gap < min_transfer_minutes:
            return ValidityReport(
                False, TRANSFER_TOO_SHORT,
                f"transfer gap {gap} min at {nxt.board!r} < minimum {min_transfer_minutes}")
    if journey.legs[-1].alight != destination:
        return ValidityReport(False, WRONG_DESTINATION,
                              f"last alighting {journey.legs[-1].alight!r} != {destination!r}")
    return ValidityReport(True, VALID)


def n_transfers(journey: Journey) -> int:
    """Number of service changes: leg count minus one."""
    return len(journey.legs) - 1


def total_transfer_time(journey: Journey) -> int:
    """Cumulative minutes spent waiting between consecutive legs."""
    return sum(nxt.departure - prev.arrival
               for prev, nxt in zip(journey.legs, journey.legs[1:]))


def total_travel_time(journey: Journey) -> int:
    """Minutes from first departure to last arrival."""
    return journey.arrival - journey.departure


def legs_on_date(supply: SupplyState, travel_date: int) -> list[Leg]:
    """All bookable legs on a travel date, in deterministic order."""
    legs = []
    for inst in sorted(supply.instances_on(travel_date), key=lambda i: i.instance_id):
        pairs = sorted({(c[0], c[1]) for c in inst.cells})
        for origin, destination in pairs:
            legs.append(Leg(instance=inst, board=origin, alight=destination))
    return legs


def enumerate_journeys(supply: SupplyState, market: tuple[str, str], travel_date: int,
                       min_transfer_minutes: int, max_transfers: int) -> list[Journey]:
    """Exactly the valid journeys with at most ``max_transfers`` transfers.

    Result order is deterministic: by departure time, then leg count, then
    service ids (boarding/alighting stations as the final tie-break).
    """
    origin, destination = market
    stations = set(supply.scenario.stations)
    if origin not in stations or destination not in stations:
        raise UnknownMarketError(f"unknown market ({origin!r}, {destination!r})")

    by_board: dict[str, list[Leg]] = defaultdict(list)
    for leg in legs_on_date(supply, travel_date):
        by_board[leg.board].append(leg)

    max_legs = max_transfers + 1
    results: dict[tuple, Journey] = {}

    def extend(path: list[Leg]) -> None:
        last = path[-1]
        if last.alight == destination:
            journey = Journey(tuple(path), market, travel_date)
            results.setdefault(journey.key, journey)
        if len(path) == max_legs:
            return
        for leg in by_board[last.alight]:
            if leg.departure - last.arrival >= min_transfer_minutes:
                path.append(leg)
                extend(path)
                path.pop()

    for leg in by_board[origin]:
        extend([leg])

    return sorted(results.values(), key=Journey.sort_key)
