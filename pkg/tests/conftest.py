"""Shared fixtures: hand-built micro scenarios and the journey golden set."""

from __future__ import annotations

import pytest
import yaml

from railmarket import load_scenario
from railmarket.supply import SupplyState


def make_scenario_doc(
    *,
    name="micro",
    stations=("X", "Y"),
    corridor_stations=None,
    services=None,
    agents=None,
    passenger_types=None,
    markets=None,
    horizon_days=1,
    travel_date_mode="single-terminal-date",
    min_transfer_minutes=5,
    max_transfers=2,
    price_scaling_percent=25.0,
) -> dict:
    """Scenario document with defaults for a single service X->Y at 50.00."""
    corridor_stations = list(corridor_stations or stations)
    if services is None:
        services = [{
            "id": "svc", "operator": "op", "line": "ln",
            "_stops": [stations[0], stations[1]],
            "stop_times": ["08:00", "09:00"],
            "seats": [{"class": "standard", "capacity": 100}],
            "prices": [{"origin": stations[0], "destination": stations[1],
                        "class": "standard", "price": "50.00"}],
        }]
    lines = []
    seen = set()
    for svc in services:
        if svc["line"] not in seen:
            seen.add(svc["line"])
            lines.append({"id": svc["line"], "corridor": "c0", "stops": svc.get("_stops")})
    if agents is None:
        agents = [{"id": "op", "services": [s["id"] for s in services]}]
    if passenger_types is None:
        passenger_types = [default_type("rider", {a["id"]: 10.0 for a in agents})]
    if markets is None:
        markets = [{
            "origin": stations[0], "destination": stations[1],
            "daily_volume": {"distribution": "constant", "value": 1},
            "type_mixture": {passenger_types[0]["id"]: 1.0},
        }]
    expected = horizon_days * sum(
        m["daily_volume"].get("mean", m["daily_volume"].get("value", 0)) for m in markets)
    services = [dict(s) for s in services]
    for s in services:
        s.pop("_stops", None)
    return {
        "schema_version": 1,
        "name": name,
        "min_transfer_minutes": min_transfer_minutes,
        "stations": list(stations),
        "corridors": [{"id": "c0", "stations": corridor_stations}],
        "lines": lines,
        "agents": agents,
        "services": services,
        "passenger_types": passenger_types,
        "markets": markets,
        "episode": {
            "horizon_days": horizon_days,
            "travel_date_mode": travel_date_mode,
            "passengers_expected_total": float(expected),
            "time_slot_minutes": 60,
            "price_scaling_percent": price_scaling_percent,
            "max_transfers": max_transfers,
        },
    }


def default_type(type_id, affinity, *, seat=0.5, price_slope=0.05, noise_scale=0.5,
                 arrival_slope=0.0, departure_slope=0.0, travel_slope=0.0,
                 transfer_slope=0.0, per_transfer=0.0, anticipation=None):
    spec = {
        "id": type_id,
        "operator_affinity": dict(affinity),
        "seat_utility": {"standard": seat},
        "arrival_penalty": {"form": "linear", "slope": arrival_slope},
        "departure_penalty": {"form": "linear", "slope": departure_slope},
        "price_sensitivity": {"form": "linear", "slope": price_slope},
        "travel_time_penalty": {"form": "linear", "slope": travel_slope},
        "transfer_time_penalty": {"form": "linear", "slope": transfer_slope},
        "transfer_count_penalty": {"per_transfer": per_transfer},
        "noise": {"distribution": "gumbel", "scale": noise_scale},
    }
    if anticipation is not None:
        spec["purchase_anticipation"] = anticipation
    return spec


def scenario_from_doc(doc: dict):
    return load_scenario(yaml.safe_dump(doc, sort_keys=False))


def simple_service(service_id, operator, line, stops, times, price, capacity=100):
    return {
        "id": service_id, "operator": operator, "line": line, "_stops": list(stops),
        "stop_times": list(times),
        "seats": [{"class": "standard", "capacity": capacity}],
        "prices": [{"origin": stops[0], "destination": stops[-1],
                    "class": "standard", "price": price}],
    }


@pytest.fixture
def golden_supply():
    """The eight services of the valid/invalid journey examples (A-C market,
    minimum transfer 5 minutes): s1 A-C direct, s2+s3 a clean 15-minute
    connection, s4+s5 ending at the wrong station, s6+s7+s8 with a
    zero-minute transfer."""
    services = [
        simple_service("s1", "op", "l_ac", ["A", "C"], ["08:00", "09:00"], "50.00"),
        simple_service("s2", "op", "l_ab1", ["A", "B"], ["08:00", "08:45"], "30.00"),
        simple_service("s3", "op", "l_bc", ["B", "C"], ["09:00", "09:30"], "25.00"),
        simple_service("s4", "op", "l_ab2", ["A", "B"], ["08:00", "08:50"], "30.00"),
        simple_service("s5", "op", "l_bd1", ["B", "D"], ["09:00", "09:25"], "20.00"),
        simple_service("s6", "op", "l_ab3", ["A", "B"], ["08:00", "08:30"], "30.00"),
        simple_service("s7", "op", "l_bd2", ["B", "D"], ["08:50", "09:15"], "20.00"),
        simple_service("s8", "op", "l_dc", ["D", "C"], ["09:15", "09:45"], "20.00"),
    ]
    doc = make_scenario_doc(
        name="golden",
        stations=("A", "B", "D", "C"),
        services=services,
        markets=[{
            "origin": "A", "destination": "C",
            "daily_volume": {"distribution": "constant", "value": 1},
            "type_mixture": {"rider": 1.0},
        }],
        passenger_types=[default_type("rider", {"op": 10.0})],
        min_transfer_minutes=5,
    )
    scenario = scenario_from_doc(doc)
    return SupplyState(scenario)


def leg_of(supply: SupplyState, service_id: str, board: str, alight: str, date: int = 2):
    from railmarket.journeys import Leg
    return Leg(instance=supply.instances[f"{service_id}@{date}"], board=board, alight=alight)
