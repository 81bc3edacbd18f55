"""Journey enumeration and validity on a small hand-written network.

Eight services around stations A, B, C, D; the A-C market is reachable
directly, via a clean connection, and via two itineraries that violate the
rules (wrong final station; a zero-minute transfer below the 5-minute
floor).
"""

from railmarket import enumerate_journeys, load_scenario, n_transfers, validate_journey
from railmarket.journeys import Journey, Leg, total_transfer_time, total_travel_time
from railmarket.supply import SupplyState

DOCUMENT = """
schema_version: 1
name: journey-demo
min_transfer_minutes: 5
stations: [A, B, D, C]
corridors:
  - {id: main, stations: [A, B, D, C]}
lines:
  - {id: l_ac,  corridor: main, stops: [A, C]}
  - {id: l_ab1, corridor: main, stops: [A, B]}
  - {id: l_bc,  corridor: main, stops: [B, C]}
  - {id: l_ab2, corridor: main, stops: [A, B]}
  - {id: l_bd1, corridor: main, stops: [B, D]}
  - {id: l_ab3, corridor: main, stops: [A, B]}
  - {id: l_bd2, corridor: main, stops: [B, D]}
  - {id: l_dc,  corridor: main, stops: [D, C]}
agents:
  - {id: op, services: [s1, s2, s3, s4, s5, s6, s7, s8]}
services:
  - {id: s1, operator: op, line: l_ac,  stop_times: ["08:00", "09:00"],
     seats: [{class: standard, capacity: 50}],
     prices: [{origin: A, destination: C, class: standard, price: "50.00"}]}
  - {id: s2, operator: op, line: l_ab1, stop_times: ["08:00", "08:45"],
     seats: [{class: standard, capacity: 50}],
     prices: [{origin: A, destination: B, class: standard, price: "30.00"}]}
  - {id: s3, operator: op, line: l_bc,  stop_times: ["09:00", "09:30"],
     seats: [{class: standard, capacity: 50}],
     prices: [{origin: B, destination: C, class: standard, price: "25.00"}]}
  - {id: s4, operator: op, line: l_ab2, stop_times: ["08:00", "08:50"],
     seats: [{class: standard, capacity: 50}],
     prices: [{origin: A, destination: B, class: standard, price: "30.00"}]}
  - {id: s5, operator: op, line: l_bd1, stop_times: ["09:00", "09:25"],
     seats: [{class: standard, capacity: 50}],
     prices: [{origin: B, destination: D, class: standard, price: "20.00"}]}
  - {id: s6, operator: op, line: l_ab3, stop_times: ["08:00", "08:30"],
     seats: [{class: standard, capacity: 50}],
     prices: [{origin: A, destination: B, class: standard, price: "30.00"}]}
  - {id: s7, operator: op, line: l_bd2, stop_times: ["08:50", "09:15"],
     seats: [{class: standard, capacity: 50}],
     prices: [{origin: B, destination: D, class: standard, price: "20.00"}]}
  - {id: s8, operator: op, line: l_dc,  stop_times: ["09:15", "09:45"],
     seats: [{class: standard, capacity: 50}],
     prices: [{origin: D, destination: C, class: standard, price: "20.00"}]}
passenger_types:
  - id: rider
    operator_affinity: {op: 10.0}
    seat_utility: {standard: 0.5}
    arrival_penalty: {form: linear, slope: 0.0}
    departure_penalty: {form: linear, slope: 0.0}
    price_sensitivity: {form: linear, slope: 0.05}
    travel_time_penalty: {form: linear, slope: 0.01}
    transfer_time_penalty: {form: linear, slope: 0.01}
    transfer_count_penalty: {per_transfer: 0.3}
    noise: {distribution: gumbel, scale: 0.5}
markets:
  - origin: A
    destination: C
    daily_volume: {distribution: poisson, mean: 1.0}
    type_mixture: {rider: 1.0}
episode:
  horizon_days: 1
  passengers_expected_total: 1.0
"""

supply = SupplyState(load_scenario(DOCUMENT))

print("enumerated valid journeys for market A-C (travel date 2):")
for journey in enumerate_journeys(supply, ("A", "C"), 2, 5, 2):
    legs = " + ".join(f"{l.instance.service_id}[{l.board}->{l.alight}]"
                      for l in journey.legs)
    print(f"  {legs:<46} transfers={n_transfers(journey)} "
          f"transfer_time={total_transfer_time(journey):>2} min "
          f"travel_time={total_travel_time(journey)} min")

print("\nrejected itineraries and why:")


def candidate(spec):
    legs = tuple(Leg(supply.instances[f"{sid}@2"], b, a) for sid, b, a in spec)
    return Journey(legs=legs, market=("A", "C"), travel_date=2)


for label, spec in (
    ("s4 + s5 (ends at D)", [("s4", "A", "B"), ("s5", "B", "D")]),
    ("s6 + s7 + s8 (0-minute transfer at D)",
     [("s6", "A", "B"), ("s7", "B", "D"), ("s8", "D", "C")]),
):
    report = validate_journey(candidate(spec), 5)
    print(f"  {label}: {report.reason} -- {report.detail}")
