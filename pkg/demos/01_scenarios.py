"""Tour of scenario documents: built-in presets, strict validation, round-trips.

A scenario is a single YAML document describing the railway network, the
operating agents, their services and prices, the passenger types, and the
per-market demand. Two presets ship with the package.
"""

from railmarket import load_scenario, preset, serialize_scenario
from railmarket.errors import ScenarioValidationError

for name in ("business", "business_student"):
    scenario = preset(name)
    print(f"== {name} ==")
    print(f"  horizon: {scenario.episode.horizon_days} days, "
          f"expected passengers: {scenario.episode.passengers_expected_total:.0f}")
    print(f"  stations: {', '.join(scenario.stations)}")
    for agent in scenario.agents:
        markets = []
        for sid in agent.operated_service_ids:
            svc = scenario.service_by_id(sid)
            markets += [f"{p.origin}-{p.destination}" for p in svc.initial_prices]
        print(f"  {agent.agent_id}: services {list(agent.operated_service_ids)}, "
              f"priced markets {sorted(set(markets))}")
    for ptype in scenario.passenger_types:
        print(f"  type {ptype.type_id}: price slope "
              f"{ptype.price_sensitivity.slope}, noise scale {ptype.noise.scale}")
    print()

# Serialisation round-trips exactly: the canonical document reparses to an
# equal Scenario.
business = preset("business")
assert load_scenario(serialize_scenario(business)) == business
print("serialize -> load round-trip: exact")

# Validation rejects broken documents with the offending key's path.
broken = serialize_scenario(business).replace("min_transfer_minutes: 5",
                                              "min_transfer_minutes: -1")
try:
    load_scenario(broken)
except ScenarioValidationError as err:
    print(f"negative transfer floor rejected: {err}")
