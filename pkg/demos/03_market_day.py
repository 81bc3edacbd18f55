"""One market day under the hood: demand sampling, utilities, choices.

Samples the first booking day of the business & student scenario and walks
one passenger through journey evaluation: candidate journeys, utility
breakdowns, and the final choice (or opt-out).
"""

import numpy as np

from railmarket import choose_journey, enumerate_journeys, preset, sample_daily_demand
from railmarket.choice import journey_utility, screen_seats
from railmarket.scenario import format_clock
from railmarket.supply import SupplyState

scenario = preset("business_student")
supply = SupplyState(scenario)
rng = np.random.default_rng(0)

passengers = sample_daily_demand(scenario, 1, rng)
by_type = {}
for p in passengers:
    by_type[p.type_id] = by_type.get(p.type_id, 0) + 1
print(f"day 1 demand: {len(passengers)} passengers {by_type} "
      f"across markets {sorted({f'{p.market[0]}-{p.market[1]}' for p in passengers})}")

passenger = next(p for p in passengers if p.market == ("A", "D"))
ptype = scenario.type_by_id(passenger.type_id)
print(f"\nfollowing {passenger.passenger_id} ({passenger.type_id}), market A-D, "
      f"prefers departure {format_clock(passenger.preferred_departure)} "
      f"arrival {format_clock(passenger.preferred_arrival)}")

candidates = enumerate_journeys(supply, passenger.market, passenger.desired_travel_date,
                                scenario.min_transfer_minutes,
                                scenario.episode.max_transfers)
choice_rng = np.random.default_rng(1)
print(f"\n{len(candidates)} candidate journeys:")
for journey in candidates:
    legs = " + ".join(f"{l.instance.service_id}" for l in journey.legs)
    seats = screen_seats(ptype, journey, choice_rng)
    u = journey_utility(passenger, ptype, journey, seats, 1, choice_rng)
    print(f"  {legs:<28} price_term={u.price_penalty:5.2f} "
          f"time_term={u.travel_time_penalty:4.2f} "
          f"transfers={u.transfer_count_penalty:4.2f} total={u.total:6.2f}")

choice = choose_journey(passenger, ptype, candidates, 1, np.random.default_rng(1))
if choice.travelled:
    picked = " + ".join(l.instance.service_id for l in choice.journey.legs)
    print(f"\nchosen: {picked} with utility {choice.utility.total:.2f}")
else:
    print("\npassenger opts out (no journey with positive utility)")
