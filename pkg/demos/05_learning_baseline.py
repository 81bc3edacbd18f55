"""Tabular Q-learning in a monopoly micro-market.

A single operator starts at a price well above the revenue-optimal point;
demand is price-elastic, so the learner should discover the cut-then-hold
strategy and clearly beat a random policy.
"""

from decimal import Decimal

import numpy as np

from railmarket import PricingEnv, QConfig, RandomPolicy, TabularQPolicy, load_scenario
from railmarket.agents import bin_of_level

DOCUMENT = """
schema_version: 1
name: monopoly
min_transfer_minutes: 5
stations: [X, Y]
corridors: [{id: c, stations: [X, Y]}]
lines: [{id: ln, corridor: c, stops: [X, Y]}]
agents: [{id: op, services: [svc]}]
services:
  - {id: svc, operator: op, line: ln, stop_times: ["08:00", "09:00"],
     seats: [{class: standard, capacity: 200}],
     prices: [{origin: X, destination: Y, class: standard, price: "100.00"}]}
passenger_types:
  - id: buyer
    operator_affinity: {op: 6.5}
    seat_utility: {standard: 0.5}
    arrival_penalty: {form: linear, slope: 0.0}
    departure_penalty: {form: linear, slope: 0.0}
    price_sensitivity: {form: linear, slope: 0.08}
    travel_time_penalty: {form: linear, slope: 0.0}
    transfer_time_penalty: {form: linear, slope: 0.0}
    transfer_count_penalty: {per_transfer: 0.0}
    noise: {distribution: gumbel, scale: 0.5}
markets:
  - origin: X
    destination: Y
    daily_volume: {distribution: constant, value: 30}
    type_mixture: {buyer: 1.0}
episode:
  horizon_days: 5
  passengers_expected_total: 150.0
"""

scenario = load_scenario(DOCUMENT)


def rollout(env, policy, learn):
    observations = env.observations()
    total = Decimal("0.00")
    while not env.terminal:
        action = policy.act(observations["op"])
        result = env.step({"op": action})
        if learn:
            policy.observe_transition(observations["op"], action,
                                      float(result.rewards["op"]),
                                      result.observations["op"], result.terminal)
        total += result.rewards["op"]
        observations = result.observations
    return float(total)


env = PricingEnv(scenario, action_mode="discrete")
space = env.action_space("op")
learner = TabularQPolicy(space, np.random.default_rng(1),
                         QConfig(learning_rate=0.2, gamma=0.95, epsilon=1.0))

episodes = 1500
print(f"training for {episodes} episodes with decaying exploration...")
for episode in range(episodes):
    learner.config.epsilon = max(0.05, 1.0 - episode / (0.8 * episodes))
    if episode == 0:
        env.reset(seed=0)
    else:
        env.reset()
    rollout(env, learner, learn=True)
    if (episode + 1) % 300 == 0:
        learner.config.epsilon, eps = 0.0, learner.config.epsilon
        probe = PricingEnv(scenario, action_mode="discrete")
        probe.reset(seed=10**6 + episode)
        profit = rollout(probe, learner, learn=False)
        learner.config.epsilon = eps
        print(f"  episode {episode + 1:>4}: greedy episode profit {profit:8.2f}")

learner.config.epsilon = 0.0
random_policy = RandomPolicy(space, np.random.default_rng(2))
trained, randoms = [], []
for i in range(200):
    for policy, sink in ((learner, trained), (random_policy, randoms)):
        probe = PricingEnv(scenario, action_mode="discrete")
        probe.reset(seed=2 * 10**6 + i)
        sink.append(rollout(probe, policy, learn=False))

print(f"\nmean episode profit: trained {np.mean(trained):.2f} "
      f"vs random {np.mean(randoms):.2f} "
      f"(+{(np.mean(trained) / np.mean(randoms) - 1) * 100:.0f}%)")

probe = PricingEnv(scenario, action_mode="discrete")
obs = probe.reset(seed=3 * 10**6)
print("greedy policy by day:")
while not probe.terminal:
    action = learner.act(obs["op"])
    price = obs["op"]["services"][0]["prices"][0]["price"]
    print(f"  day {probe.day}: price {price:7.2f} -> action level {action[0]} "
          f"({bin_of_level(action[0])})")
    obs = probe.step({"op": action}).observations
