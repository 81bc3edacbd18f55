"""The full pricing game: an episode rollout, rewards, and evaluation metrics.

Three operators reprice daily under a random policy; the script prints the
day-by-day profit deltas, the episode report, the profit-equality metric,
and discounted returns, then runs a 3-seed batch through the harness.
"""

import tempfile
from pathlib import Path

import numpy as np

from railmarket import (
    PricingEnv,
    RunConfig,
    discounted_return,
    episode_report,
    equality,
    preset,
    run,
)

scenario = preset("business")
env = PricingEnv(scenario)
rng = np.random.default_rng(7)

env.reset(seed=0)
rewards_by_agent = {a: [] for a in env.agent_ids}
print("day-by-day rewards (random policy, seed 0):")
while not env.terminal:
    actions = {a: rng.uniform(-1, 1, env.action_space(a)["dimension"]).tolist()
               for a in env.agent_ids}
    result = env.step(actions)
    for agent, reward in result.rewards.items():
        rewards_by_agent[agent].append(reward)
    pretty = {a: f"{float(r):8.2f}" for a, r in result.rewards.items()}
    print(f"  day {result.info['day']}: {pretty} "
          f"({result.info['passengers_travelled']}/{result.info['passengers_generated']} travelled)")

report = episode_report(env.episode_log)
print("\nepisode report:")
print(f"  total profit: { {a: round(v, 2) for a, v in report['total_profit'].items()} }")
print(f"  percent travelling: {report['percent_travelling']:.1f}%")
print(f"  mean traveller utility: {report['mean_utility_travellers']:.2f}")

profits = [report["total_profit"][a] for a in env.agent_ids]
print(f"  profit equality E: {equality(profits):.3f}")
for agent in env.agent_ids:
    ret = discounted_return(rewards_by_agent[agent], 0.99)
    print(f"  discounted return (gamma=0.99) {agent}: {ret:.2f}")

print("\nharness batch (seeds 0, 43, 71; 4 episodes each):")
with tempfile.TemporaryDirectory() as tmp:
    result = run(RunConfig(scenario=scenario, policy="random", seeds=(0, 43, 71),
                           episodes=4, parallel_instances=2, mode="eval",
                           out_dir=Path(tmp)))
    agg = result.summary["aggregate"]
    total = agg["total_profit_all_agents"]
    print(f"  total profit: {total['mean']:.2f} +/- {total['sd']:.2f}")
    print(f"  percent travelling: {agg['percent_travelling']['mean']:.2f}")
    print(f"  files: {sorted(p.name for p in Path(tmp).iterdir())}")
