"""In-process reference episode for the transport-transparency test.

Reads {"scenario", "seed", "actions": [jointAction, ...]} as JSON on argv[1]
(a file path) or stdin, replays it in-process, and prints the per-step
reward mapping as JSON. The TypeScript test compares these numbers with the
rewards its client received over the wire; they must match exactly.
"""

import json
import sys

from railmarket import PricingEnv, resolve_scenario


def main() -> int:
    if len(sys.argv) > 1:
        with open(sys.argv[1]) as fh:
            request = json.load(fh)
    else:
        request = json.load(sys.stdin)
    scenario = resolve_scenario(request["scenario"])
    env = PricingEnv(scenario, action_mode=request.get("action_mode", "continuous"))
    env.reset(seed=request["seed"])
    rewards = []
    for joint_action in request["actions"]:
        result = env.step(joint_action)
        rewards.append({a: float(r) for a, r in result.rewards.items()})
    json.dump({"rewards": rewards, "terminal": result.terminal}, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
