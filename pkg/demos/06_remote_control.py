"""Driving an environment over the wire protocol.

Starts the TCP server in the background, speaks the line-delimited JSON
protocol over a raw socket, and shows that the remote episode matches an
in-process run exactly.
"""

import json
import socket

from railmarket import PricingEnv, preset
from railmarket.server import ProtocolServer

scenario = preset("business")
server = ProtocolServer(scenario, port=0)
server.serve_background()
host, port = server.address
print(f"server on {host}:{port}")

sock = socket.create_connection((host, port))
rfile = sock.makefile("r")
wfile = sock.makefile("w")


def call(**message):
    wfile.write(json.dumps(message) + "\n")
    wfile.flush()
    return json.loads(rfile.readline())


hello = call(kind="hello")
print(f"hello: protocol v{hello['protocol_version']}, agents {hello['agent_ids']}")
actions = {a: [0.0] * hello["spaces"][a]["action"]["dimension"]
           for a in hello["agent_ids"]}

call(kind="reset", seed=0)
remote_rewards = []
while True:
    reply = call(kind="step", actions=actions)
    remote_rewards.append(reply["rewards"])
    print(f"  day {reply['info']['day']}: rewards "
          f"{ {a: round(r, 2) for a, r in reply['rewards'].items()} }")
    if reply["terminal"]:
        break
call(kind="close")
sock.close()
server.shutdown()

env = PricingEnv(scenario)
env.reset(seed=0)
local_rewards = []
while not env.terminal:
    result = env.step(actions)
    local_rewards.append({a: float(r) for a, r in result.rewards.items()})

print(f"\nremote == in-process rewards: {remote_rewards == local_rewards}")
