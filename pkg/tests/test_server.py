"""Protocol server: handshake, transport transparency, error replies, sessions."""

import json
import socket
import subprocess
import sys

import pytest

from railmarket import PricingEnv, preset
from railmarket.server import PROTOCOL_VERSION, ProtocolServer


class WireClient:
    def __init__(self, address):
        self.sock = socket.create_connection(address, timeout=10)
        self.rfile = self.sock.makefile("r", encoding="utf-8")
        self.wfile = self.sock.makefile("w", encoding="utf-8")

    def call(self, **message):
        self.wfile.write(json.dumps(message) + "\n")
        self.wfile.flush()
        line = self.rfile.readline()
        assert line, "server closed the connection unexpectedly"
        return json.loads(line)

    def send_raw(self, text):
        self.wfile.write(text + "\n")
        self.wfile.flush()
        return json.loads(self.rfile.readline())

    def close(self):
        self.sock.close()


@pytest.fixture(scope="module")
def server():
    srv = ProtocolServer(preset("business"), port=0)
    srv.serve_background()
    yield srv
    srv.shutdown()
    srv.server_close()


@pytest.fixture
def client(server):
    c = WireClient(server.address)
    yield c
    c.close()


def _zero_actions(agent_ids, spaces):
    return {a: [0.0] * spaces[a]["action"]["dimension"] for a in agent_ids}


def test_hello_handshake(client):
    reply = client.call(kind="hello")
    assert reply["ok"] and reply["kind"] == "hello_reply"
    assert reply["protocol_version"] == PROTOCOL_VERSION
    assert reply["agent_ids"] == ["agent_1", "agent_2", "agent_3"]
    assert reply["spaces"]["agent_2"]["action"]["dimension"] == 2


def test_reset_matches_in_process(client):
    reply = client.call(kind="reset", seed=0)
    assert reply["ok"]
    env = PricingEnv(preset("business"))
    local = json.loads(json.dumps(env.reset(seed=0)))
    assert reply["observations"] == local
    again = client.call(kind="reset", seed=0)
    assert again["observations"] == reply["observations"]


def test_episode_transport_transparency(client):
    hello = client.call(kind="hello")
    agent_ids = hello["agent_ids"]
    spaces = hello["spaces"]
    actions = _zero_actions(agent_ids, spaces)

    client.call(kind="reset", seed=7)
    remote_rewards = []
    while True:
        reply = client.call(kind="step", actions=actions)
        assert reply["ok"]
        remote_rewards.append(reply["rewards"])
        if reply["terminal"]:
            break

    env = PricingEnv(preset("business"))
    env.reset(seed=7)
    local_rewards = []
    while not env.terminal:
        result = env.step(actions)
        local_rewards.append({a: float(r) for a, r in result.rewards.items()})
    assert remote_rewards == local_rewards


def test_step_before_reset_is_wrong_phase(server):
    c = WireClient(server.address)
    reply = c.call(kind="step", actions={})
    assert not reply["ok"]
    assert reply["error"]["code"] == "wrong_phase"
    c.close()


def test_missing_agent_action_names_the_agent(client):
    client.call(kind="reset", seed=0)
    reply = client.call(kind="step", actions={"agent_1": [0.0]})
    assert not reply["ok"]
    assert reply["error"]["code"] == "malformed_action"
    assert "agent_2" in reply["error"]["message"]
    assert "agent_3" in reply["error"]["message"]


def test_malformed_json_line(client):
    reply = client.send_raw("this is not json")
    assert not reply["ok"]
    assert reply["error"]["code"] == "malformed_request"


def test_unknown_kind(client):
    reply = client.call(kind="teleport")
    assert not reply["ok"]
    assert reply["error"]["code"] == "unknown_kind"


def test_first_reset_without_seed_rejected(server):
    c = WireClient(server.address)
    reply = c.call(kind="reset")
    assert not reply["ok"] and reply["error"]["code"] == "wrong_phase"
    c.close()


def test_close_reply(server):
    c = WireClient(server.address)
    reply = c.call(kind="close")
    assert reply["ok"] and reply["kind"] == "close_reply"
    c.close()


def test_sessions_are_isolated(server):
    a = WireClient(server.address)
    b = WireClient(server.address)
    hello = a.call(kind="hello")
    actions = _zero_actions(hello["agent_ids"], hello["spaces"])
    a.call(kind="reset", seed=1)
    b.call(kind="reset", seed=2)
    ra = a.call(kind="step", actions=actions)
    rb = b.call(kind="step", actions=actions)
    # different seeds -> different demand realisations (same day index)
    assert ra["info"]["day"] == rb["info"]["day"] == 1
    assert ra["info"]["passengers_generated"] != rb["info"]["passengers_generated"] or \
        ra["rewards"] != rb["rewards"]
    # session a is unaffected by b's progress
    ra2 = a.call(kind="step", actions=actions)
    assert ra2["info"]["day"] == 2
    a.close()
    b.close()


def test_terminal_step_then_already_terminal(client):
    hello = client.call(kind="hello")
    actions = _zero_actions(hello["agent_ids"], hello["spaces"])
    client.call(kind="reset", seed=3)
    for _ in range(hello["horizon_days"]):
        reply = client.call(kind="step", actions=actions)
    assert reply["terminal"]
    reply = client.call(kind="step", actions=actions)
    assert not reply["ok"]
    assert reply["error"]["code"] == "already_terminal"


def test_stdio_transport():
    proc = subprocess.Popen(
        [sys.executable, "-m", "railmarket", "serve", "--stdio", "--scenario", "business"],
        stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True)
    try:
        requests = [
            {"kind": "hello"},
            {"kind": "reset", "seed": 0},
            {"kind": "close"},
        ]
        payload = "".join(json.dumps(r) + "\n" for r in requests)
        out, _ = proc.communicate(payload, timeout=60)
        replies = [json.loads(line) for line in out.strip().splitlines()]
        assert [r["kind"] for r in replies] == ["hello_reply", "reset_reply", "close_reply"]
        assert all(r["ok"] for r in replies)
        env = PricingEnv(preset("business"))
        assert replies[1]["observations"] == json.loads(json.dumps(env.reset(seed=0)))
    finally:
        proc.kill()
