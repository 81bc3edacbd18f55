"""Remote-control protocol: one environment instance per session, driven by
line-delimited JSON messages over TCP or stdio.

Request kinds: ``hello``, ``spaces``, ``reset`` (with ``seed``), ``step``
(with ``actions``: agent id -> action vector), ``close``. Every reply
carries ``ok``, ``kind`` (request kind + ``"_reply"`` or ``"error"``) and
``protocol_version``. Numbers are serialised as shortest round-trip
decimals (plain JSON floats), so a remote episode reproduces an in-process
one exactly.

One session = one connection = one serialised command stream; the server
hosts many sessions concurrently with no shared state.
"""

from __future__ import annotations

import json
import socketserver
import sys
import threading
from decimal import Decimal

from .env import PricingEnv
from .errors import AlreadyTerminalError, MalformedActionError, RailMarketError
from .scenario import Scenario

PROTOCOL_VERSION = 1
MAX_LINE_BYTES = 8 * 1024 * 1024


def _jsonable(value):
    if isinstance(value, Decimal):
        return float(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


class Session:
    """Protocol state machine wrapping one environment instance."""

    def __init__(self, scenario: Scenario, action_mode: str):
        self.scenario = scenario
        self.env = PricingEnv(scenario, action_mode=action_mode)
        self.reset_done = False
        self.closed = False

    def _spaces(self) -> dict:
        return {
            agent: {
                "action": self.env.action_space(agent),
                "observation": self.env.observation_space(agent),
            }
            for agent in self.env.agent_ids
        }

    def _ok(self, kind: str, **fields) -> dict:
        reply = {"kind": f"{kind}_reply", "ok": True, "protocol_version": PROTOCOL_VERSION}
        reply.update(fields)
        return reply

    def _error(self, code: str, message: str) -> dict:
        return {"kind": "error", "ok": False, "protocol_version": PROTOCOL_VERSION,
                "error": {"code": code, "message": message}}

    def handle_line(self, line: str) -> dict:
        try:
            message = json.loads(line)
        except json.JSONDecodeError as exc:
            return self._error("malformed_request", f"not valid JSON: {exc}")
        if not isinstance(message, dict) or "kind" not in message:
            return self._error("malformed_request", "message must be an object with a 'kind'")
        kind = message["kind"]
        handler = getattr(self, f"_handle_{kind}", None)
        if handler is None:
            return self._error("unknown_kind", f"unknown request kind {kind!r}")
        try:
            return handler(message)
        except AlreadyTerminalError as exc:
            return self._error("already_terminal", str(exc))
        except MalformedActionError as exc:
            return self._error("malformed_action", str(exc))
        except RailMarketError as exc:
            return self._error("invalid_request", str(exc))

    def _handle_hello(self, message: dict) -> dict:
        return self._ok(
            "hello",
            scenario=self.scenario.name,
            agent_ids=list(self.env.agent_ids),
            action_mode=self.env.action_mode,
            horizon_days=self.env.horizon,
            spaces=self._spaces(),
        )

    def _handle_spaces(self, message: dict) -> dict:
        return self._ok("spaces", spaces=self._spaces())

    def _handle_reset(self, message: dict) -> dict:
        seed = message.get("seed")
        if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
            return self._error("malformed_request", "seed must be an integer or null")
        if seed is None and not self.reset_done:
            return self._error("wrong_phase", "first reset of a session needs a seed")
        observations = self.env.reset(seed)
        self.reset_done = True
        return self._ok("reset", observations=_jsonable(observations), day=self.env.day)

    def _handle_step(self, message: dict) -> dict:
        if not self.reset_done:
            return self._error("wrong_phase", "step before reset")
        if "actions" not in message:
            return self._error("malformed_request", "step needs an 'actions' object")
        result = self.env.step(message["actions"])
        return self._ok(
            "step",
            observations=_jsonable(result.observations),
            rewards={a: float(r) for a, r in result.rewards.items()},
            terminal=result.terminal,
            info=_jsonable(result.info),
        )

    def _handle_close(self, message: dict) -> dict:
        self.closed = True
        return self._ok("close")


def run_session_stream(scenario: Scenario, action_mode: str, reader, writer) -> None:
    """Drive one session over a line-based reader/writer pair."""
    session = Session(scenario, action_mode)
    for line in reader:
        if isinstance(line, bytes):
            line = line.decode("utf-8", errors="replace")
        if len(line) > MAX_LINE_BYTES:
            break
        line = line.strip()
        if not line:
            continue
        reply = session.handle_line(line)
        writer.write(json.dumps(reply) + "\n")
        writer.flush()
        if session.closed:
            break


class _Handler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        class _W:
            def __init__(self, wfile):
                self.wfile = wfile

            def write(self, text: str) -> None:
                self.wfile.write(text.encode("utf-8"))

            def flush(self) -> None:
                self.wfile.flush()

        try:
            run_session_stream(self.server.scenario, self.server.action_mode,
                               self.rfile, _W(self.wfile))
        except (ConnectionError, BrokenPipeError):
            pass  # transport errors end this session only


class ProtocolServer(socketserver.ThreadingTCPServer):
    """TCP server hosting one environment session per connection."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, scenario: Scenario, host: str = "127.0.0.1", port: int = 0,
                 action_mode: str = "continuous"):
        self.scenario = scenario
        self.action_mode = action_mode
        super().__init__((host, port), _Handler)

    @property
    def address(self) -> tuple[str, int]:
        return self.server_address[:2]

    def serve_background(self) -> threading.Thread:
        thread = threading.Thread(target=self.serve_forever, daemon=True)
        thread.start()
        return thread


def serve_stdio(scenario: Scenario, action_mode: str = "continuous") -> None:
    """Single-session server over standard input/output."""
    run_session_stream(scenario, action_mode, sys.stdin, sys.stdout)
