"""Scenario documents: typed domain model, strict YAML loading, built-in presets.

A scenario is a single YAML document (``schema_version: 1``) describing the
railway network, the operating agents and their services, the passenger
types, the per-market demand, and the episode parameters. Unknown keys are
rejected, and every validation error carries the dotted path of the
offending key.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Any, Mapping

import numpy as np
import yaml

from .errors import ScenarioSyntaxError, ScenarioValidationError, UnknownPresetError

SCHEMA_VERSION = 1
PRESET_NAMES = ("business", "business_student")

TRAVEL_DATE_MODES = ("single-terminal-date", "per-passenger-date")

MINUTES_PER_DAY = 24 * 60


def parse_clock(text: str) -> int:
    """Parse ``"HH:MM"`` into minutes since midnight."""
    parts = str(text).split(":")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ValueError(f"not a HH:MM clock time: {text!r}")
    hours, minutes = int(parts[0]), int(parts[1])
    if hours >= 24 or minutes >= 60:
        raise ValueError(f"clock time out of range: {text!r}")
    return hours * 60 + minutes


def format_clock(minutes: int) -> str:
    return f"{minutes // 60:02d}:{minutes % 60:02d}"


def _money(value: Any, path: str) -> Decimal:
    """Coerce a config value to 2-fraction-digit currency, rejecting extra digits."""
    try:
        amount = Decimal(str(value))
    except InvalidOperation:
        raise ScenarioValidationError(path, f"not a currency amount: {value!r}") from None
    if not amount.is_finite():
        raise ScenarioValidationError(path, "currency amount must be finite")
    if -amount.as_tuple().exponent > 2:
        raise ScenarioValidationError(path, f"more than 2 fractional digits: {value!r}")
    return amount.quantize(Decimal("0.01"))


# ---------------------------------------------------------------------------
# Domain types


@dataclass(frozen=True)
class PenaltyCurve:
    """Nonnegative penalty as a function of a nonnegative quantity.

    ``linear``: ``slope * x``. ``piecewise``: linear interpolation through
    ``points`` (flat extrapolation beyond the last point).
    """

    form: str = "linear"
    slope: float = 0.0
    points: tuple[tuple[float, float], ...] = ()

    def __call__(self, x: float) -> float:
        if self.form == "linear":
            return self.slope * x
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        return float(np.interp(x, xs, ys))


@dataclass(frozen=True)
class NoiseSpec:
    """Random-error term of the utility function."""

    distribution: str = "gumbel"
    scale: float = 1.0

    def sample(self, rng: np.random.Generator) -> float:
        # Always consumes exactly one draw so zero-scale (degenerate) noise
        # keeps the stream aligned with positive-scale runs.
        return self.scale * float(rng.gumbel())


@dataclass(frozen=True)
class AnticipationSpec:
    """Distribution over days-before-travel at purchase time.

    ``uniform`` spreads mass evenly over the booking horizon; ``weights``
    gives an explicit pmf keyed by integer days-before-travel.
    """

    kind: str = "uniform"
    weights: tuple[tuple[int, float], ...] = ()

    def day_weights(self, horizon: int) -> np.ndarray:
        """Weight of each booking day t=1..horizon for a terminal travel date.

        Day t sits ``horizon + 1 - t`` days before travel; weights are the
        pmf at that lag, renormalised over the horizon.
        """
        if self.kind == "uniform":
            return np.full(horizon, 1.0 / horizon)
        pmf = dict(self.weights)
        raw = np.array([pmf.get(horizon + 1 - t, 0.0) for t in range(1, horizon + 1)])
        total = raw.sum()
        if total <= 0.0:
            return np.full(horizon, 1.0 / horizon)
        return raw / total

    def sample_days_before(self, rng: np.random.Generator, horizon: int) -> int:
        if self.kind == "uniform":
            return int(rng.integers(0, horizon))
        days = np.array([d for d, _ in self.weights])
        probs = np.array([w for _, w in self.weights], dtype=float)
        probs = probs / probs.sum()
        return int(rng.choice(days, p=probs))


@dataclass(frozen=True)
class PassengerType:
    """Utility parameterisation and purchase-timing behaviour of one segment."""

    type_id: str
    operator_affinity: Mapping[str, float]
    seat_utility: Mapping[str, float]
    arrival_penalty: PenaltyCurve
    departure_penalty: PenaltyCurve
    price_sensitivity: PenaltyCurve
    travel_time_penalty: PenaltyCurve
    transfer_time_penalty: PenaltyCurve
    transfer_count_penalty: float
    noise: NoiseSpec
    purchase_anticipation: AnticipationSpec = AnticipationSpec()
    preferred_departure_window: tuple[int, int] = (0, MINUTES_PER_DAY - 1)
    preferred_arrival_window: tuple[int, int] = (0, MINUTES_PER_DAY - 1)


@dataclass(frozen=True)
class VolumeSpec:
    """Daily passenger-volume distribution of a market."""

    distribution: str = "poisson"
    mean: float = 0.0
    value: int = 0

    @property
    def expected_daily(self) -> float:
        return self.mean if self.distribution == "poisson" else float(self.value)

    def sample(self, rng: np.random.Generator) -> int:
        if self.distribution == "poisson":
            return int(rng.poisson(self.mean))
        return self.value


@dataclass(frozen=True)
class MarketDemandSpec:
    origin: str
    destination: str
    volume: VolumeSpec
    type_mixture: Mapping[str, float]

    @property
    def market(self) -> tuple[str, str]:
        return (self.origin, self.destination)


@dataclass(frozen=True)
class CorridorSpec:
    corridor_id: str
    stations: tuple[str, ...]


@dataclass(frozen=True)
class LineSpec:
    line_id: str
    corridor: str
    stops: tuple[str, ...]


@dataclass(frozen=True)
class SeatSpec:
    seat_class: str
    capacity: int


@dataclass(frozen=True)
class PriceSpec:
    origin: str
    destination: str
    seat_class: str
    price: Decimal


@dataclass(frozen=True)
class ServiceTemplate:
    service_id: str
    operator: str
    line: str
    stop_times: tuple[int, ...]
    seats: tuple[SeatSpec, ...]
    initial_prices: tuple[PriceSpec, ...]


@dataclass(frozen=True)
class AgentSpec:
    agent_id: str
    operated_service_ids: tuple[str, ...]


@dataclass(frozen=True)
class EpisodeSpec:
    horizon_days: int
    travel_date_mode: str = "single-terminal-date"
    passengers_expected_total: float = 0.0
    time_slot_minutes: int = 60
    price_scaling_percent: float = 25.0
    max_transfers: int = 2


@dataclass(frozen=True)
class Scenario:
    schema_version: int
    name: str
    stations: tuple[str, ...]
    corridors: tuple[CorridorSpec, ...]
    lines: tuple[LineSpec, ...]
    agents: tuple[AgentSpec, ...]
    services: tuple[ServiceTemplate, ...]
    passenger_types: tuple[PassengerType, ...]
    markets: tuple[MarketDemandSpec, ...]
    episode: EpisodeSpec
    min_transfer_minutes: int
    calibration: str | None = None

    @property
    def agent_ids(self) -> tuple[str, ...]:
        return tuple(a.agent_id for a in self.agents)

    def agent_of_service(self, service_id: str) -> str:
        return self.service_by_id(service_id).operator

    def service_by_id(self, service_id: str) -> ServiceTemplate:
        return self._service_index()[service_id]

    def line_by_id(self, line_id: str) -> LineSpec:
        return {l.line_id: l for l in self.lines}[line_id]

    def type_by_id(self, type_id: str) -> PassengerType:
        return {t.type_id: t for t in self.passenger_types}[type_id]

    def market_spec(self, origin: str, destination: str) -> MarketDemandSpec | None:
        for m in self.markets:
            if m.market == (origin, destination):
                return m
        return None

    def _service_index(self) -> dict[str, ServiceTemplate]:
        return {s.service_id: s for s in self.services}


# ---------------------------------------------------------------------------
# Strict document extraction


def _join(path: str, key: Any) -> str:
    return f"{path}.{key}" if path else str(key)


class _Node:
    """Strict mapping view: every key must be consumed exactly once."""

    def __init__(self, mapping: Any, path: str):
        if not isinstance(mapping, dict):
            raise ScenarioValidationError(path or "<root>", "expected a key-value mapping")
        self._map = dict(mapping)
        self.path = path

    def take(self, key: str, required: bool = True, default: Any = None) -> Any:
        if key not in self._map:
            if required:
                raise ScenarioValidationError(_join(self.path, key), "missing required key")
            return default
        return self._map.pop(key)

    def child(self, key: str, required: bool = True) -> "_Node | None":
        value = self.take(key, required=required)
        if value is None and not required:
            return None
        return _Node(value, _join(self.path, key))

    def done(self) -> None:
        if self._map:
            key = sorted(str(k) for k in self._map)[0]
            raise ScenarioValidationError(_join(self.path, key), "unknown key")


def _as_str(value: Any, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise ScenarioValidationError(path, f"expected a non-empty string, got {value!r}")
    return value


def _as_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioValidationError(path, f"expected an integer, got {value!r}")
    return value


def _as_float(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioValidationError(path, f"expected a number, got {value!r}")
    return float(value)


def _as_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise ScenarioValidationError(path, f"expected a list, got {value!r}")
    return value


def _as_clock(value: Any, path: str) -> int:
    try:
        return parse_clock(value)
    except ValueError as exc:
        raise ScenarioValidationError(path, str(exc)) from None


def _parse_penalty(node: _Node) -> PenaltyCurve:
    form = _as_str(node.take("form", required=False, default="linear"), _join(node.path, "form"))
    if form == "linear":
        slope = _as_float(node.take("slope"), _join(node.path, "slope"))
        if slope < 0:
            raise ScenarioValidationError(_join(node.path, "slope"), "penalty slope must be >= 0")
        node.done()
        return PenaltyCurve(form="linear", slope=slope)
    if form == "piecewise":
        raw = _as_list(node.take("points"), _join(node.path, "points"))
        points = []
        for i, pair in enumerate(raw):
            ppath = f"{node.path}.points[{i}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise ScenarioValidationError(ppath, "expected [x, value] pair")
            x, y = _as_float(pair[0], ppath), _as_float(pair[1], ppath)
            if y < 0:
                raise ScenarioValidationError(ppath, "penalty values must be >= 0")
            points.append((x, y))
        if len(points) < 2:
            raise ScenarioValidationError(_join(node.path, "points"), "need at least 2 points")
        if any(points[i][0] >= points[i + 1][0] for i in range(len(points) - 1)):
            raise ScenarioValidationError(_join(node.path, "points"), "x values must increase")
        node.done()
        return PenaltyCurve(form="piecewise", points=tuple(points))
    raise ScenarioValidationError(_join(node.path, "form"), f"unknown penalty form {form!r}")


def _parse_window(node: _Node | None, default: tuple[int, int]) -> tuple[int, int]:
    if node is None:
        return default
    lo = _as_clock(node.take("earliest"), _join(node.path, "earliest"))
    hi = _as_clock(node.take("latest"), _join(node.path, "latest"))
    node.done()
    if lo > hi:
        raise ScenarioValidationError(node.path, "earliest must not exceed latest")
    return (lo, hi)


def _parse_anticipation(node: _Node | None) -> AnticipationSpec:
    if node is None:
        return AnticipationSpec()
    kind = _as_str(node.take("kind"), _join(node.path, "kind"))
    if kind == "uniform":
        node.done()
        return AnticipationSpec(kind="uniform")
    if kind == "weights":
        raw = node.take("by_days_before")
        wpath = _join(node.path, "by_days_before")
        if not isinstance(raw, dict) or not raw:
            raise ScenarioValidationError(wpath, "expected a non-empty mapping")
        weights = []
        for days, weight in raw.items():
            dpath = f"{wpath}[{days}]"
            d = _as_int(days, dpath)
            w = _as_float(weight, dpath)
            if d < 0 or w < 0:
                raise ScenarioValidationError(dpath, "days and weights must be >= 0")
            weights.append((d, w))
        if sum(w for _, w in weights) <= 0:
            raise ScenarioValidationError(wpath, "weights must not all be zero")
        node.done()
        return AnticipationSpec(kind="weights", weights=tuple(sorted(weights)))
    raise ScenarioValidationError(_join(node.path, "kind"), f"unknown anticipation kind {kind!r}")


def _parse_noise(node: _Node) -> NoiseSpec:
    dist = _as_str(node.take("distribution", required=False, default="gumbel"),
                   _join(node.path, "distribution"))
    if dist != "gumbel":
        raise ScenarioValidationError(_join(node.path, "distribution"),
                                      f"unsupported noise distribution {dist!r}")
    scale = _as_float(node.take("scale"), _join(node.path, "scale"))
    if scale < 0:
        raise ScenarioValidationError(_join(node.path, "scale"), "noise scale must be >= 0")
    node.done()
    return NoiseSpec(distribution=dist, scale=scale)


def _is_subsequence(needle: tuple[str, ...], haystack: tuple[str, ...]) -> bool:
    it = iter(haystack)
    return all(s in it for s in needle)


# ---------------------------------------------------------------------------
# Loader


def load_scenario(document: str) -> Scenario:
    """Parse and validate a scenario document; returns the typed Scenario.

    Raises ScenarioSyntaxError on malformed YAML and ScenarioValidationError
    (with a dotted key path) on any violated invariant or unknown key.
    """
    try:
        raw = yaml.safe_load(document)
    except yaml.YAMLError as exc:
        raise ScenarioSyntaxError(f"malformed scenario document: {exc}") from exc

    root = _Node(raw, "")
    version = _as_int(root.take("schema_version"), "schema_version")
    if version != SCHEMA_VERSION:
        raise ScenarioValidationError("schema_version", f"unsupported version {version}")
    name = _as_str(root.take("name"), "name")
    calibration = root.take("calibration", required=False)
    if calibration is not None:
        calibration = _as_str(calibration, "calibration")

    stations = tuple(_as_str(s, f"stations[{i}]")
                     for i, s in enumerate(_as_list(root.take("stations"), "stations")))
    if not stations:
        raise ScenarioValidationError("stations", "at least one station required")
    if len(set(stations)) != len(stations):
        raise ScenarioValidationError("stations", "duplicate station ids")
    station_set = set(stations)

    min_transfer = _as_int(root.take("min_transfer_minutes"), "min_transfer_minutes")
    if min_transfer < 0:
        raise ScenarioValidationError("min_transfer_minutes", "must be >= 0")

    corridors = []
    for i, item in enumerate(_as_list(root.take("corridors"), "corridors")):
        node = _Node(item, f"corridors[{i}]")
        cid = _as_str(node.take("id"), _join(node.path, "id"))
        stops = tuple(_as_str(s, f"{node.path}.stations[{j}]")
                      for j, s in enumerate(_as_list(node.take("stations"), _join(node.path, "stations"))))
        node.done()
        if len(set(stops)) != len(stops):
            raise ScenarioValidationError(_join(node.path, "stations"), "duplicate stations")
        for s in stops:
            if s not in station_set:
                raise ScenarioValidationError(_join(node.path, "stations"), f"unknown station {s!r}")
        corridors.append(CorridorSpec(corridor_id=cid, stations=stops))
    corridor_index = {c.corridor_id: c for c in corridors}
    if len(corridor_index) != len(corridors):
        raise ScenarioValidationError("corridors", "duplicate corridor ids")

    lines = []
    for i, item in enumerate(_as_list(root.take("lines"), "lines")):
        node = _Node(item, f"lines[{i}]")
        lid = _as_str(node.take("id"), _join(node.path, "id"))
        corridor = _as_str(node.take("corridor"), _join(node.path, "corridor"))
        stops = tuple(_as_str(s, f"{node.path}.stops[{j}]")
                      for j, s in enumerate(_as_list(node.take("stops"), _join(node.path, "stops"))))
        node.done()
        if corridor not in corridor_index:
            raise ScenarioValidationError(_join(node.path, "corridor"), f"unknown corridor {corridor!r}")
        if len(stops) < 2:
            raise ScenarioValidationError(_join(node.path, "stops"), "a line needs at least 2 stops")
        if len(set(stops)) != len(stops):
            raise ScenarioValidationError(_join(node.path, "stops"), "duplicate stops")
        if not _is_subsequence(stops, corridor_index[corridor].stations):
            raise ScenarioValidationError(_join(node.path, "stops"),
                                          "stops must follow the corridor's station order")
        lines.append(LineSpec(line_id=lid, corridor=corridor, stops=stops))
    line_index = {l.line_id: l for l in lines}
    if len(line_index) != len(lines):
        raise ScenarioValidationError("lines", "duplicate line ids")

    services = []
    for i, item in enumerate(_as_list(root.take("services"), "services")):
        node = _Node(item, f"services[{i}]")
        sid = _as_str(node.take("id"), _join(node.path, "id"))
        operator = _as_str(node.take("operator"), _join(node.path, "operator"))
        line_id = _as_str(node.take("line"), _join(node.path, "line"))
        if line_id not in line_index:
            raise ScenarioValidationError(_join(node.path, "line"), f"unknown line {line_id!r}")
        line = line_index[line_id]
        times_raw = _as_list(node.take("stop_times"), _join(node.path, "stop_times"))
        if len(times_raw) != len(line.stops):
            raise ScenarioValidationError(_join(node.path, "stop_times"),
                                          f"expected {len(line.stops)} times for line {line_id!r}")
        stop_times = tuple(_as_clock(t, f"{node.path}.stop_times[{j}]")
                           for j, t in enumerate(times_raw))
        if any(stop_times[j] >= stop_times[j + 1] for j in range(len(stop_times) - 1)):
            raise ScenarioValidationError(_join(node.path, "stop_times"),
                                          "stop times must strictly increase along the line")
        seats = []
        for j, seat_item in enumerate(_as_list(node.take("seats"), _join(node.path, "seats"))):
            snode = _Node(seat_item, f"{node.path}.seats[{j}]")
            cls = _as_str(snode.take("class"), _join(snode.path, "class"))
            cap = _as_int(snode.take("capacity"), _join(snode.path, "capacity"))
            snode.done()
            if cap < 0:
                raise ScenarioValidationError(_join(snode.path, "capacity"), "capacity must be >= 0")
            seats.append(SeatSpec(seat_class=cls, capacity=cap))
        if len({s.seat_class for s in seats}) != len(seats):
            raise ScenarioValidationError(_join(node.path, "seats"), "duplicate seat classes")
        seat_classes = {s.seat_class for s in seats}
        stop_pos = {s: k for k, s in enumerate(line.stops)}
        prices = []
        seen_cells = set()
        for j, price_item in enumerate(_as_list(node.take("prices"), _join(node.path, "prices"))):
            pnode = _Node(price_item, f"{node.path}.prices[{j}]")
            o = _as_str(pnode.take("origin"), _join(pnode.path, "origin"))
            d = _as_str(pnode.take("destination"), _join(pnode.path, "destination"))
            cls = _as_str(pnode.take("class"), _join(pnode.path, "class"))
            amount = _money(pnode.take("price"), _join(pnode.path, "price"))
            pnode.done()
            if o not in stop_pos or d not in stop_pos:
                raise ScenarioValidationError(pnode.path, f"{o!r}->{d!r} not stops of line {line_id!r}")
            if stop_pos[o] >= stop_pos[d]:
                raise ScenarioValidationError(pnode.path, "origin must precede destination on the line")
            if cls not in seat_classes:
                raise ScenarioValidationError(_join(pnode.path, "class"), f"seat class {cls!r} not offered")
            if amount < 0:
                raise ScenarioValidationError(_join(pnode.path, "price"), "price must be >= 0")
            cell = (o, d, cls)
            if cell in seen_cells:
                raise ScenarioValidationError(pnode.path, f"duplicate price cell {cell}")
            seen_cells.add(cell)
            prices.append(PriceSpec(origin=o, destination=d, seat_class=cls, price=amount))
        node.done()
        if not prices:
            raise ScenarioValidationError(f"services[{i}].prices", "a service needs at least one priced cell")
        services.append(ServiceTemplate(service_id=sid, operator=operator, line=line_id,
                                        stop_times=stop_times, seats=tuple(seats),
                                        initial_prices=tuple(prices)))
    service_index = {s.service_id: s for s in services}
    if len(service_index) != len(services):
        raise ScenarioValidationError("services", "duplicate service ids")

    agents = []
    claimed: dict[str, str] = {}
    for i, item in enumerate(_as_list(root.take("agents"), "agents")):
        node = _Node(item, f"agents[{i}]")
        aid = _as_str(node.take("id"), _join(node.path, "id"))
        svc_ids = tuple(_as_str(s, f"{node.path}.services[{j}]")
                        for j, s in enumerate(_as_list(node.take("services"), _join(node.path, "services"))))
        node.done()
        if not svc_ids:
            raise ScenarioValidationError(_join(node.path, "services"), "agent must operate at least one service")
        for sid in svc_ids:
            if sid not in service_index:
                raise ScenarioValidationError(_join(node.path, "services"), f"unknown service {sid!r}")
            if sid in claimed:
                raise ScenarioValidationError(_join(node.path, "services"),
                                              f"service {sid!r} already operated by {claimed[sid]!r}")
            claimed[sid] = aid
        agents.append(AgentSpec(agent_id=aid, operated_service_ids=svc_ids))
    agent_ids = {a.agent_id for a in agents}
    if len(agent_ids) != len(agents):
        raise ScenarioValidationError("agents", "duplicate agent ids")
    for i, svc in enumerate(services):
        if svc.operator not in agent_ids:
            raise ScenarioValidationError(f"services[{i}].operator", f"unknown agent {svc.operator!r}")
        if claimed.get(svc.service_id) != svc.operator:
            raise ScenarioValidationError(f"services[{i}].operator",
                                          f"operator {svc.operator!r} does not list {svc.service_id!r}")

    all_seat_classes = {s.seat_class for svc in services for s in svc.seats}
    ptypes = []
    for i, item in enumerate(_as_list(root.take("passenger_types"), "passenger_types")):
        node = _Node(item, f"passenger_types[{i}]")
        tid = _as_str(node.take("id"), _join(node.path, "id"))
        aff_raw = node.take("operator_affinity")
        apath = _join(node.path, "operator_affinity")
        if not isinstance(aff_raw, dict):
            raise ScenarioValidationError(apath, "expected a mapping agent -> value")
        affinity = {}
        for agent, value in aff_raw.items():
            if agent not in agent_ids:
                raise ScenarioValidationError(f"{apath}.{agent}", f"unknown agent {agent!r}")
            affinity[str(agent)] = _as_float(value, f"{apath}.{agent}")
        missing = sorted(agent_ids - set(affinity))
        if missing:
            raise ScenarioValidationError(apath, f"missing affinity for agents {missing}")
        seat_raw = node.take("seat_utility")
        spath = _join(node.path, "seat_utility")
        if not isinstance(seat_raw, dict):
            raise ScenarioValidationError(spath, "expected a mapping seat class -> value")
        seat_utility = {str(k): _as_float(v, f"{spath}.{k}") for k, v in seat_raw.items()}
        missing_seats = sorted(all_seat_classes - set(seat_utility))
        if missing_seats:
            raise ScenarioValidationError(spath, f"missing utility for seat classes {missing_seats}")
        arrival = _parse_penalty(node.child("arrival_penalty"))
        departure = _parse_penalty(node.child("departure_penalty"))
        price_sens = _parse_penalty(node.child("price_sensitivity"))
        travel = _parse_penalty(node.child("travel_time_penalty"))
        transfer_time = _parse_penalty(node.child("transfer_time_penalty"))
        tc_node = node.child("transfer_count_penalty")
        per_transfer = _as_float(tc_node.take("per_transfer"), _join(tc_node.path, "per_transfer"))
        tc_node.done()
        if per_transfer < 0:
            raise ScenarioValidationError(_join(tc_node.path, "per_transfer"), "must be >= 0")
        noise = _parse_noise(node.child("noise"))
        anticipation = _parse_anticipation(node.child("purchase_anticipation", required=False))
        dep_window = _parse_window(node.child("preferred_departure_window", required=False),
                                   (0, MINUTES_PER_DAY - 1))
        arr_window = _parse_window(node.child("preferred_arrival_window", required=False),
                                   (0, MINUTES_PER_DAY - 1))
        node.done()
        ptypes.append(PassengerType(
            type_id=tid, operator_affinity=affinity, seat_utility=seat_utility,
            arrival_penalty=arrival, departure_penalty=departure, price_sensitivity=price_sens,
            travel_time_penalty=travel, transfer_time_penalty=transfer_time,
            transfer_count_penalty=per_transfer, noise=noise,
            purchase_anticipation=anticipation,
            preferred_departure_window=dep_window, preferred_arrival_window=arr_window))
    type_ids = {t.type_id for t in ptypes}
    if len(type_ids) != len(ptypes):
        raise ScenarioValidationError("passenger_types", "duplicate type ids")
    if not ptypes:
        raise ScenarioValidationError("passenger_types", "at least one passenger type required")

    markets = []
    seen_markets = set()
    for i, item in enumerate(_as_list(root.take("markets"), "markets")):
        node = _Node(item, f"markets[{i}]")
        o = _as_str(node.take("origin"), _join(node.path, "origin"))
        d = _as_str(node.take("destination"), _join(node.path, "destination"))
        if o not in station_set or d not in station_set:
            raise ScenarioValidationError(node.path, f"unknown station in market ({o!r}, {d!r})")
        if o == d:
            raise ScenarioValidationError(node.path, "market origin equals destination")
        if (o, d) in seen_markets:
            raise ScenarioValidationError(node.path, f"duplicate market ({o!r}, {d!r})")
        seen_markets.add((o, d))
        vnode = node.child("daily_volume")
        dist = _as_str(vnode.take("distribution"), _join(vnode.path, "distribution"))
        if dist == "poisson":
            mean = _as_float(vnode.take("mean"), _join(vnode.path, "mean"))
            if mean < 0:
                raise ScenarioValidationError(_join(vnode.path, "mean"), "mean must be >= 0")
            volume = VolumeSpec(distribution="poisson", mean=mean)
        elif dist == "constant":
            value = _as_int(vnode.take("value"), _join(vnode.path, "value"))
            if value < 0:
                raise ScenarioValidationError(_join(vnode.path, "value"), "value must be >= 0")
            volume = VolumeSpec(distribution="constant", value=value)
        else:
            raise ScenarioValidationError(_join(vnode.path, "distribution"),
                                          f"unknown distribution {dist!r}")
        vnode.done()
        mix_raw = node.take("type_mixture")
        mpath = _join(node.path, "type_mixture")
        if not isinstance(mix_raw, dict) or not mix_raw:
            raise ScenarioValidationError(mpath, "expected a non-empty mapping type -> probability")
        mixture = {}
        for tid, prob in mix_raw.items():
            if tid not in type_ids:
                raise ScenarioValidationError(f"{mpath}.{tid}", f"unknown passenger type {tid!r}")
            p = _as_float(prob, f"{mpath}.{tid}")
            if p < 0:
                raise ScenarioValidationError(f"{mpath}.{tid}", "probability must be >= 0")
            mixture[str(tid)] = p
        if abs(sum(mixture.values()) - 1.0) > 1e-9:
            raise ScenarioValidationError(mpath, "type mixture must sum to 1")
        node.done()
        markets.append(MarketDemandSpec(origin=o, destination=d, volume=volume, type_mixture=mixture))
    if not markets:
        raise ScenarioValidationError("markets", "at least one market required")
    if all(m.volume.expected_daily <= 0 for m in markets):
        raise ScenarioValidationError("markets", "at least one market needs positive expected demand")

    enode = root.child("episode")
    horizon = _as_int(enode.take("horizon_days"), _join(enode.path, "horizon_days"))
    if horizon < 1:
        raise ScenarioValidationError(_join(enode.path, "horizon_days"), "must be >= 1")
    mode = _as_str(enode.take("travel_date_mode", required=False, default="single-terminal-date"),
                   _join(enode.path, "travel_date_mode"))
    if mode not in TRAVEL_DATE_MODES:
        raise ScenarioValidationError(_join(enode.path, "travel_date_mode"),
                                      f"must be one of {TRAVEL_DATE_MODES}")
    expected_total = _as_float(enode.take("passengers_expected_total"),
                               _join(enode.path, "passengers_expected_total"))
    if expected_total <= 0:
        raise ScenarioValidationError(_join(enode.path, "passengers_expected_total"), "must be > 0")
    slot = _as_int(enode.take("time_slot_minutes", required=False, default=60),
                   _join(enode.path, "time_slot_minutes"))
    if slot < 1:
        raise ScenarioValidationError(_join(enode.path, "time_slot_minutes"), "must be >= 1")
    beta = _as_float(enode.take("price_scaling_percent", required=False, default=25.0),
                     _join(enode.path, "price_scaling_percent"))
    if beta <= 0:
        raise ScenarioValidationError(_join(enode.path, "price_scaling_percent"), "must be > 0")
    max_transfers = _as_int(enode.take("max_transfers", required=False, default=2),
                            _join(enode.path, "max_transfers"))
    if max_transfers < 0:
        raise ScenarioValidationError(_join(enode.path, "max_transfers"), "must be >= 0")
    enode.done()
    episode = EpisodeSpec(horizon_days=horizon, travel_date_mode=mode,
                          passengers_expected_total=expected_total,
                          time_slot_minutes=slot, price_scaling_percent=beta,
                          max_transfers=max_transfers)

    daily_total = sum(m.volume.expected_daily for m in markets)
    implied_total = daily_total * horizon
    if abs(implied_total - expected_total) > 1e-6 * max(1.0, expected_total):
        raise ScenarioValidationError(
            "episode.passengers_expected_total",
            f"declared total {expected_total} != horizon x sum of market means {implied_total}")

    root.done()
    return Scenario(schema_version=version, name=name, stations=stations,
                    corridors=tuple(corridors), lines=tuple(lines), agents=tuple(agents),
                    services=tuple(services), passenger_types=tuple(ptypes),
                    markets=tuple(markets), episode=episode,
                    min_transfer_minutes=min_transfer, calibration=calibration)


# ---------------------------------------------------------------------------
# Serialisation (round-trips through load_scenario)


def scenario_to_document(scenario: Scenario) -> dict:
    """Canonical plain-data form of a scenario (YAML-safe)."""

    def penalty(curve: PenaltyCurve) -> dict:
        if curve.form == "linear":
            return {"form": "linear", "slope": curve.slope}
        return {"form": "piecewise", "points": [[x, y] for x, y in curve.points]}

    def window(w: tuple[int, int]) -> dict:
        return {"earliest": format_clock(w[0]), "latest": format_clock(w[1])}

    doc: dict[str, Any] = {
        "schema_version": scenario.schema_version,
        "name": scenario.name,
    }
    if scenario.calibration is not None:
        doc["calibration"] = scenario.calibration
    doc.update({
        "min_transfer_minutes": scenario.min_transfer_minutes,
        "stations": list(scenario.stations),
        "corridors": [{"id": c.corridor_id, "stations": list(c.stations)} for c in scenario.corridors],
        "lines": [{"id": l.line_id, "corridor": l.corridor, "stops": list(l.stops)} for l in scenario.lines],
        "agents": [{"id": a.agent_id, "services": list(a.operated_service_ids)} for a in scenario.agents],
        "services": [
            {
                "id": s.service_id,
                "operator": s.operator,
                "line": s.line,
                "stop_times": [format_clock(t) for t in s.stop_times],
                "seats": [{"class": seat.seat_class, "capacity": seat.capacity} for seat in s.seats],
                "prices": [
                    {"origin": p.origin, "destination": p.destination,
                     "class": p.seat_class, "price": str(p.price)}
                    for p in s.initial_prices
                ],
            }
            for s in scenario.services
        ],
        "passenger_types": [
            {
                "id": t.type_id,
                "operator_affinity": dict(t.operator_affinity),
                "seat_utility": dict(t.seat_utility),
                "arrival_penalty": penalty(t.arrival_penalty),
                "departure_penalty": penalty(t.departure_penalty),
                "price_sensitivity": penalty(t.price_sensitivity),
                "travel_time_penalty": penalty(t.travel_time_penalty),
                "transfer_time_penalty": penalty(t.transfer_time_penalty),
                "transfer_count_penalty": {"per_transfer": t.transfer_count_penalty},
                "noise": {"distribution": t.noise.distribution, "scale": t.noise.scale},
                "purchase_anticipation": (
                    {"kind": "uniform"} if t.purchase_anticipation.kind == "uniform"
                    else {"kind": "weights",
                          "by_days_before": {d: w for d, w in t.purchase_anticipation.weights}}
                ),
                "preferred_departure_window": window(t.preferred_departure_window),
                "preferred_arrival_window": window(t.preferred_arrival_window),
            }
            for t in scenario.passenger_types
        ],
        "markets": [
            {
                "origin": m.origin,
                "destination": m.destination,
                "daily_volume": (
                    {"distribution": "poisson", "mean": m.volume.mean}
                    if m.volume.distribution == "poisson"
                    else {"distribution": "constant", "value": m.volume.value}
                ),
                "type_mixture": dict(m.type_mixture),
            }
            for m in scenario.markets
        ],
        "episode": {
            "horizon_days": scenario.episode.horizon_days,
            "travel_date_mode": scenario.episode.travel_date_mode,
            "passengers_expected_total": scenario.episode.passengers_expected_total,
            "time_slot_minutes": scenario.episode.time_slot_minutes,
            "price_scaling_percent": scenario.episode.price_scaling_percent,
            "max_transfers": scenario.episode.max_transfers,
        },
    })
    return doc


def serialize_scenario(scenario: Scenario) -> str:
    return yaml.safe_dump(scenario_to_document(scenario), sort_keys=False)


def preset(name: str) -> Scenario:
    """Load one of the built-in scenarios ("business", "business_student")."""
    if name not in PRESET_NAMES:
        raise UnknownPresetError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")
    text = importlib.resources.files("railmarket.presets").joinpath(f"{name}.yaml").read_text()
    return load_scenario(text)


def resolve_scenario(spec: str) -> Scenario:
    """Resolve a CLI-style scenario argument: preset name or path to a file."""
    if spec in PRESET_NAMES:
        return preset(spec)
    try:
        with open(spec, "r") as fh:
            return load_scenario(fh.read())
    except FileNotFoundError:
        raise UnknownPresetError(
            f"{spec!r} is neither a preset ({', '.join(PRESET_NAMES)}) nor a readable file") from None
