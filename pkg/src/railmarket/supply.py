"""Mutable market state: service instances, seat inventory, prices, revenue.

Prices are exact decimal currency with two fractional digits; every mutation
quantizes with round-half-even, so identical action sequences reproduce
identical ledgers on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext

from .errors import (
    MalformedActionError,
    NotOwnerError,
    OutOfRangeError,
    SoldOutError,
    UnknownCellError,
)
from .scenario import Scenario, ServiceTemplate

TWO_PLACES = Decimal("0.01")

# Cell key: (origin, destination, seat_class)
CellKey = tuple[str, str, str]

DISCRETE_LEVELS = 11
_DISCRETE_ALPHAS = tuple((level - 5) / 5.0 for level in range(DISCRETE_LEVELS))


def discretize_action(level: int) -> float:
    """Map a discrete level 0..10 onto alpha in {-1.0, -0.8, ..., +0.8, +1.0}.

    Level 5 is "no price adjustment"; 0 and 10 are the maximum reduction and
    increase.
    """
    if not isinstance(level, int) or isinstance(level, bool) or not 0 <= level < DISCRETE_LEVELS:
        raise OutOfRangeError(f"discrete level must be an integer in [0, 10], got {level!r}")
    return _DISCRETE_ALPHAS[level]


def updated_price(price: Decimal, alpha: float, beta: float) -> Decimal:
    """price * (1 + alpha*beta/100), clipped to >= 0, half-even to 2 digits."""
    with localcontext() as ctx:
        ctx.prec = 50
        factor = 1 + Decimal(repr(alpha)) * Decimal(repr(beta)) / 100
        raw = price * factor
    if raw < 0:
        raw = Decimal(0)
    return raw.quantize(TWO_PLACES, rounding=ROUND_HALF_EVEN)


@dataclass
class SeatCell:
    """Inventory and price of one (origin, destination, seat class) cell."""

    price: Decimal
    capacity: int
    tickets_sold: int = 0

    @property
    def available(self) -> bool:
        return self.tickets_sold < self.capacity


@dataclass
class SaleRecord:
    day: int
    instance_id: str
    cell: CellKey
    price_paid: Decimal


@dataclass
class ServiceInstance:
    """One operated run of a service template on a travel date."""

    instance_id: str
    service_id: str
    operator: str
    travel_date: int
    line_stops: tuple[str, ...]
    stop_times: tuple[int, ...]
    cells: dict[CellKey, SeatCell]
    cumulative_revenue: Decimal = Decimal("0.00")

    def cell(self, origin: str, destination: str, seat_class: str) -> SeatCell:
        key = (origin, destination, seat_class)
        if key not in self.cells:
            raise UnknownCellError(f"service {self.instance_id} has no cell {key}")
        return self.cells[key]

    def stop_time(self, station: str) -> int:
        return self.stop_times[self.line_stops.index(station)]

    def seat_classes_for(self, origin: str, destination: str) -> tuple[str, ...]:
        return tuple(c[2] for c in self.cells if c[0] == origin and c[1] == destination)


def tickets_available(instance: ServiceInstance, origin: str, destination: str,
                      seat_class: str) -> bool:
    """True iff the cell still has unsold capacity."""
    return instance.cell(origin, destination, seat_class).available


def sell_ticket(instance: ServiceInstance, origin: str, destination: str,
                seat_class: str) -> Decimal:
    """Sell one ticket at the cell's current price; returns the price paid."""
    cell = instance.cell(origin, destination, seat_class)
    if not cell.available:
        raise SoldOutError(
            f"cell ({origin}, {destination}, {seat_class}) of {instance.instance_id} is sold out")
    cell.tickets_sold += 1
    instance.cumulative_revenue += cell.price
    return cell.price


class SupplyState:
    """All service instances of one episode, plus the exact sales ledger."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.instances: dict[str, ServiceInstance] = {}
        self.sales: list[SaleRecord] = []
        horizon = scenario.episode.horizon_days
        if scenario.episode.travel_date_mode == "single-terminal-date":
            travel_dates = [horizon + 1]
        else:
            travel_dates = list(range(1, horizon + 1))
        for template in scenario.services:
            for date in travel_dates:
                instance = self._materialize(template, date)
                self.instances[instance.instance_id] = instance

    def _materialize(self, template: ServiceTemplate, date: int) -> ServiceInstance:
        line = self.scenario.line_by_id(template.line)
        capacities = {s.seat_class: s.capacity for s in template.seats}
        cells = {
            (p.origin, p.destination, p.seat_class): SeatCell(
                price=p.price, capacity=capacities[p.seat_class])
            for p in template.initial_prices
        }
        return ServiceInstance(
            instance_id=f"{template.service_id}@{date}",
            service_id=template.service_id,
            operator=template.operator,
            travel_date=date,
            line_stops=line.stops,
            stop_times=template.stop_times,
            cells=cells,
        )

    def instances_on(self, travel_date: int) -> list[ServiceInstance]:
        return [inst for inst in self.instances.values() if inst.travel_date == travel_date]

    def instances_of_template(self, service_id: str) -> list[ServiceInstance]:
        return [inst for inst in self.instances.values() if inst.service_id == service_id]

    def agent_revenue(self, agent_id: str) -> Decimal:
        total = Decimal("0.00")
        for inst in self.instances.values():
            if inst.operator == agent_id:
                total += inst.cumulative_revenue
        return total

    def total_revenue(self) -> Decimal:
        total = Decimal("0.00")
        for inst in self.instances.values():
            total += inst.cumulative_revenue
        return total

    def agent_cells(self, agent_id: str) -> list[tuple[str, CellKey]]:
        """Priced cells operated by an agent, in declaration order.

        One entry per (service template, cell); in per-passenger-date mode a
        price action component applies to that cell on every travel date.
        """
        out = []
        for template in self.scenario.services:
            if template.operator != agent_id:
                continue
            for p in template.initial_prices:
                out.append((template.service_id, (p.origin, p.destination, p.seat_class)))
        return out

    def apply_price_action(self, agent_id: str, alphas: dict[tuple[str, CellKey], float],
                           beta: float) -> None:
        """Apply relative price updates to the agent's own cells.

        ``alphas`` maps (service template id, cell) -> alpha in [-1, 1]. Every
        touched instance must be operated by ``agent_id``.
        """
        if beta <= 0:
            raise MalformedActionError(f"price scaling percent must be > 0, got {beta}")
        for (service_id, cell_key), alpha in alphas.items():
            if not -1.0 <= alpha <= 1.0:
                raise MalformedActionError(f"alpha {alpha} outside [-1, 1] for {service_id} {cell_key}")
            instances = self.instances_of_template(service_id)
            if not instances:
                raise UnknownCellError(f"unknown service {service_id!r}")
            for inst in instances:
                if inst.operator != agent_id:
                    raise NotOwnerError(
                        f"agent {agent_id!r} cannot price service {service_id!r} "
                        f"operated by {inst.operator!r}")
                cell = inst.cell(*cell_key)
                cell.price = updated_price(cell.price, alpha, beta)

    def record_sale(self, day: int, instance: ServiceInstance, cell: CellKey,
                    price_paid: Decimal) -> None:
        self.sales.append(SaleRecord(day=day, instance_id=instance.instance_id,
                                     cell=cell, price_paid=price_paid))

    def ledger_total(self) -> Decimal:
        total = Decimal("0.00")
        for sale in self.sales:
            total += sale.price_paid
        return total
