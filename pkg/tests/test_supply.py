"""Supply state: price algebra, sales, inventory, ownership."""

from decimal import Decimal

import numpy as np
import pytest

from railmarket.errors import (
    MalformedActionError,
    NotOwnerError,
    OutOfRangeError,
    SoldOutError,
    UnknownCellError,
)
from railmarket.supply import (
    SupplyState,
    discretize_action,
    sell_ticket,
    tickets_available,
    updated_price,
)

from conftest import make_scenario_doc, scenario_from_doc


def _micro_supply(capacity=100, price="50.00"):
    doc = make_scenario_doc()
    doc["services"][0]["seats"][0]["capacity"] = capacity
    doc["services"][0]["prices"][0]["price"] = price
    return SupplyState(scenario_from_doc(doc))


CELL = ("X", "Y", "standard")


def test_price_update_examples():
    assert updated_price(Decimal("100.00"), 1.0, 25.0) == Decimal("125.00")
    assert updated_price(Decimal("100.00"), 0.0, 25.0) == Decimal("100.00")
    assert updated_price(Decimal("0.00"), -1.0, 25.0) == Decimal("0.00")


def test_price_update_matches_decimal_formula():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        p = Decimal(f"{rng.uniform(0, 500):.2f}")
        alpha = float(rng.uniform(-1, 1))
        beta = float(rng.uniform(1, 60))
        expected = (p * (1 + Decimal(repr(alpha)) * Decimal(repr(beta)) / 100))
        expected = max(expected, Decimal(0)).quantize(Decimal("0.01"))
        assert updated_price(p, alpha, beta) == expected


def test_prices_never_negative_under_action_sequences():
    supply = _micro_supply(price="1.00")
    rng = np.random.default_rng(3)
    for _ in range(200):
        alpha = float(rng.uniform(-1, 1))
        supply.apply_price_action("op", {("svc", CELL): alpha}, 25.0)
        assert supply.instances["svc@2"].cells[CELL].price >= 0


def test_discretize_action_levels():
    expected = [-1.0, -0.8, -0.6, -0.4, -0.2, 0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
    assert [discretize_action(level) for level in range(11)] == expected
    assert discretize_action(5) == 0.0    # no price adjustment
    assert discretize_action(0) == -1.0   # maximum price reduction
    assert discretize_action(10) == 1.0   # maximum price increase
    for bad in (-1, 11, 2.5, "3"):
        with pytest.raises(OutOfRangeError):
            discretize_action(bad)


def test_sell_ticket_and_sold_out():
    supply = _micro_supply(capacity=1)
    inst = supply.instances["svc@2"]
    assert tickets_available(inst, *CELL)
    price = sell_ticket(inst, *CELL)
    assert price == Decimal("50.00")
    assert inst.cells[CELL].tickets_sold == 1
    assert not tickets_available(inst, *CELL)
    with pytest.raises(SoldOutError):
        sell_ticket(inst, *CELL)


def test_tickets_available_zero_capacity():
    supply = _micro_supply(capacity=0)
    assert not tickets_available(supply.instances["svc@2"], *CELL)


def test_unknown_cell():
    supply = _micro_supply()
    with pytest.raises(UnknownCellError):
        tickets_available(supply.instances["svc@2"], "X", "Y", "luxe")


def test_sequential_sales_revenue_chain():
    # sell at 50, raise by alpha=+1 (beta=25) to 62.50, sell again: 112.50
    supply = _micro_supply(capacity=2)
    inst = supply.instances["svc@2"]
    first = sell_ticket(inst, *CELL)
    supply.apply_price_action("op", {("svc", CELL): 1.0}, 25.0)
    second = sell_ticket(inst, *CELL)
    assert (first, second) == (Decimal("50.00"), Decimal("62.50"))
    assert inst.cumulative_revenue == Decimal("112.50")


def test_revenue_equals_sum_of_sales():
    supply = _micro_supply(capacity=50)
    inst = supply.instances["svc@2"]
    rng = np.random.default_rng(11)
    paid = []
    for _ in range(30):
        supply.apply_price_action("op", {("svc", CELL): float(rng.uniform(-1, 1))}, 25.0)
        paid.append(sell_ticket(inst, *CELL))
    assert inst.cumulative_revenue == sum(paid, Decimal(0))


def test_foreign_service_rejected():
    doc = make_scenario_doc(
        stations=("X", "Y", "Z"),
        corridor_stations=("X", "Y", "Z"),
        services=[
            {"id": "mine", "operator": "op", "line": "l1", "_stops": ["X", "Y"],
             "stop_times": ["08:00", "09:00"],
             "seats": [{"class": "standard", "capacity": 10}],
             "prices": [{"origin": "X", "destination": "Y", "class": "standard", "price": "10.00"}]},
            {"id": "theirs", "operator": "other", "line": "l2", "_stops": ["Y", "Z"],
             "stop_times": ["10:00", "11:00"],
             "seats": [{"class": "standard", "capacity": 10}],
             "prices": [{"origin": "Y", "destination": "Z", "class": "standard", "price": "10.00"}]},
        ],
        agents=[{"id": "op", "services": ["mine"]},
                {"id": "other", "services": ["theirs"]}],
    )
    supply = SupplyState(scenario_from_doc(doc))
    before = supply.instances["theirs@2"].cells[("Y", "Z", "standard")].price
    with pytest.raises(NotOwnerError):
        supply.apply_price_action("op", {("theirs", ("Y", "Z", "standard")): 1.0}, 25.0)
    assert supply.instances["theirs@2"].cells[("Y", "Z", "standard")].price == before


def test_alpha_out_of_range_rejected():
    supply = _micro_supply()
    with pytest.raises(MalformedActionError):
        supply.apply_price_action("op", {("svc", CELL): 1.5}, 25.0)


def test_per_passenger_date_mode_materializes_all_dates():
    doc = make_scenario_doc(horizon_days=3, travel_date_mode="per-passenger-date")
    supply = SupplyState(scenario_from_doc(doc))
    assert sorted(supply.instances) == ["svc@1", "svc@2", "svc@3"]
    # one action component updates every date instance of the template
    supply.apply_price_action("op", {("svc", CELL): 1.0}, 25.0)
    for inst in supply.instances.values():
        assert inst.cells[CELL].price == Decimal("62.50")
