"""Demand sampling: volumes, type mixtures, travel dates, determinism."""

import numpy as np
import pytest
from scipy import stats

from railmarket import preset, sample_daily_demand

from conftest import default_type, make_scenario_doc, scenario_from_doc


def _rng(seed):
    return np.random.default_rng(seed)


def test_degenerate_constant_volume():
    doc = make_scenario_doc()
    doc["markets"][0]["daily_volume"] = {"distribution": "constant", "value": 3}
    doc["episode"]["passengers_expected_total"] = 3.0
    scenario = scenario_from_doc(doc)
    passengers = sample_daily_demand(scenario, 1, _rng(0))
    assert len(passengers) == 3
    assert all(p.type_id == "rider" for p in passengers)
    assert all(p.purchase_day == 1 for p in passengers)
    assert all(p.desired_travel_date == 2 for p in passengers)


def test_day_out_of_range():
    scenario = scenario_from_doc(make_scenario_doc())
    with pytest.raises(ValueError):
        sample_daily_demand(scenario, 0, _rng(0))
    with pytest.raises(ValueError):
        sample_daily_demand(scenario, 2, _rng(0))


def test_business_preset_episode_total_near_110():
    scenario = preset("business")
    totals = []
    for seed in range(1000):
        rng = _rng(seed)
        totals.append(sum(len(sample_daily_demand(scenario, day, rng))
                          for day in range(1, 6)))
    assert abs(np.mean(totals) - 110.0) <= 5.0


def test_mixture_frequencies_converge():
    doc = make_scenario_doc(
        passenger_types=[default_type("a", {"op": 10.0}), default_type("b", {"op": 10.0})])
    doc["markets"][0]["daily_volume"] = {"distribution": "constant", "value": 100000}
    doc["markets"][0]["type_mixture"] = {"a": 0.6, "b": 0.4}
    doc["episode"]["passengers_expected_total"] = 100000.0
    scenario = scenario_from_doc(doc)
    passengers = sample_daily_demand(scenario, 1, _rng(12))
    share_a = sum(p.type_id == "a" for p in passengers) / len(passengers)
    assert abs(share_a - 0.6) <= 0.01
    observed = [sum(p.type_id == "a" for p in passengers),
                sum(p.type_id == "b" for p in passengers)]
    expected = [0.6 * len(passengers), 0.4 * len(passengers)]
    assert stats.chisquare(observed, expected).pvalue > 0.01


def test_determinism_bit_for_bit():
    scenario = preset("business_student")
    for day in (1, 4, 7):
        assert (sample_daily_demand(scenario, day, _rng(99))
                == sample_daily_demand(scenario, day, _rng(99)))


def test_per_passenger_date_mode_dates_in_range():
    doc = make_scenario_doc(horizon_days=5, travel_date_mode="per-passenger-date")
    doc["markets"][0]["daily_volume"] = {"distribution": "constant", "value": 50}
    doc["episode"]["passengers_expected_total"] = 250.0
    scenario = scenario_from_doc(doc)
    for day in (1, 3, 5):
        for p in sample_daily_demand(scenario, day, _rng(5)):
            assert p.purchase_day == day
            assert day <= p.desired_travel_date <= 5


def test_anticipation_shifts_purchase_timing():
    # one early-booking and one late-booking type, equal mixture: the late
    # type should dominate the last booking day and vice versa
    early = default_type("early", {"op": 10.0},
                         anticipation={"kind": "weights", "by_days_before": {5: 0.9, 1: 0.1}})
    late = default_type("late", {"op": 10.0},
                        anticipation={"kind": "weights", "by_days_before": {5: 0.1, 1: 0.9}})
    doc = make_scenario_doc(horizon_days=5, passenger_types=[early, late])
    doc["markets"][0]["daily_volume"] = {"distribution": "constant", "value": 2000}
    doc["markets"][0]["type_mixture"] = {"early": 0.5, "late": 0.5}
    doc["episode"]["passengers_expected_total"] = 10000.0
    scenario = scenario_from_doc(doc)
    rng = _rng(21)
    first_day = sample_daily_demand(scenario, 1, rng)
    last_day = sample_daily_demand(scenario, 5, rng)
    share_early_first = sum(p.type_id == "early" for p in first_day) / len(first_day)
    share_early_last = sum(p.type_id == "early" for p in last_day) / len(last_day)
    assert share_early_first > 0.8
    assert share_early_last < 0.2


def test_preferred_times_respect_windows():
    t = default_type("rider", {"op": 10.0})
    t["preferred_departure_window"] = {"earliest": "07:00", "latest": "09:00"}
    t["preferred_arrival_window"] = {"earliest": "10:00", "latest": "11:00"}
    doc = make_scenario_doc(passenger_types=[t])
    doc["markets"][0]["daily_volume"] = {"distribution": "constant", "value": 500}
    doc["episode"]["passengers_expected_total"] = 500.0
    scenario = scenario_from_doc(doc)
    for p in sample_daily_demand(scenario, 1, _rng(3)):
        assert 420 <= p.preferred_departure <= 540
        assert 600 <= p.preferred_arrival <= 660
