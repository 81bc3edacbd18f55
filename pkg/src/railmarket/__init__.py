"""railmarket: a deterministic multi-agent dynamic-pricing simulator for
high-speed railway networks.

Operators (agents) reprice their services once per simulated day; passenger
demand arrives from per-market distributions, evaluates journeys through a
random-utility choice model, and buys tickets or opts out. The whole system
is exposed as a partially observable Markov game with per-agent price
actions and exact profit-delta rewards.
"""

__version__ = "0.1.0"

from .agents import (
    Policy,
    QConfig,
    RandomPolicy,
    ScriptedPolicy,
    TabularQPolicy,
    log_policy_distribution,
)
from .choice import Choice, UtilityBreakdown, choose_journey, journey_utility, screen_seats
from .demand import Passenger, sample_daily_demand
from .env import EpisodeLog, PricingEnv, StepResult, discounted_return
from .errors import RailMarketError
from .harness import RunConfig, RunResult, run, run_episode
from .journeys import (
    Journey,
    Leg,
    ValidityReport,
    enumerate_journeys,
    n_transfers,
    total_transfer_time,
    total_travel_time,
    validate_journey,
)
from .metrics import RewardNormalizer, attention_entropy, episode_report, equality
from .scenario import (
    Scenario,
    load_scenario,
    preset,
    resolve_scenario,
    serialize_scenario,
)
from .server import ProtocolServer, serve_stdio
from .supply import SupplyState, discretize_action, sell_ticket, tickets_available, updated_price

__all__ = [
    "__version__",
    "Choice",
    "EpisodeLog",
    "Journey",
    "Leg",
    "Passenger",
    "Policy",
    "PricingEnv",
    "ProtocolServer",
    "QConfig",
    "RailMarketError",
    "RandomPolicy",
    "RewardNormalizer",
    "RunConfig",
    "RunResult",
    "Scenario",
    "ScriptedPolicy",
    "StepResult",
    "SupplyState",
    "TabularQPolicy",
    "UtilityBreakdown",
    "ValidityReport",
    "attention_entropy",
    "choose_journey",
    "discounted_return",
    "discretize_action",
    "enumerate_journeys",
    "episode_report",
    "equality",
    "journey_utility",
    "load_scenario",
    "log_policy_distribution",
    "n_transfers",
    "preset",
    "resolve_scenario",
    "run",
    "run_episode",
    "sample_daily_demand",
    "screen_seats",
    "sell_ticket",
    "serialize_scenario",
    "serve_stdio",
    "tickets_available",
    "total_transfer_time",
    "total_travel_time",
    "updated_price",
    "validate_journey",
]
