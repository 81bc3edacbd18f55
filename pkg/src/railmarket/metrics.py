"""Evaluation metrics: profit equality, attention entropy, reward
normalisation, and per-episode reports."""

from __future__ import annotations

import math
from decimal import Decimal

import numpy as np

from .env import EpisodeLog
from .errors import (
    DegenerateInputError,
    IncompleteEpisodeError,
    MalformedWeightsError,
)


def equality(profits) -> float:
    """Profit-equality metric in [0, 1]; 1 means perfectly equal profits.

    E = 1 - sum_ij |R_i - R_j| / (2 N sum_i R_i), over nonnegative per-agent
    profits. Scale-invariant: equality(c*R) == equality(R) for c > 0.
    """
    values = np.asarray([float(p) for p in profits], dtype=float)
    if values.ndim != 1 or values.size < 2:
        raise ValueError("equality needs a flat vector of at least 2 profits")
    if np.any(values < 0):
        raise ValueError("profits must be nonnegative")
    total = values.sum()
    if total <= 0.0:
        raise DegenerateInputError("all-zero profits carry no distribution information")
    pairwise = np.abs(values[:, None] - values[None, :]).sum()
    return float(1.0 - pairwise / (2 * values.size * total))


def attention_entropy(weights, eps: float = 1e-8):
    """Head- and time-averaged entropy of attention weight distributions.

    ``weights`` has shape (heads K, steps T, targets N) for one agent, or
    (agents, K, T, N) for a batch; each (..., t, :) row must be a probability
    vector. Returns a float or a per-agent vector, in nats:

        H_i = (1/K) sum_k ( -(1/T) sum_t sum_j a * log(a + eps) )
    """
    arr = np.asarray(weights, dtype=float)
    if arr.ndim not in (3, 4):
        raise MalformedWeightsError(f"expected (K,T,N) or (agents,K,T,N), got shape {arr.shape}")
    if np.any(arr < 0):
        raise MalformedWeightsError("attention weights must be nonnegative")
    row_sums = arr.sum(axis=-1)
    if np.any(np.abs(row_sums - 1.0) > 1e-6):
        raise MalformedWeightsError("attention weights must sum to 1 over targets")
    per_row = -(arr * np.log(arr + eps)).sum(axis=-1)   # (..., K, T)
    per_head = per_row.mean(axis=-1)                    # (..., K)
    result = per_head.mean(axis=-1)
    if arr.ndim == 3:
        return float(result)
    return result


class RewardNormalizer:
    """Streaming reward normaliser: (r - running mean) / sqrt(running var + eps).

    Single-pass (Welford) statistics; the update includes the incoming
    reward before normalising it. Population variance, matching a two-pass
    batch computation.
    """

    def __init__(self, epsilon: float = 1e-8):
        if epsilon <= 0:
            raise ValueError("epsilon must be > 0")
        self.epsilon = epsilon
        self.reset()

    def reset(self) -> None:
        self.count = 0
        self.mean = 0.0
        self._m2 = 0.0

    @property
    def variance(self) -> float:
        return self._m2 / self.count if self.count else 0.0

    def update_and_normalize(self, reward: float) -> float:
        r = float(reward)
        self.count += 1
        delta = r - self.mean
        self.mean += delta / self.count
        self._m2 += delta * (r - self.mean)
        return (r - self.mean) / math.sqrt(self.variance + self.epsilon)


def episode_report(log: EpisodeLog) -> dict:
    """Aggregate one completed episode into the reported quantities.

    Mean passenger utility is conditioned on travellers (the headline
    number); the all-passengers variant, counting opt-outs as 0, is emitted
    alongside.
    """
    if not log.complete:
        raise IncompleteEpisodeError(
            f"episode has {len(log.days)} of {log.horizon_days} days")
    totals = {a: Decimal("0.00") for a in log.agent_ids}
    for day in log.days:
        for agent, reward in day.rewards.items():
            totals[agent] += reward
    outcomes = [o for day in log.days for o in day.outcomes]
    generated = len(outcomes)
    travellers = [o for o in outcomes if o.travelled]
    utilities = [o.utility for o in travellers]
    per_type: dict[str, dict[str, int]] = {}
    for o in outcomes:
        slot = per_type.setdefault(o.type_id, {"generated": 0, "travelled": 0})
        slot["generated"] += 1
        slot["travelled"] += int(o.travelled)
    percent_per_type = {
        t: (100.0 * v["travelled"] / v["generated"]) if v["generated"] else 0.0
        for t, v in per_type.items()
    }
    return {
        "scenario": log.scenario_name,
        "total_profit": {a: float(totals[a]) for a in log.agent_ids},
        "total_profit_exact": {a: str(totals[a]) for a in log.agent_ids},
        "passengers_generated": generated,
        "passengers_travelled": len(travellers),
        "percent_travelling": (100.0 * len(travellers) / generated) if generated else 0.0,
        "percent_travelling_per_type": percent_per_type,
        "mean_utility_travellers": (sum(utilities) / len(utilities)) if utilities else None,
        "mean_utility_all_generated": (sum(utilities) / generated) if generated else None,
        "utility_undefined": not utilities,
        "utility_conditioning": "travellers_only",
    }
