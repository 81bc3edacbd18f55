"""Batch episode runner: seeded parallel environment instances, baseline
policies, and machine-readable reports.

Per base seed, instance r derives its environment seed as seed + r*1000 in
train mode and seed + r*100000 in eval mode. The instance plan (how episodes
are split across instances) is independent of how many worker threads
execute it, so parallel and sequential runs of the same plan produce
byte-identical outputs. Nothing in the output embeds wall-clock time.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .agents import Policy, RandomPolicy, ScriptedPolicy, TabularQPolicy, log_policy_distribution
from .env import PricingEnv
from .errors import InstanceRunError
from .metrics import episode_report
from .scenario import Scenario, serialize_scenario

TRAIN_SEED_STRIDE = 1000
EVAL_SEED_STRIDE = 100000


@dataclass
class RunConfig:
    scenario: Scenario
    policy: str = "random"            # random | scripted:<path> | tabular-q
    seeds: tuple[int, ...] = (0,)
    episodes: int = 1                 # episodes per base seed (split across instances)
    parallel_instances: int = 1
    mode: str = "eval"                # train | eval
    action_mode: str = "continuous"   # continuous | discrete
    out_dir: Path | None = None
    workers: int | None = None        # execution threads; None = parallel_instances
    keep_traces: bool = False

    def instance_seed(self, base_seed: int, instance: int) -> int:
        stride = TRAIN_SEED_STRIDE if self.mode == "train" else EVAL_SEED_STRIDE
        return base_seed + instance * stride


@dataclass
class EpisodeRecord:
    seed: int
    instance: int
    episode: int
    report: dict
    trace: dict | None = None


@dataclass
class RunResult:
    records: list[EpisodeRecord]
    summary: dict
    manifest: dict
    policy_distribution: dict | None = None


def make_policy(spec: str, action_space: dict, rng: np.random.Generator,
                mode: str) -> Policy:
    if spec == "random":
        return RandomPolicy(action_space, rng)
    if spec.startswith("scripted:"):
        return ScriptedPolicy.from_file(action_space, spec.split(":", 1)[1])
    if spec == "tabular-q":
        from .agents import QConfig
        epsilon = 0.1 if mode == "train" else 0.0
        return TabularQPolicy(action_space, rng, QConfig(epsilon=epsilon))
    raise ValueError(f"unknown policy spec {spec!r}")


def run_episode(env: PricingEnv, policies: dict[str, Policy], seed: int | None,
                collect_trace: bool = False) -> tuple[dict, dict | None]:
    """One full episode; returns (episode report, optional trace)."""
    observations = env.reset(seed)
    for policy in policies.values():
        policy.begin_episode()
    actions_trace: list[dict] = []
    rewards_trace: list[dict] = []
    while not env.terminal:
        joint = {agent: policies[agent].act(observations[agent]) for agent in env.agent_ids}
        result = env.step(joint)
        for agent in env.agent_ids:
            policies[agent].observe_transition(
                observations[agent], joint[agent], float(result.rewards[agent]),
                result.observations[agent], result.terminal)
        if collect_trace:
            actions_trace.append(joint)
            rewards_trace.append({a: float(r) for a, r in result.rewards.items()})
        observations = result.observations
    trace = None
    if collect_trace:
        trace = {
            "actions": actions_trace,
            "rewards": rewards_trace,
            "spaces": {a: env.action_space(a) for a in env.agent_ids},
        }
    return episode_report(env.episode_log), trace


def _run_instance(config: RunConfig, base_seed: int, instance: int,
                  episodes: int, collect_traces: bool) -> list[EpisodeRecord]:
    env = PricingEnv(config.scenario, action_mode=config.action_mode)
    instance_seed = config.instance_seed(base_seed, instance)
    policies = {
        agent: make_policy(
            config.policy, env.action_space(agent),
            np.random.Generator(np.random.PCG64(np.random.SeedSequence([instance_seed, 7, i]))),
            config.mode)
        for i, agent in enumerate(env.agent_ids)
    }
    records = []
    for episode in range(episodes):
        seed = instance_seed if episode == 0 else None
        try:
            report, trace = run_episode(env, policies, seed, collect_trace=collect_traces)
        except Exception as exc:
            raise InstanceRunError(
                f"seed {base_seed}, instance {instance}, episode {episode}: {exc}") from exc
        records.append(EpisodeRecord(seed=base_seed, instance=instance,
                                     episode=episode, report=report, trace=trace))
    return records


def _episode_split(total: int, instances: int) -> list[int]:
    base, rem = divmod(total, instances)
    return [base + (1 if r < rem else 0) for r in range(instances)]


def run(config: RunConfig) -> RunResult:
    """Execute the full seeded batch and (optionally) write report files."""
    if config.parallel_instances < 1:
        raise ValueError("parallel_instances must be >= 1")
    if config.episodes < 1:
        raise ValueError("episodes must be >= 1")
    if config.mode not in ("train", "eval"):
        raise ValueError(f"mode must be train or eval, got {config.mode!r}")

    collect_traces = config.keep_traces or config.episodes == 1 or config.action_mode == "discrete"
    split = _episode_split(config.episodes, config.parallel_instances)
    tasks = [
        (base_seed, instance, count)
        for base_seed in config.seeds
        for instance, count in enumerate(split)
        if count > 0
    ]
    workers = config.workers or config.parallel_instances
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(
                lambda t: _run_instance(config, t[0], t[1], t[2], collect_traces), tasks))
    else:
        batches = [_run_instance(config, *t, collect_traces) for t in tasks]
    records = [record for batch in batches for record in batch]

    summary = _summarize(config, records)
    manifest = _manifest(config)
    distribution = None
    if config.action_mode == "discrete":
        traces = [r.trace for r in records if r.trace]
        if traces:
            distribution = log_policy_distribution(traces)
    result = RunResult(records=records, summary=summary, manifest=manifest,
                       policy_distribution=distribution)
    if config.out_dir is not None:
        _write_outputs(config, result)
    return result


def _summarize(config: RunConfig, records: list[EpisodeRecord]) -> dict:
    agents = config.scenario.agent_ids
    per_seed = []
    for base_seed in config.seeds:
        reports = [r.report for r in records if r.seed == base_seed]
        profits = {a: float(np.mean([rep["total_profit"][a] for rep in reports])) for a in agents}
        travelling = float(np.mean([rep["percent_travelling"] for rep in reports]))
        utilities = [rep["mean_utility_travellers"] for rep in reports
                     if rep["mean_utility_travellers"] is not None]
        per_seed.append({
            "seed": base_seed,
            "episodes": len(reports),
            "mean_total_profit": profits,
            "mean_total_profit_all_agents": float(sum(profits.values())),
            "mean_percent_travelling": travelling,
            "mean_utility_travellers": float(np.mean(utilities)) if utilities else None,
        })

    def across(key, sub=None):
        values = []
        for row in per_seed:
            v = row[key] if sub is None else row[key][sub]
            if v is None:
                return None
            values.append(v)
        return {"mean": float(np.mean(values)), "sd": float(np.std(values))}

    return {
        "per_seed": per_seed,
        "aggregate": {
            "total_profit": {a: across("mean_total_profit", a) for a in agents},
            "total_profit_all_agents": across("mean_total_profit_all_agents"),
            "percent_travelling": across("mean_percent_travelling"),
            "mean_utility_travellers": across("mean_utility_travellers"),
        },
        "sd_convention": "population (ddof=0) across base seeds",
    }


def _manifest(config: RunConfig) -> dict:
    scenario_text = serialize_scenario(config.scenario)
    return {
        "package_version": __version__,
        "scenario_name": config.scenario.name,
        "scenario_sha256": hashlib.sha256(scenario_text.encode()).hexdigest(),
        "policy": config.policy,
        "seeds": list(config.seeds),
        "episodes_per_seed": config.episodes,
        "parallel_instances": config.parallel_instances,
        "mode": config.mode,
        "action_mode": config.action_mode,
        "seed_strides": {"train": TRAIN_SEED_STRIDE, "eval": EVAL_SEED_STRIDE},
    }


def _write_outputs(config: RunConfig, result: RunResult) -> None:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "results.jsonl", "w") as fh:
        for record in result.records:
            fh.write(json.dumps({
                "seed": record.seed, "instance": record.instance,
                "episode": record.episode, "report": record.report,
            }, sort_keys=True) + "\n")
    with open(out / "summary.json", "w") as fh:
        json.dump(result.summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(out / "manifest.json", "w") as fh:
        json.dump(result.manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if config.episodes == 1:
        with open(out / "trace.jsonl", "w") as fh:
            for record in result.records:
                if record.trace is not None:
                    fh.write(json.dumps({
                        "seed": record.seed, "instance": record.instance,
                        "actions": record.trace["actions"],
                        "rewards": record.trace["rewards"],
                    }, sort_keys=True) + "\n")
    if result.policy_distribution is not None:
        with open(out / "policy_distribution.json", "w") as fh:
            json.dump(result.policy_distribution, fh, indent=2, sort_keys=True)
            fh.write("\n")
    _write_summary_table(out / "summary.txt", result.summary)


def _write_summary_table(path: Path, summary: dict) -> None:
    lines = ["agent            profit mean       profit sd"]
    for agent, stats in sorted(summary["aggregate"]["total_profit"].items()):
        lines.append(f"{agent:<12} {stats['mean']:>15.2f} {stats['sd']:>15.2f}")
    total = summary["aggregate"]["total_profit_all_agents"]
    lines.append(f"{'TOTAL':<12} {total['mean']:>15.2f} {total['sd']:>15.2f}")
    travelling = summary["aggregate"]["percent_travelling"]
    lines.append(f"percent travelling: {travelling['mean']:.2f} +/- {travelling['sd']:.2f}")
    utility = summary["aggregate"]["mean_utility_travellers"]
    if utility is not None:
        lines.append(f"mean traveller utility: {utility['mean']:.4f} +/- {utility['sd']:.4f}")
    path.write_text("\n".join(lines) + "\n")
