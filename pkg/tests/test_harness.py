"""Harness: seeded batches, parallel determinism, report files, CLI."""

import json
from pathlib import Path

import pytest

from railmarket import RunConfig, preset, run
from railmarket.__main__ import main


def _config(**overrides):
    defaults = dict(scenario=preset("business"), policy="random",
                    seeds=(0, 43, 71), episodes=2, parallel_instances=1,
                    mode="eval", action_mode="continuous")
    defaults.update(overrides)
    return RunConfig(**defaults)


def _dir_bytes(path: Path) -> dict:
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())}


def test_three_seed_summary_shape():
    result = run(_config())
    assert [row["seed"] for row in result.summary["per_seed"]] == [0, 43, 71]
    agg = result.summary["aggregate"]["total_profit_all_agents"]
    assert set(agg) == {"mean", "sd"}
    assert agg["mean"] > 0
    for record in result.records:
        assert record.report["passengers_generated"] >= 0


def test_identical_invocations_byte_identical(tmp_path):
    run(_config(out_dir=tmp_path / "a"))
    run(_config(out_dir=tmp_path / "b"))
    assert _dir_bytes(tmp_path / "a") == _dir_bytes(tmp_path / "b")


def test_parallel_equals_sequential(tmp_path):
    run(_config(parallel_instances=4, workers=1, episodes=4, out_dir=tmp_path / "seq"))
    run(_config(parallel_instances=4, workers=4, episodes=4, out_dir=tmp_path / "par"))
    assert _dir_bytes(tmp_path / "seq") == _dir_bytes(tmp_path / "par")


def test_instance_seed_derivation():
    config = _config(mode="train")
    assert config.instance_seed(43, 0) == 43
    assert config.instance_seed(43, 3) == 43 + 3 * 1000
    config = _config(mode="eval")
    assert config.instance_seed(43, 3) == 43 + 3 * 100000


def test_single_episode_trace_file(tmp_path):
    run(_config(seeds=(0,), episodes=1, out_dir=tmp_path))
    lines = (tmp_path / "trace.jsonl").read_text().strip().splitlines()
    assert len(lines) == 1
    trace = json.loads(lines[0])
    assert len(trace["actions"]) == 5  # one per booking day
    assert len(trace["rewards"]) == 5


def test_discrete_mode_writes_policy_distribution(tmp_path):
    result = run(_config(seeds=(0,), episodes=2, action_mode="discrete",
                         out_dir=tmp_path))
    assert result.policy_distribution is not None
    payload = json.loads((tmp_path / "policy_distribution.json").read_text())
    row = payload["agent_1"]["A-C"]
    assert sum(row.values()) == pytest.approx(1.0, abs=1e-9)


def test_manifest_reproducibility_fields(tmp_path):
    run(_config(seeds=(5,), episodes=1, out_dir=tmp_path))
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["scenario_name"] == "business"
    assert manifest["seeds"] == [5]
    assert len(manifest["scenario_sha256"]) == 64
    assert manifest["seed_strides"] == {"train": 1000, "eval": 100000}


def test_scripted_policy_run(tmp_path):
    policy_file = tmp_path / "max.json"
    policy_file.write_text('{"constant": 1.0}')
    result = run(_config(seeds=(0,), episodes=1, policy=f"scripted:{policy_file}"))
    assert result.records


def test_errors_carry_instance_attribution(tmp_path):
    from railmarket.errors import InstanceRunError, MalformedActionError

    policy_file = tmp_path / "broken.json"
    policy_file.write_text('{"constant": 2.0}')  # alpha outside [-1, 1]
    with pytest.raises(InstanceRunError) as err:
        run(_config(seeds=(9,), episodes=1, policy=f"scripted:{policy_file}"))
    assert "seed 9, instance 0, episode 0" in str(err.value)
    assert isinstance(err.value.__cause__, MalformedActionError)


def test_tabular_q_policy_smoke():
    result = run(_config(seeds=(0,), episodes=2, action_mode="discrete",
                         policy="tabular-q", mode="train"))
    assert len(result.records) == 2


def test_cli_run_and_errors(tmp_path, capsys):
    code = main(["run", "--scenario", "business", "--seeds", "0", "--episodes", "1",
                 "--out-dir", str(tmp_path / "out")])
    assert code == 0
    out = capsys.readouterr().out
    assert "total profit" in out
    assert (tmp_path / "out" / "summary.json").exists()

    assert main(["run", "--scenario", "no_such_preset", "--seeds", "0"]) == 2


def test_cli_seed_parsing(tmp_path):
    code = main(["run", "--scenario", "business", "--seeds", "0,43,71",
                 "--episodes", "1", "--out-dir", str(tmp_path)])
    assert code == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["seeds"] == [0, 43, 71]
