"""CLI behavior: manifests, metrics, checkpoints, resume, eval, selfplay,
benchmark matrix, exit codes."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
import yaml

from hoopsim.checkpoint import load_checkpoint, save_checkpoint
from hoopsim.cli import EXIT_CONFIG, EXIT_OK, EXIT_PARTIAL, main
from hoopsim.learn.training import TrainConfig, Trainer

TINY_TRAIN = {
    "train": {
        "algorithm": "iql",
        "approximator": "tabular",
        "budget_ticks": 2500,
        "epsilon_decay_ticks": 2000,
        "eval_episodes": 2,
        "eval_envs": 1,
        "eval_period_episodes": 0,
        "match_ticks": 400,
        "home_roles": ["SG"],
        "away_roles": ["SG"],
        "opponent": "easy",
    },
    "seeds": [0, 1],
}


def write_cfg(tmp_path, data, name="cfg.yaml") -> str:
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data))
    return str(path)


def test_train_writes_manifest_metrics_and_checkpoints(tmp_path):
    cfg = write_cfg(tmp_path, TINY_TRAIN)
    out = tmp_path / "run"
    assert main(["train", "--config", cfg, "--out", str(out)]) == EXIT_OK
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seeds"] == [0, 1]
    assert manifest["config"]["algorithm"] == "iql"
    assert manifest["code_hash"]
    for seed in (0, 1):
        assert (out / f"metrics_seed{seed}.csv").exists()
        assert (out / f"checkpoint_seed{seed}.json").exists()
    header = (out / "metrics_seed0.csv").read_text().splitlines()[0]
    assert header.startswith("ticks,updates,episodes")


def test_unknown_algorithm_lists_valid_names(tmp_path, capsys):
    bad = {"train": {**TINY_TRAIN["train"], "algorithm": "dqn"}}
    cfg = write_cfg(tmp_path, bad)
    code = main(["train", "--config", cfg, "--out", str(tmp_path / "r")])
    assert code == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "dqn" in err and "iql" in err and "ict" in err


def test_output_collision_requires_force(tmp_path):
    cfg = write_cfg(tmp_path, {
        "train": {**TINY_TRAIN["train"], "budget_ticks": 500}, "seeds": [0]})
    out = tmp_path / "run"
    assert main(["train", "--config", cfg, "--out", str(out)]) == EXIT_OK
    assert main(["train", "--config", cfg, "--out", str(out)]) == EXIT_CONFIG
    assert main(["train", "--config", cfg, "--out", str(out), "--force"]) == EXIT_OK


def test_resume_continues_counters(tmp_path):
    short = {"train": {**TINY_TRAIN["train"], "budget_ticks": 1200}, "seeds": [0]}
    cfg = write_cfg(tmp_path, short)
    out1 = tmp_path / "first"
    assert main(["train", "--config", cfg, "--out", str(out1)]) == EXIT_OK
    ck = out1 / "checkpoint_seed0.json"
    first = load_checkpoint(ck)
    assert first["counters"]["ticks"] >= 1200

    longer = {"train": {**TINY_TRAIN["train"], "budget_ticks": 2400}, "seeds": [0]}
    cfg2 = write_cfg(tmp_path, longer, "cfg2.yaml")
    out2 = tmp_path / "second"
    assert main(["train", "--config", cfg2, "--out", str(out2),
                 "--resume", str(ck)]) == EXIT_OK
    second = load_checkpoint(out2 / "checkpoint_seed0.json")
    assert second["counters"]["ticks"] >= 2400
    assert second["counters"]["episodes"] >= first["counters"]["episodes"]


def make_checkpoint(tmp_path, **cfg_kw) -> Path:
    cfg_kw.setdefault("budget_ticks", 0)
    cfg_kw.setdefault("eval_episodes", 2)
    cfg_kw.setdefault("eval_envs", 1)
    cfg_kw.setdefault("match_ticks", 400)
    trainer = Trainer(TrainConfig(**cfg_kw))
    path = tmp_path / "ck.json"
    save_checkpoint(path, trainer)
    return path


def test_eval_untrained_vs_hard_is_negative(tmp_path, capsys):
    ck = make_checkpoint(tmp_path)
    assert main(["eval", "--checkpoint", str(ck), "--vs", "hard",
                 "--episodes", "4", "--seed", "3", "--envs", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    mean_gap = float(out.split("mean_gap=")[1].split()[0])
    assert mean_gap < 0


def test_eval_same_seed_twice_identical(tmp_path, capsys):
    ck = make_checkpoint(tmp_path)
    main(["eval", "--checkpoint", str(ck), "--vs", "easy", "--episodes", "3",
          "--seed", "5", "--envs", "1"])
    first = capsys.readouterr().out
    main(["eval", "--checkpoint", str(ck), "--vs", "easy", "--episodes", "3",
          "--seed", "5", "--envs", "1"])
    assert capsys.readouterr().out == first


def test_eval_zero_episodes_is_ok(tmp_path, capsys):
    ck = make_checkpoint(tmp_path)
    assert main(["eval", "--checkpoint", str(ck), "--episodes", "0"]) == EXIT_OK
    assert "nothing to evaluate" in capsys.readouterr().out


def test_eval_layout_hash_mismatch_refused(tmp_path, capsys):
    ck = make_checkpoint(tmp_path)
    payload = json.loads(ck.read_text())
    payload["layout_hash"] = "deadbeef00000000"
    ck.write_text(json.dumps(payload))
    code = main(["eval", "--checkpoint", str(ck), "--episodes", "2"])
    assert code == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "deadbeef00000000" in err  # both hashes shown


def test_selfplay_runs_and_mixed_control_rejected(tmp_path):
    data = {
        "train": {**TINY_TRAIN["train"], "budget_ticks": 1500},
        "selfplay": {"snapshot_interval_episodes": 2},
        "seeds": [0],
    }
    cfg = write_cfg(tmp_path, data)
    out = tmp_path / "sp"
    assert main(["selfplay", "--config", cfg, "--out", str(out)]) == EXIT_OK
    assert (out / "checkpoint_seed0.json").exists()

    bad = {
        "train": TINY_TRAIN["train"],
        "selfplay": {"away_control": "bot"},
        "seeds": [0],
    }
    cfg_bad = write_cfg(tmp_path, bad, "bad.yaml")
    assert main(["selfplay", "--config", cfg_bad,
                 "--out", str(tmp_path / "sp2")]) == EXIT_CONFIG


BENCH = {
    "benchmark": {
        "algorithms": ["iql", "hyq"],
        "settings": ["divide_and_conquer"],
        "difficulties": ["easy"],
        "seeds": [0, 1],
        "base": {
            "budget_ticks": 800,
            "epsilon_decay_ticks": 600,
            "eval_episodes": 2,
            "eval_envs": 1,
            "eval_period_episodes": 0,
            "match_ticks": 400,
            "home_roles": ["SG"],
            "away_roles": ["SG"],
        },
    }
}


def test_benchmark_writes_report_and_table(tmp_path, capsys):
    cfg = write_cfg(tmp_path, BENCH)
    out = tmp_path / "bench"
    assert main(["benchmark", "--config", cfg, "--out", str(out)]) == EXIT_OK
    csv = (out / "benchmark.csv").read_text().splitlines()
    assert csv[0].startswith("algorithm,setting,difficulty")
    assert len(csv) == 3  # header + 2 cells
    table = (out / "benchmark.txt").read_text()
    assert "iql" in table and "hyq" in table


def test_benchmark_rerun_identical(tmp_path):
    cfg = write_cfg(tmp_path, BENCH)
    out1, out2 = tmp_path / "b1", tmp_path / "b2"
    assert main(["benchmark", "--config", cfg, "--out", str(out1)]) == EXIT_OK
    assert main(["benchmark", "--config", cfg, "--out", str(out2)]) == EXIT_OK
    assert (out1 / "benchmark.csv").read_text() == (out2 / "benchmark.csv").read_text()


def test_benchmark_partial_failure_marks_cell_and_exit_4(tmp_path, monkeypatch):
    import hoopsim.cli as cli

    calls = {"n": 0}
    real_train = cli.Trainer.train

    def flaky(self, *a, **kw):
        calls["n"] += 1
        if self.cfg.algorithm == "hyq":
            raise RuntimeError("injected cell failure")
        return real_train(self, *a, **kw)

    monkeypatch.setattr(cli.Trainer, "train", flaky)
    cfg = write_cfg(tmp_path, BENCH)
    out = tmp_path / "bench"
    assert main(["benchmark", "--config", cfg, "--out", str(out)]) == EXIT_PARTIAL
    csv = (out / "benchmark.csv").read_text()
    lines = [l for l in csv.splitlines() if l.startswith("hyq")]
    assert lines and lines[0].endswith(",1")  # failed flag set
    assert "FAILED" in (out / "benchmark.txt").read_text()


def test_replay_log_round_trip(tmp_path):
    from hoopsim.runio import read_replay, write_replay
    from hoopsim.sim import BotLevel, MatchConfig, run_bot_match

    _, events = run_bot_match(MatchConfig(match_ticks=200), 3,
                              BotLevel.MEDIUM, BotLevel.MEDIUM)
    path = tmp_path / "replay.jsonl"
    write_replay(path, events)
    back = read_replay(path)
    assert [e.to_json() for e in back] == [e.to_json() for e in events]
