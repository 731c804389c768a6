"""Command-line front door: train, eval, selfplay, benchmark, human.

Exit codes: 0 success, 2 configuration error, 3 runtime failure, 4 partial
benchmark failure. FEVER_LOG sets log verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import statistics
import sys
from dataclasses import replace
from pathlib import Path

import yaml

from .checkpoint import load_checkpoint, save_checkpoint, trainer_from_checkpoint
from .env import make_controllers, run_parallel
from .learn.training import ALGORITHMS, TrainConfig, Trainer
from .runio import (
    BenchmarkCell,
    BenchmarkReport,
    append_metrics,
    write_manifest,
    write_replay,
)
from .sim import BotLevel, ConfigError

log = logging.getLogger("hoopsim")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_PARTIAL = 4


def _setup_logging() -> None:
    level = os.environ.get("FEVER_LOG", "INFO").upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO),
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")


def load_config_file(path) -> dict:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh) or {}
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except yaml.YAMLError as e:
        raise ConfigError(f"config file {path} is not valid YAML: {e}")
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a mapping")
    return data


def train_config_from(data: dict, overrides: dict) -> TrainConfig:
    section = dict(data.get("train", {}))
    section.update({k: v for k, v in overrides.items() if v is not None})
    return TrainConfig.from_dict(section)


def _seed_list(cfg_data: dict, seed_flag: int | None) -> list[int]:
    if seed_flag is not None:
        return [seed_flag]
    seeds = cfg_data.get("seeds", [0])
    if not isinstance(seeds, list) or not all(isinstance(s, int) for s in seeds):
        raise ConfigError("'seeds' must be a list of integers")
    return seeds


def _prepare_out(out_dir: str, force: bool) -> Path:
    out = Path(out_dir)
    if out.exists() and any(out.iterdir()) and not force:
        raise ConfigError(
            f"output directory {out} is not empty; pass --force to reuse it")
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# train


def cmd_train(args) -> int:
    data = load_config_file(args.config)
    seeds = _seed_list(data, args.seed)
    base_cfg = train_config_from(data, {"eval_envs": args.envs})
    out = _prepare_out(args.out, args.force)
    outputs = {}
    for seed in seeds:
        outputs[f"metrics_seed{seed}"] = f"metrics_seed{seed}.csv"
        outputs[f"checkpoint_seed{seed}"] = f"checkpoint_seed{seed}.json"
    write_manifest(out, base_cfg.to_dict(), seeds, outputs)

    for seed in seeds:
        cfg = replace(base_cfg, seed=seed)
        if args.resume:
            trainer = trainer_from_checkpoint(args.resume)
            log.info("resumed from %s at %d ticks", args.resume, trainer.ticks)
        else:
            trainer = Trainer(cfg)
        remaining = max(0, cfg.budget_ticks - trainer.ticks)
        result = trainer.train(budget_ticks=remaining)
        append_metrics(out / f"metrics_seed{seed}.csv", result.metrics,
                       result.metrics[0].CSV_HEADER)
        save_checkpoint(out / f"checkpoint_seed{seed}.json", trainer)
        log.info("seed %d: final eval gap %+.2f after %d ticks", seed,
                 result.final_eval_gap, trainer.ticks)
    return EXIT_OK


# ---------------------------------------------------------------------------
# eval


def _opponent_spec(vs: str):
    if vs.startswith("checkpoint:"):
        return ("checkpoint", vs.split(":", 1)[1])
    try:
        return ("bot", BotLevel(vs))
    except ValueError:
        raise ConfigError(f"unknown opponent spec {vs!r}; use easy|medium|hard"
                          f"|checkpoint:<path>")


def cmd_eval(args) -> int:
    payload = load_checkpoint(args.checkpoint)
    kind, opp = _opponent_spec(args.vs)
    overrides = {}
    if kind == "bot":
        overrides["opponent"] = opp.value
    trainer = trainer_from_checkpoint(args.checkpoint, overrides)

    n = args.episodes
    if n == 0:
        print("episodes=0: nothing to evaluate")
        return EXIT_OK

    if kind == "bot":
        stats = trainer.evaluate(episodes=n, seed_base=args.seed,
                                 n_envs=args.envs or trainer.cfg.eval_envs)
    else:
        away = trainer_from_checkpoint(opp)
        if away.layout_hash() != trainer.layout_hash():
            raise ConfigError(
                f"opponent checkpoint layout {away.layout_hash()} does not "
                f"match {trainer.layout_hash()}")
        home_policy = trainer.greedy_policy()
        away_policy = away.greedy_policy()
        n_home = len(trainer.cfg.home_roles)

        def policy(entry):
            return (home_policy if entry.handle.pid < n_home else away_policy)(entry)

        controllers = make_controllers(trainer.match_config, home="learner",
                                       away="learner")
        stats = run_parallel(trainer.match_config, controllers, policy,
                             n_episodes=n, seed_base=args.seed,
                             n_envs=args.envs or trainer.cfg.eval_envs)

    gaps = [s.score_gap for s in stats]
    mean = statistics.mean(gaps)
    std = statistics.pstdev(gaps) if len(gaps) > 1 else 0.0
    print(f"episodes={len(stats)} mean_gap={mean:+.2f} std_gap={std:.2f} "
          f"mean_score={statistics.mean(s.score_home for s in stats):.2f}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "episodes.csv", "w") as fh:
            fh.write(stats[0].CSV_HEADER + "\n")
            for s in stats:
                fh.write(s.csv_row() + "\n")
    if args.replays:
        out = Path(args.out or ".")
        out.mkdir(parents=True, exist_ok=True)
        from .env import MatchEnv

        controllers = make_controllers(trainer.match_config, home="learner",
                                       away=(opp if kind == "bot"
                                             else BotLevel.MEDIUM))
        env = MatchEnv(trainer.match_config, controllers, seed=args.seed)
        report = env.reset()
        policy = trainer.greedy_policy()
        while not report.episode_done:
            report = env.step({e.handle.pid: policy(e) for e in report.pollable})
        write_replay(out / "replay_seed%d.jsonl" % args.seed, env.event_log)
    return EXIT_OK


# ---------------------------------------------------------------------------
# selfplay


def cmd_selfplay(args) -> int:
    data = load_config_file(args.config)
    section = dict(data.get("selfplay", {}))
    interval = section.pop("snapshot_interval_episodes", 20)
    away_control = section.pop("away_control", "snapshot")
    if away_control != "snapshot":
        raise ConfigError(
            "selfplay requires both teams learner-controlled; for bot "
            "opponents use the train command")
    merged = dict(data.get("train", {}))
    merged.update(section)
    cfg = TrainConfig.from_dict(merged)
    seeds = _seed_list(data, args.seed)
    out = _prepare_out(args.out, args.force)
    write_manifest(out, {**cfg.to_dict(), "snapshot_interval_episodes": interval},
                   seeds, {})
    for seed in seeds:
        trainer = Trainer(replace(cfg, seed=seed))
        result = trainer.train(selfplay_interval=interval)
        append_metrics(out / f"metrics_seed{seed}.csv", result.metrics,
                       result.metrics[0].CSV_HEADER)
        save_checkpoint(out / f"checkpoint_seed{seed}.json", trainer)
        log.info("selfplay seed %d finished at %d ticks", seed, trainer.ticks)
    return EXIT_OK


# ---------------------------------------------------------------------------
# benchmark


def cmd_benchmark(args) -> int:
    data = load_config_file(args.config)
    spec = data.get("benchmark")
    if not spec:
        raise ConfigError("config file needs a 'benchmark' section")
    algorithms = spec.get("algorithms", ["iql"])
    settings = spec.get("settings", ["divide_and_conquer"])
    difficulties = spec.get("difficulties", ["easy"])
    seeds = spec.get("seeds", [0])
    base = dict(spec.get("base", {}))
    for name in algorithms:
        if name not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {name!r}; valid: "
                              f"{', '.join(ALGORITHMS)}")
    out = _prepare_out(args.out, args.force)
    write_manifest(out, {"benchmark": spec}, seeds, {"report": "benchmark.csv"})

    report = BenchmarkReport()
    for algo in algorithms:
        for setting in settings:
            for diff in difficulties:
                gaps = []
                error = ""
                for seed in seeds:
                    try:
                        cfg = TrainConfig.from_dict({
                            **base, "algorithm": algo, "setting": setting,
                            "opponent": diff, "seed": seed})
                        result = Trainer(cfg).train()
                        gaps.append(result.final_eval_gap)
                    except Exception as e:  # cell isolation by design
                        log.exception("cell %s/%s/%s seed %d failed",
                                      algo, setting, diff, seed)
                        error = str(e)
                        break
                failed = bool(error) or not gaps
                report.cells.append(BenchmarkCell(
                    algorithm=algo, setting=setting, difficulty=diff,
                    mean_gap=None if failed else statistics.mean(gaps),
                    std_gap=None if failed or len(gaps) < 2
                    else statistics.pstdev(gaps),
                    episodes=len(gaps) * base.get("eval_episodes", 20),
                    seeds=len(seeds), failed=failed, error=error))
    (out / "benchmark.csv").write_text(report.to_csv())
    table = report.to_table()
    (out / "benchmark.txt").write_text(table)
    print(table, end="")
    return EXIT_PARTIAL if report.any_failed else EXIT_OK


# ---------------------------------------------------------------------------
# human


def cmd_human(args) -> int:
    from .server import serve_human

    serve_human(role=args.role, vs=args.vs, port=args.port, speed=args.speed,
                config_path=args.config, seed=args.seed)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hoopsim",
                                description="Asynchronous basketball sim and "
                                            "multi-agent RL benchmark")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="train one algorithm per config")
    t.add_argument("--config", required=True)
    t.add_argument("--seed", type=int, default=None)
    t.add_argument("--out", default="runs/train")
    t.add_argument("--envs", type=int, default=None)
    t.add_argument("--force", action="store_true")
    t.add_argument("--resume", default=None, help="checkpoint to resume from")
    t.set_defaults(fn=cmd_train)

    e = sub.add_parser("eval", help="evaluate a checkpoint")
    e.add_argument("--checkpoint", required=True)
    e.add_argument("--vs", default="easy")
    e.add_argument("--episodes", type=int, default=20)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--envs", type=int, default=None)
    e.add_argument("--out", default=None)
    e.add_argument("--replays", action="store_true")
    e.set_defaults(fn=cmd_eval)

    s = sub.add_parser("selfplay", help="train both teams via snapshots")
    s.add_argument("--config", required=True)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--out", default="runs/selfplay")
    s.add_argument("--force", action="store_true")
    s.set_defaults(fn=cmd_selfplay)

    b = sub.add_parser("benchmark", help="run an algorithm matrix")
    b.add_argument("--config", required=True)
    b.add_argument("--out", default="runs/benchmark")
    b.add_argument("--force", action="store_true")
    b.set_defaults(fn=cmd_benchmark)

    h = sub.add_parser("human", help="serve a live match for a browser client")
    h.add_argument("--role", default="SG")
    h.add_argument("--vs", default="medium")
    h.add_argument("--port", type=int, default=8765)
    h.add_argument("--speed", type=float, default=10.0,
                   help="ticks per wall second (0 = unpaced)")
    h.add_argument("--config", default=None)
    h.add_argument("--seed", type=int, default=0)
    h.set_defaults(fn=cmd_human)
    return p


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except KeyboardInterrupt:
        return EXIT_RUNTIME
    except Exception as e:  # noqa: BLE001 - the CLI boundary reports and exits
        log.exception("run failed")
        print(f"runtime failure: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
