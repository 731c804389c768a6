#!/usr/bin/env python3
"""Desk-scale ablation over the curricula training variants.

Trains one_model / base_curricula / cascade / ict in 3v3 against easy bots
with equal budgets and reports per-seed final eval gaps plus the pairwise
sign counts for the expected ordering.
"""

from __future__ import annotations

import argparse
import statistics

from hoopsim.learn.training import TrainConfig, Trainer
from hoopsim.sim import Role

ORDER = ("one_model", "base_curricula", "cascade", "ict")


def run(budget: int, seeds: list[int], approximator: str) -> None:
    gaps: dict[str, list[float]] = {}
    for algo in ORDER:
        gaps[algo] = []
        for seed in seeds:
            cfg = TrainConfig(
                algorithm=algo, approximator=approximator, seed=seed,
                budget_ticks=budget, gamma=0.9, alpha=0.02, sync_period=250,
                epsilon_decay_ticks=int(budget * 0.6),
                eval_episodes=20, eval_envs=10, eval_period_episodes=0,
                home_roles=[Role.PG, Role.SG, Role.SF],
                away_roles=[Role.PG, Role.SG, Role.SF])
            res = Trainer(cfg).train()
            gaps[algo].append(res.final_eval_gap)
            print(f"{algo:15s} seed={seed} gap={res.final_eval_gap:+7.2f}",
                  flush=True)
    print()
    for algo in ORDER:
        vals = gaps[algo]
        print(f"{algo:15s} mean={statistics.mean(vals):+7.2f} "
              f"per-seed=" + " ".join(f"{v:+.1f}" for v in vals))
    print()
    for a, b in zip(ORDER, ORDER[1:]):
        agree = sum(gb >= ga for ga, gb in zip(gaps[a], gaps[b]))
        print(f"{b} >= {a}: {agree}/{len(seeds)} seeds")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--budget", type=int, default=160_000)
    ap.add_argument("--seeds", default="0,1,2,3,4")
    ap.add_argument("--approximator", default="linear")
    args = ap.parse_args()
    run(args.budget, [int(s) for s in args.seeds.split(",")], args.approximator)
