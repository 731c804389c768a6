#!/usr/bin/env python3
"""Capture a full live-match message log for the browser client's replay
tests: hello, one state per tick, a scripted accepted/queued/rejected ack
sequence, and the end frame."""

from __future__ import annotations

import argparse
from pathlib import Path

from hoopsim.server import HumanSession
from hoopsim.sim import BotLevel, MatchConfig, Role
from hoopsim.wire import encode_hello, marshal


def capture(path: Path, seed: int, match_ticks: int) -> None:
    session = HumanSession(MatchConfig(match_ticks=match_ticks), Role.SG,
                           seed=seed, teammates=BotLevel.MEDIUM,
                           opponents=BotLevel.MEDIUM, speed=10.0)
    lines = [marshal(encode_hello(session.state, session.human_pid, 10.0))]
    move_e = session.state.catalog.by_name["Move_E"].id
    move_w = session.state.catalog.by_name["Move_W"].id
    shoot = session.state.catalog.by_name["ShootClose"].id
    tick_no = 0
    while not session.done:
        human = session.state.players[session.human_pid]
        if tick_no == 200 and human.remaining_ticks == 0:
            lines.append(marshal(session.submit_action(move_e)))  # accepted
        if tick_no == 201:
            lines.append(marshal(session.submit_action(move_w)))  # queued
        if tick_no == 205 and human.remaining_ticks == 0 and not human.has_ball:
            lines.append(marshal(session.submit_action(shoot)))  # rejected
        for msg in session.advance_tick():
            lines.append(marshal(msg))
        tick_no += 1
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} messages to {path}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="frontend/fixtures/session.jsonl")
    ap.add_argument("--seed", type=int, default=31337)
    ap.add_argument("--ticks", type=int, default=1800)
    args = ap.parse_args()
    capture(Path(args.out), args.seed, args.ticks)
