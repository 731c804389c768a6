"""Instrumented match runner that audits the asynchrony contract tick by tick.

Checks, for every tick of a match:
  (a) poll-only-when-idle: every action start happens at remaining_ticks == 0;
  (b) no interruption: a started action stays in place and counts down by
      exactly one per tick until it completes;
  (c) duration bookkeeping: the player is pollable again exactly
      duration_ticks after the start.
Plus the ball/score/scene invariants.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from hoopsim.sim import (
    BOT_DIFFICULTIES,
    BotLevel,
    EventKind,
    MatchConfig,
    Phase,
    SceneId,
    Team,
    bot_policy,
    legal_actions,
    new_match,
    scene_of,
    tick,
)
from hoopsim.sim.bots import apply_bot_shooting
from hoopsim.sim.events import SCORING


@dataclass
class AuditReport:
    ticks: int = 0
    action_starts: int = 0
    violations: list[str] = field(default_factory=list)
    events: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def run_audited_bot_match(config: MatchConfig, seed: int,
                          home: BotLevel = BotLevel.MEDIUM,
                          away: BotLevel = BotLevel.MEDIUM,
                          max_ticks: int | None = None) -> AuditReport:
    state = new_match(config, seed)
    apply_bot_shooting(state, Team.HOME, home)
    apply_bot_shooting(state, Team.AWAY, away)
    report = AuditReport()
    # pid -> (expected_completion_tick, action_id, remaining_after_start)
    in_flight: dict[int, tuple[int, int, int]] = {}
    prev_scores = (state.score_home, state.score_away)
    owned_streak = 0
    levels = {Team.HOME: home, Team.AWAY: away}

    while state.phase is not Phase.OVER:
        if max_ticks is not None and state.tick >= max_ticks:
            break
        starts = {}
        for pid in state.pollable_ids():
            p = state.players[pid]
            starts[pid] = bot_policy(state, pid, BOT_DIFFICULTIES[levels[p.team]],
                                     state.rng)
        # (a) poll-only-when-idle.
        for pid in starts:
            if state.players[pid].remaining_ticks != 0:
                report.violations.append(
                    f"tick {state.tick}: polled busy player {pid}")
            if pid in in_flight and in_flight[pid][0] > state.tick:
                report.violations.append(
                    f"tick {state.tick}: player {pid} re-polled before completion")
        start_tick = state.tick
        _, events = tick(state, starts)
        report.events.extend(events)
        report.ticks += 1
        report.action_starts += len(starts)

        for pid, aid in starts.items():
            dur = state.catalog[aid].duration_ticks
            in_flight[pid] = (start_tick + dur, aid, dur)

        # (b)+(c): countdown moves one per tick and completion is exact.
        for pid, (done_at, aid, _) in list(in_flight.items()):
            p = state.players[pid]
            expected_remaining = done_at - state.tick
            if expected_remaining <= 0:
                if p.remaining_ticks != 0:
                    report.violations.append(
                        f"tick {state.tick}: player {pid} not pollable at "
                        f"expected completion of action {aid}")
                del in_flight[pid]
            else:
                if p.remaining_ticks != expected_remaining:
                    report.violations.append(
                        f"tick {state.tick}: player {pid} remaining "
                        f"{p.remaining_ticks} != {expected_remaining}")
                if p.current_action != aid:
                    report.violations.append(
                        f"tick {state.tick}: player {pid} action replaced "
                        f"mid-execution")

        # Ball/score/scene invariants.
        owners = [p.pid for p in state.players if p.has_ball]
        if len(owners) > 1:
            report.violations.append(f"tick {state.tick}: {len(owners)} ball owners")
        if state.ball.owner is not None:
            if not owners or owners[0] != state.ball.owner:
                report.violations.append(f"tick {state.tick}: owner flag mismatch")
            op = state.players[state.ball.owner].pos
            if (op.x, op.y) != (state.ball.pos.x, state.ball.pos.y):
                report.violations.append(f"tick {state.tick}: ball not at owner pos")
            if state.ball.in_flight:
                report.violations.append(f"tick {state.tick}: owned ball in flight")

        scores = (state.score_home, state.score_away)
        gained = (scores[0] - prev_scores[0]) + (scores[1] - prev_scores[1])
        event_points = sum(SCORING[e.kind] for e in events if e.kind in SCORING)
        if gained != event_points or scores[0] < prev_scores[0] or scores[1] < prev_scores[1]:
            report.violations.append(
                f"tick {state.tick}: score delta {gained} != goal events {event_points}")
        prev_scores = scores

        if state.ball.owner is not None or state.ball.in_flight:
            owned_streak += 1
        else:
            owned_streak = 0
        released = any(e.kind in (EventKind.GOAL2, EventKind.GOAL3, EventKind.SHOT_MISSED,
                                  EventKind.BLOCK, EventKind.SHOT_CLOCK_VIOLATION,
                                  EventKind.STEAL, EventKind.PASS_INTERCEPTED,
                                  EventKind.POSSESSION_GAINED, EventKind.PASS_COMPLETED)
                       for e in events)
        if released:
            owned_streak = 0
        if owned_streak > config.shot_clock_ticks:
            report.violations.append(
                f"tick {state.tick}: possession exceeded the shot clock")

        if state.phase is not Phase.OVER:
            ball_owned_by = state.ball.owning_team
            for p in state.players:
                s = scene_of(state, p.pid)
                if ball_owned_by is None and s is not SceneId.FREEBALL:
                    report.violations.append(f"tick {state.tick}: scene mismatch (loose)")
                if ball_owned_by is not None:
                    if p.team is ball_owned_by and s is SceneId.DEFENSE:
                        report.violations.append(
                            f"tick {state.tick}: owner-side player in defense")
                    if p.team is not ball_owned_by and s in (
                            SceneId.ATTACK, SceneId.ASSIST, SceneId.BALLCLEAR):
                        report.violations.append(
                            f"tick {state.tick}: defender in offense scene")

    if state.phase is Phase.OVER and state.match_remaining != 0:
        report.violations.append("match ended before the clock ran out")
    return report
