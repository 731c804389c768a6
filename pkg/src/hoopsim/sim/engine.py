"""Deterministic tick-based half-court rules engine.

One tick is 100 ms. Actions execute over fixed tick counts and are never
interrupted; a player is pollable exactly when remaining_ticks == 0. All
randomness flows through the per-match seeded generator stored on the state.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from enum import Enum

from .actions import ActionCatalog, ActionCategory, ActionSpec, ShotType
from .config import HANDLER_PRIORITY, MatchConfig
from .entities import BallEntity, PlayerEntity, Role, SceneId, Team
from .events import EventKind, GameEvent, SCORING
from .geometry import (
    BASKET,
    Vec2,
    beyond_arc,
    clamp,
    clamp_to_court,
    dist_to_basket,
    heading,
    step_toward,
)


class Phase(Enum):
    JUMP_BALL = "jump_ball"
    LIVE = "live"
    OVER = "over"


class ContractViolation(RuntimeError):
    """A caller broke a tick/poll precondition (e.g. acting while busy)."""


@dataclass
class GameState:
    config: MatchConfig
    catalog: ActionCatalog
    rng: random.Random
    tick: int = 0
    score_home: int = 0
    score_away: int = 0
    shot_clock_remaining: int = 0
    match_remaining: int = 0
    players: list[PlayerEntity] = field(default_factory=list)
    ball: BallEntity = None
    phase: Phase = Phase.JUMP_BALL
    possession_cleared: bool = True
    last_owning_team: Team | None = None
    last_owner_pid: int | None = None
    # Instrumentation: every (tick, pid, action_id) start, for contract audits.
    action_trace: list[tuple[int, int, int]] = field(default_factory=list)
    _scene_cache: dict[int, SceneId] = field(default_factory=dict)
    _legal_cache: dict[tuple, frozenset] = field(default_factory=dict)

    def score_of(self, team: Team) -> int:
        return self.score_home if team is Team.HOME else self.score_away

    def team_players(self, team: Team) -> list[PlayerEntity]:
        return [p for p in self.players if p.team is team]

    def teammates_of(self, pid: int) -> list[PlayerEntity]:
        me = self.players[pid]
        return [p for p in self.players if p.team is me.team and p.pid != pid]

    def opponents_of(self, pid: int) -> list[PlayerEntity]:
        me = self.players[pid]
        return [p for p in self.players if p.team is not me.team]

    def pollable_ids(self) -> list[int]:
        return [p.pid for p in self.players if p.remaining_ticks == 0]

    def snapshot(self) -> dict:
        return {
            "tick": self.tick,
            "scores": (self.score_home, self.score_away),
            "shot_clock_remaining": self.shot_clock_remaining,
            "match_remaining": self.match_remaining,
            "phase": self.phase.value,
            "possession_cleared": self.possession_cleared,
            "players": [p.snapshot() for p in self.players],
            "ball": self.ball.snapshot(),
        }


def state_digest(state: GameState) -> str:
    """Stable digest of the full state including the generator state."""
    payload = state.snapshot()
    payload["rng"] = repr(state.rng.getstate())
    raw = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(raw).hexdigest()


# ---------------------------------------------------------------------------
# Match setup


def new_match(config: MatchConfig, seed: int) -> GameState:
    """Create a match; the jump ball is resolved immediately into Live play."""
    catalog = config.build_catalog()
    rng = random.Random(seed)
    state = GameState(config=config, catalog=catalog, rng=rng)
    state.shot_clock_remaining = config.shot_clock_ticks
    state.match_remaining = config.match_ticks
    state.ball = BallEntity(pos=BASKET.copy())

    pid = 0
    for team, roles in ((Team.HOME, config.home_roles), (Team.AWAY, config.away_roles)):
        for role in roles:
            state.players.append(
                PlayerEntity(pid=pid, team=team, role=role, pos=Vec2(7.5, 5.7),
                             attrs=config.attrs_for(role))
            )
            pid += 1

    # Jump ball: one jumper per team, possession by a jump-weighted draw.
    jumper_home = max(state.team_players(Team.HOME), key=lambda p: (p.attrs.jump, -p.pid))
    jumper_away = max(state.team_players(Team.AWAY), key=lambda p: (p.attrs.jump, -p.pid))
    total = jumper_home.attrs.jump + jumper_away.attrs.jump
    p_home = 0.5 if total == 0 else jumper_home.attrs.jump / total
    winner = Team.HOME if state.rng.random() < p_home else Team.AWAY
    _dead_ball_reset(state, winner)
    state.phase = Phase.LIVE
    _refresh_scenes(state)
    return state


_ATTACK_SPOTS = [Vec2(7.5, 8.0), Vec2(3.2, 6.9), Vec2(11.8, 6.9)]


def _dead_ball_reset(state: GameState, team: Team) -> None:
    """Reposition for a fresh possession: holder at the top of the arc,
    teammates on the wings, defenders matched up inside. Possession counts
    as cleared; clocks reset."""
    attackers = state.team_players(team)
    defenders = state.team_players(team.other)

    handler = min(attackers, key=lambda p: (HANDLER_PRIORITY.index(p.role), p.pid))
    ordered = [handler] + [p for p in attackers if p.pid != handler.pid]
    for spot, p in zip(_ATTACK_SPOTS, ordered):
        p.pos = spot.copy()
        p.facing = heading(p.pos, BASKET)
    for i, d in enumerate(defenders):
        mark = ordered[i % len(ordered)]
        d.pos = mark.pos.copy()
        step_toward(d.pos, BASKET, 1.5)
        d.facing = heading(d.pos, mark.pos)

    for p in state.players:
        p.blocked_by = None
    _give_ball(state, handler.pid, cleared=True)
    state.shot_clock_remaining = state.config.shot_clock_ticks


def _give_ball(state: GameState, pid: int, cleared: bool | None = None) -> None:
    ball = state.ball
    for p in state.players:
        p.has_ball = False
    owner = state.players[pid]
    owner.has_ball = True
    ball.owner = pid
    ball.owning_team = owner.team
    ball.in_flight = False
    ball.flight_target_pid = None
    ball.flight_dest = None
    ball.flight_from_team = None
    ball.flight_passer_pid = None
    ball.pos = owner.pos.copy()
    ball.vel = Vec2(0.0, 0.0)
    state.last_owning_team = owner.team
    state.last_owner_pid = pid
    state.possession_cleared = beyond_arc(owner.pos) if cleared is None else cleared


def _release_ball(state: GameState) -> None:
    ball = state.ball
    if ball.owner is not None:
        state.players[ball.owner].has_ball = False
    ball.owner = None
    ball.owning_team = None


# ---------------------------------------------------------------------------
# Pure queries


def scene_of(state: GameState, pid: int) -> SceneId:
    """Scene is a pure function of the state: unowned ball puts everyone in
    freeball; the owner is attacking (or clearing, if possession was gained
    inside the arc and not yet brought out); teammates assist; others defend."""
    ball = state.ball
    if ball.owner is None:
        return SceneId.FREEBALL
    me = state.players[pid]
    owner = state.players[ball.owner]
    if owner.team is not me.team:
        return SceneId.DEFENSE
    if ball.owner == pid:
        return SceneId.ATTACK if state.possession_cleared else SceneId.BALLCLEAR
    return SceneId.ASSIST


def team_scene(state: GameState, team: Team) -> str:
    """Team-level sub-task label used to route joint experience."""
    ball = state.ball
    if ball.owner is None:
        return "freeball"
    if ball.owning_team is team:
        return "offense" if state.possession_cleared else "ballclear"
    return "defense"


def legal_actions(state: GameState, pid: int) -> frozenset[int]:
    """Exactly the catalog entries available in the player's current scene
    for its role; pass slots only for teammates that exist."""
    me = state.players[pid]
    scene = scene_of(state, pid)
    n_teammates = len(state.config.roles_of(me.team)) - 1
    key = (scene, me.role, n_teammates)
    cached = state._legal_cache.get(key)
    if cached is not None:
        return cached
    ids = set()
    for spec in state.catalog.specs:
        if not spec.available(scene, me.role):
            continue
        if spec.category is ActionCategory.PASS and spec.target_slot >= n_teammates:
            continue
        ids.add(spec.id)
    result = frozenset(ids)
    state._legal_cache[key] = result
    return result


def shot_probability(state: GameState, shooter_pid: int, shot_type: ShotType) -> float:
    """Closed-form success probability for a shot released right now."""
    t = state.config.tuning
    shooter = state.players[shooter_pid]
    d = dist_to_basket(shooter.pos)
    dist_factor = max(t.dist_factor_floor, t.dist_factor_intercept - t.dist_factor_slope * d)
    nearest = min(shooter.pos.dist(o.pos) for o in state.opponents_of(shooter_pid))
    if nearest < t.contest_near_dist:
        contest = t.contest_near_factor
    elif nearest < t.contest_mid_dist:
        contest = t.contest_mid_factor
    else:
        contest = 1.0
    p = t.base_p(shot_type) * shooter.attrs.shoot_mult(shot_type) * dist_factor * contest
    return clamp(p, t.p_floor, t.p_ceil)


def resolve_shot(state: GameState, shooter_pid: int, shot_type: ShotType,
                 rng: random.Random) -> GameEvent:
    """Draw the outcome of a released shot. Does not mutate the state; the
    tick loop applies scoring/rebound consequences."""
    shooter = state.players[shooter_pid]
    if not shooter.has_ball:
        raise ContractViolation(f"player {shooter_pid} resolved a shot without the ball")
    p = shot_probability(state, shooter_pid, shot_type)
    if rng.random() < p:
        kind = EventKind.GOAL3 if beyond_arc(shooter.pos) else EventKind.GOAL2
        return GameEvent(state.tick, kind, shooter_pid,
                         {"shot_type": shot_type.value, "p": round(p, 4)})
    return GameEvent(state.tick, EventKind.SHOT_MISSED, shooter_pid,
                     {"shot_type": shot_type.value, "p": round(p, 4)})


# ---------------------------------------------------------------------------
# The tick


def tick(state: GameState, new_action_starts: dict[int, int]) -> tuple[GameState, list[GameEvent]]:
    """Advance exactly one tick.

    Starts the given actions (players must be pollable; illegal ids are
    rejected with an error event and replaced by Idle), applies per-tick
    motion, resolves completions, advances ball flight, steps the clocks,
    and recomputes scenes.
    """
    if state.phase is Phase.OVER:
        raise ContractViolation("tick() called after MatchEnd")
    events: list[GameEvent] = []
    catalog = state.catalog
    now = state.tick

    # 1. Action starts.
    for pid in sorted(new_action_starts):
        me = state.players[pid]
        if me.remaining_ticks != 0:
            raise ContractViolation(
                f"player {pid} is busy ({me.remaining_ticks} ticks left) and cannot act")
        aid = new_action_starts[pid]
        if aid not in legal_actions(state, pid):
            events.append(GameEvent(now, EventKind.ACTION_REJECTED, pid,
                                    {"action": aid, "reason": "illegal"}))
            aid = catalog.idle_id
        spec = catalog[aid]
        me.current_action = aid
        me.remaining_ticks = spec.duration_ticks
        if spec.category is ActionCategory.MOVE:
            me.facing = spec.direction
        elif spec.category in (ActionCategory.DRIVE, ActionCategory.CUT,
                               ActionCategory.SHOOT):
            me.facing = heading(me.pos, BASKET)
        state.action_trace.append((now, pid, aid))

    # 2. Motion for executing Move/Drive/Cut.
    t = state.config.tuning
    for me in state.players:
        if me.remaining_ticks <= 0 or me.current_action is None:
            continue
        cat = catalog[me.current_action].category
        if cat is ActionCategory.MOVE:
            spec = catalog[me.current_action]
            me.pos.x += math.cos(spec.direction) * me.attrs.move_speed
            me.pos.y += math.sin(spec.direction) * me.attrs.move_speed
            clamp_to_court(me.pos)
        elif cat is ActionCategory.DRIVE:
            step_toward(me.pos, BASKET, me.attrs.move_speed)
            me.facing = heading(me.pos, BASKET)
        elif cat is ActionCategory.CUT:
            step_toward(me.pos, BASKET, me.attrs.move_speed * t.cut_speed_mult)
            me.facing = heading(me.pos, BASKET)

    ball = state.ball
    if ball.owner is not None:
        ball.pos = state.players[ball.owner].pos.copy()
        # Dribbling out of the arc completes a ball clear.
        if not state.possession_cleared and beyond_arc(ball.pos):
            state.possession_cleared = True
            events.append(GameEvent(now, EventKind.BALL_CLEAR_SUCCESS, ball.owner, {}))

    # 3. Countdown and completions, resolved in a fixed category order.
    completed: list[PlayerEntity] = []
    for me in state.players:
        if me.remaining_ticks > 0:
            me.remaining_ticks -= 1
            if me.remaining_ticks == 0:
                completed.append(me)

    order = {ActionCategory.STEAL: 0, ActionCategory.BLOCK: 1, ActionCategory.PASS: 2,
             ActionCategory.SHOOT: 3, ActionCategory.GRAB: 4}
    resolvable = [p for p in completed
                  if catalog[p.current_action].category in order]
    resolvable.sort(key=lambda p: (order[catalog[p.current_action].category], p.pid))

    grabbers: list[PlayerEntity] = []
    for me in resolvable:
        spec = catalog[me.current_action]
        cat = spec.category
        if cat is ActionCategory.STEAL:
            _resolve_steal(state, me, events)
        elif cat is ActionCategory.BLOCK:
            _resolve_block_attempt(state, me)
        elif cat is ActionCategory.PASS:
            _resolve_pass_release(state, me, spec, events)
        elif cat is ActionCategory.SHOOT:
            _resolve_shot_release(state, me, spec, events)
        elif cat is ActionCategory.GRAB:
            grabbers.append(me)
    if grabbers:
        _resolve_grabs(state, grabbers, events)

    # 4. Ball flight.
    if ball.in_flight:
        _advance_flight(state, events)

    # 5. Clocks. The shot clock runs while the ball is owned or in flight.
    if ball.owner is not None or ball.in_flight:
        state.shot_clock_remaining -= 1
        if state.shot_clock_remaining <= 0:
            actor = ball.owner if ball.owner is not None else state.last_owner_pid
            offended = state.last_owning_team or Team.HOME
            events.append(GameEvent(now, EventKind.SHOT_CLOCK_VIOLATION, actor,
                                    {"team": offended.value}))
            _cancel_flight(state)
            _dead_ball_reset(state, offended.other)

    state.match_remaining -= 1
    state.tick += 1
    if state.match_remaining <= 0:
        events.append(GameEvent(now, EventKind.MATCH_END, None,
                                {"scores": [state.score_home, state.score_away]}))
        state.phase = Phase.OVER

    _refresh_scenes(state)
    return state, events


def _refresh_scenes(state: GameState) -> None:
    if state.phase is Phase.OVER:
        return
    for p in state.players:
        scene = scene_of(state, p.pid)
        if state._scene_cache.get(p.pid) is not scene:
            state._scene_cache[p.pid] = scene
            p.scene_since_tick = state.tick


def _resolve_steal(state: GameState, me: PlayerEntity, events: list[GameEvent]) -> None:
    t = state.config.tuning
    ball = state.ball
    if ball.owner is None:
        return
    holder = state.players[ball.owner]
    if holder.team is me.team or me.pos.dist(holder.pos) > t.steal_range:
        return
    if state.rng.random() < me.attrs.steal_skill * t.steal_success_mult:
        events.append(GameEvent(state.tick, EventKind.STEAL, me.pid,
                                {"victim": holder.pid}))
        _give_ball(state, me.pid)
        state.shot_clock_remaining = state.config.shot_clock_ticks


def _resolve_block_attempt(state: GameState, me: PlayerEntity) -> None:
    """A landed block marks the shooter; the Block event fires at release."""
    t = state.config.tuning
    catalog = state.catalog
    shooters = [
        p for p in state.opponents_of(me.pid)
        if p.has_ball and p.current_action is not None and p.remaining_ticks > 0
        and catalog[p.current_action].category is ActionCategory.SHOOT
        and me.pos.dist(p.pos) <= t.block_range
    ]
    if not shooters:
        return
    target = min(shooters, key=lambda p: (me.pos.dist(p.pos), p.pid))
    if state.rng.random() < me.attrs.block_skill:
        target.blocked_by = me.pid


def _resolve_pass_release(state: GameState, me: PlayerEntity, spec: ActionSpec,
                          events: list[GameEvent]) -> None:
    if not me.has_ball:
        return
    teammates = state.teammates_of(me.pid)
    if spec.target_slot >= len(teammates):
        return
    t = state.config.tuning
    target = teammates[spec.target_slot]
    ball = state.ball
    _release_ball(state)
    ball.in_flight = True
    ball.flight_target_pid = target.pid
    ball.flight_dest = target.pos.copy()
    ball.flight_from_team = me.team
    ball.flight_passer_pid = me.pid
    d = ball.pos.dist(ball.flight_dest)
    if d > 0:
        ball.vel = Vec2((ball.flight_dest.x - ball.pos.x) / d * t.pass_speed,
                        (ball.flight_dest.y - ball.pos.y) / d * t.pass_speed)
    else:
        ball.vel = Vec2(0.0, 0.0)
    me.facing = heading(me.pos, target.pos)


def _resolve_shot_release(state: GameState, me: PlayerEntity, spec: ActionSpec,
                          events: list[GameEvent]) -> None:
    if not me.has_ball:
        me.blocked_by = None
        return
    t = state.config.tuning
    if me.blocked_by is not None:
        blocker = me.blocked_by
        me.blocked_by = None
        events.append(GameEvent(state.tick, EventKind.BLOCK, blocker,
                                {"shooter": me.pid, "shot_type": spec.shot_type.value}))
        _release_ball(state)
        _scatter_ball(state, me.pos, t.block_scatter)
        return
    event = resolve_shot(state, me.pid, spec.shot_type, state.rng)
    events.append(event)
    state.shot_clock_remaining = state.config.shot_clock_ticks
    if event.kind in SCORING:
        points = SCORING[event.kind]
        if me.team is Team.HOME:
            state.score_home += points
        else:
            state.score_away += points
        _release_ball(state)
        _dead_ball_reset(state, me.team.other)
    else:
        _release_ball(state)
        _scatter_ball(state, BASKET, t.rebound_scatter)


def _scatter_ball(state: GameState, around: Vec2, radius: float) -> None:
    ball = state.ball
    angle = state.rng.random() * 2 * math.pi
    r = 0.3 + state.rng.random() * radius
    ball.pos = Vec2(around.x + math.cos(angle) * r, around.y + math.sin(angle) * r)
    clamp_to_court(ball.pos)
    ball.vel = Vec2(0.0, 0.0)
    ball.in_flight = False
    ball.flight_target_pid = None
    ball.flight_dest = None
    ball.flight_from_team = None


def _resolve_grabs(state: GameState, grabbers: list[PlayerEntity],
                   events: list[GameEvent]) -> None:
    t = state.config.tuning
    ball = state.ball
    if ball.owner is not None or ball.in_flight:
        return
    eligible = [p for p in grabbers if p.pos.dist(ball.pos) <= t.grab_range]
    if not eligible:
        return
    if len(eligible) == 1:
        winner = eligible[0]
    else:
        # Contested grab: winner drawn proportionally to jump attributes.
        weights = [max(p.attrs.jump, 1e-9) for p in eligible]
        total = sum(weights)
        draw = state.rng.random() * total
        acc = 0.0
        winner = eligible[-1]
        for p, w in zip(eligible, weights):
            acc += w
            if draw < acc:
                winner = p
                break
    prev_team = state.last_owning_team
    _give_ball(state, winner.pid)
    events.append(GameEvent(state.tick, EventKind.POSSESSION_GAINED, winner.pid, {}))
    if winner.team is not prev_team:
        state.shot_clock_remaining = state.config.shot_clock_ticks


def _advance_flight(state: GameState, events: list[GameEvent]) -> None:
    t = state.config.tuning
    ball = state.ball
    dest = ball.flight_dest
    step = t.pass_speed
    arrived = ball.pos.dist(dest) <= step
    if arrived:
        ball.pos = dest.copy()
    else:
        ball.pos.x += ball.vel.x
        ball.pos.y += ball.vel.y

    # Interception window: nearest opponent of the passing team within reach.
    defenders = [p for p in state.players
                 if p.team is not ball.flight_from_team
                 and p.pos.dist(ball.pos) <= t.intercept_range]
    if defenders:
        interceptor = min(defenders, key=lambda p: (p.pos.dist(ball.pos), p.pid))
        p_int = clamp(interceptor.attrs.steal_skill * t.intercept_prob_mult, 0.0, 0.9)
        if state.rng.random() < p_int:
            events.append(GameEvent(state.tick, EventKind.PASS_INTERCEPTED,
                                    interceptor.pid, {}))
            _give_ball(state, interceptor.pid)
            state.shot_clock_remaining = state.config.shot_clock_ticks
            return

    if arrived:
        target = state.players[ball.flight_target_pid]
        passer = ball.flight_passer_pid
        was_cleared = state.possession_cleared
        if target.pos.dist(ball.pos) <= t.catch_range:
            _give_ball(state, target.pid, cleared=was_cleared)
            events.append(GameEvent(state.tick, EventKind.PASS_COMPLETED,
                                    passer if passer is not None else target.pid,
                                    {"target": target.pid}))
            if not state.possession_cleared and beyond_arc(target.pos):
                state.possession_cleared = True
                events.append(GameEvent(state.tick, EventKind.BALL_CLEAR_SUCCESS,
                                        target.pid, {}))
        else:
            # Nobody home: the ball is loose where it landed.
            _cancel_flight(state)


def _cancel_flight(state: GameState) -> None:
    ball = state.ball
    ball.in_flight = False
    ball.flight_target_pid = None
    ball.flight_dest = None
    ball.flight_from_team = None
    ball.flight_passer_pid = None
    ball.vel = Vec2(0.0, 0.0)
