"""Scripted rule-based bots with difficulty-dependent reaction time and
shooting propensity."""

from __future__ import annotations

import math
import random

from .actions import ActionCategory, ShotType
from .config import MatchConfig
from .engine import (
    GameState,
    Phase,
    legal_actions,
    new_match,
    scene_of,
    shot_probability,
    tick,
)
from .entities import BotDifficulty, BotLevel, BOT_DIFFICULTIES, SceneId, Team, scale_shooting
from .events import GameEvent
from .geometry import BASKET, Vec2, beyond_arc, dist_to_basket, heading


def _angle_diff(a: float, b: float) -> float:
    d = (a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


def _move_toward(state: GameState, target: Vec2, me) -> int:
    """The move whose direction best matches the bearing to the target."""
    want = heading(me.pos, target)
    best, best_d = None, 1e9
    for spec in state.catalog.specs:
        if spec.category is not ActionCategory.MOVE:
            continue
        d = _angle_diff(spec.direction, want)
        if d < best_d - 1e-12:
            best, best_d = spec.id, d
    return best


def _move_away_from(state: GameState, anchor: Vec2, me) -> int:
    mirror = Vec2(2 * me.pos.x - anchor.x, 2 * me.pos.y - anchor.y)
    return _move_toward(state, mirror, me)


def _nearest_opponent_dist(state: GameState, pid: int) -> float:
    me = state.players[pid]
    return min(me.pos.dist(o.pos) for o in state.opponents_of(pid))


def _natural_shot(dist: float) -> ShotType:
    if dist < 2.5:
        return ShotType.CLOSE
    if dist < 5.0:
        return ShotType.MID
    return ShotType.THREE


def bot_policy(state: GameState, pid: int, difficulty: BotDifficulty,
               rng: random.Random) -> int:
    """Pick an action for a pollable bot.

    The bot idles for its reaction delay after every scene change, then plays
    a simple per-scene script; shot attempts are gated by the closed-form
    success probability scaled with the difficulty's shooting rate.
    """
    me = state.players[pid]
    catalog = state.catalog
    idle = catalog.idle_id
    if state.tick - me.scene_since_tick < difficulty.reaction_delay_ticks:
        return idle
    scene = scene_of(state, pid)
    legal = legal_actions(state, pid)
    t = state.config.tuning

    if scene is SceneId.FREEBALL:
        ball = state.ball
        if me.pos.dist(ball.pos) <= t.grab_range * 0.9:
            grab = catalog.by_name["Grab"].id
            if grab in legal:
                return grab
        return _move_toward(state, ball.pos, me)

    if scene is SceneId.ATTACK:
        d = dist_to_basket(me.pos)
        shot = _natural_shot(d)
        # The difficulty's shooting rate is baked into the bot's attributes,
        # so the probability read here already reflects it.
        p = shot_probability(state, pid, shot)
        late = state.shot_clock_remaining < t.bot_late_clock
        if late or p >= t.bot_shoot_threshold:
            aid = catalog.by_name[
                {ShotType.CLOSE: "ShootClose", ShotType.MID: "ShootMid",
                 ShotType.THREE: "ShootThree"}[shot]].id
            if aid in legal:
                return aid
        # Kick out to an open teammate closer to the basket than we are.
        teammates = state.teammates_of(pid)
        for slot, mate in enumerate(teammates):
            mate_pressure = min(mate.pos.dist(o.pos) for o in state.opponents_of(pid))
            if (mate_pressure > t.bot_open_dist
                    and dist_to_basket(mate.pos) < d - 0.5):
                aid = catalog.by_name[f"Pass_slot{slot + 1}"].id
                if aid in legal:
                    return aid
        drive = catalog.by_name["Drive"].id
        return drive if drive in legal else idle

    if scene is SceneId.ASSIST:
        if dist_to_basket(me.pos) > 3.5:
            aid = catalog.by_name["Cut"].id
        else:
            aid = catalog.by_name["Screen"].id
        return aid if aid in legal else idle

    if scene is SceneId.DEFENSE:
        opponents = state.opponents_of(pid)
        holder = next((o for o in opponents if o.has_ball), None)
        if holder is not None and me.pos.dist(holder.pos) <= t.steal_range:
            shooting = (holder.current_action is not None
                        and holder.remaining_ticks > 0
                        and catalog[holder.current_action].category is ActionCategory.SHOOT)
            aid = catalog.by_name["Block" if shooting else "Steal"].id
            if aid in legal:
                return aid
        mates = state.team_players(me.team)
        mark = opponents[mates.index(me) % len(opponents)]
        goal_side = Vec2(mark.pos.x, mark.pos.y)
        # Stand on the basket side of the mark.
        d = mark.pos.dist(BASKET)
        if d > 1.0:
            goal_side.x += (BASKET.x - mark.pos.x) / d
            goal_side.y += (BASKET.y - mark.pos.y) / d
        if me.pos.dist(goal_side) < 0.4:
            return idle
        return _move_toward(state, goal_side, me)

    # Ballclear: pass to a teammate already outside the arc, else dribble out.
    teammates = state.teammates_of(pid)
    for slot, mate in enumerate(teammates):
        mate_pressure = min(mate.pos.dist(o.pos) for o in state.opponents_of(pid))
        if beyond_arc(mate.pos) and mate_pressure > t.bot_open_dist:
            aid = catalog.by_name[f"Pass_slot{slot + 1}"].id
            if aid in legal:
                return aid
    return _move_away_from(state, BASKET, me)


def apply_bot_shooting(state: GameState, team: Team, level: BotLevel) -> None:
    """Bake the difficulty's shooting rate into a bot team's attributes."""
    mult = BOT_DIFFICULTIES[level].shoot_rate_mult
    for p in state.team_players(team):
        p.attrs = scale_shooting(p.attrs, mult)


def run_bot_match(config: MatchConfig, seed: int,
                  home: BotLevel | None = BotLevel.MEDIUM,
                  away: BotLevel | None = BotLevel.MEDIUM,
                  random_teams: tuple[Team, ...] = (),
                  ) -> tuple[GameState, list[GameEvent]]:
    """Run a full bot-vs-bot match without the environment layer.

    Teams listed in random_teams pick uniformly among legal actions instead
    of the scripted policy (used as a fixed weak baseline).
    """
    state = new_match(config, seed)
    levels = {Team.HOME: home, Team.AWAY: away}
    for team, level in levels.items():
        if level is not None and team not in random_teams:
            apply_bot_shooting(state, team, level)
    events: list[GameEvent] = []
    while state.phase is not Phase.OVER:
        starts: dict[int, int] = {}
        for pid in state.pollable_ids():
            p = state.players[pid]
            if p.team in random_teams:
                legal = sorted(legal_actions(state, pid))
                starts[pid] = legal[state.rng.randrange(len(legal))]
            else:
                difficulty = BOT_DIFFICULTIES[levels[p.team]]
                starts[pid] = bot_policy(state, pid, difficulty, state.rng)
        _, evs = tick(state, starts)
        events.extend(evs)
    return state, events
