"""Fixed-layout numeric observations built from the game state.

Every entry is finite and lies in [-1, 1]. The layout is fixed per team-size
configuration; a layout hash pins it for checkpoints.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

from .sim import GameState, SceneId, Team, scene_of
from .sim.actions import ActionCatalog
from .sim.entities import SCENE_INDEX
from .sim.geometry import (
    BASKET,
    COURT_LENGTH,
    COURT_WIDTH,
    clamp,
    dist_to_basket,
)

BALL_SPEED_NORM = 1.5  # m/tick
DIST_NORM = 13.0  # max distance from the basket to a court point, rounded up
SCORE_NORM = 10.0
SHOT_CLOCK_NORM = 200.0
MATCH_NORM = 1800.0

BALL_CLOCK_BLOCK = 6  # ball pos (2) + ball vel (2) + shot clock + match clock


@dataclass(frozen=True)
class ObsLayout:
    """Index map for one agent's local observation vector."""

    own_size: int
    opp_size: int

    @property
    def n_teammates(self) -> int:
        return self.own_size - 1

    @property
    def length(self) -> int:
        # self (5) + ball (4) + scalars (5) + scene one-hot (5) = 19 fixed.
        return 19 + 3 * self.n_teammates + 2 * self.opp_size

    # Named indices, in layout order.
    @property
    def idx_self_pos(self) -> int:
        return 0

    @property
    def idx_facing(self) -> int:
        return 2

    @property
    def idx_has_ball(self) -> int:
        return 4

    @property
    def idx_teammates(self) -> int:
        return 5

    @property
    def idx_opponents(self) -> int:
        return 5 + 3 * self.n_teammates

    @property
    def idx_ball(self) -> int:
        return self.idx_opponents + 2 * self.opp_size

    @property
    def idx_dist_basket(self) -> int:
        return self.idx_ball + 4

    @property
    def idx_defender_dist(self) -> int:
        return self.idx_dist_basket + 1

    @property
    def idx_shot_clock(self) -> int:
        return self.idx_defender_dist + 1

    @property
    def idx_match_clock(self) -> int:
        return self.idx_shot_clock + 1

    @property
    def idx_score_diff(self) -> int:
        return self.idx_match_clock + 1

    @property
    def idx_scene(self) -> int:
        return self.idx_score_diff + 1

    def describe(self) -> str:
        return (f"local_v1(own={self.own_size},opp={self.opp_size},"
                f"len={self.length})")


def layout_for(state: GameState, team: Team) -> ObsLayout:
    own = len(state.config.roles_of(team))
    opp = len(state.config.roles_of(team.other))
    return ObsLayout(own, opp)


def build_local(state: GameState, pid: int) -> list[float]:
    """One agent's local observation; see ObsLayout for the field order."""
    me = state.players[pid]
    ball = state.ball
    out = [
        me.pos.x / COURT_WIDTH,
        me.pos.y / COURT_LENGTH,
        math.sin(me.facing),
        math.cos(me.facing),
        1.0 if me.has_ball else 0.0,
    ]
    for mate in state.teammates_of(pid):
        out.append(clamp((mate.pos.x - me.pos.x) / COURT_WIDTH, -1.0, 1.0))
        out.append(clamp((mate.pos.y - me.pos.y) / COURT_LENGTH, -1.0, 1.0))
        out.append(1.0 if mate.has_ball else 0.0)
    nearest = math.inf
    for opp in state.opponents_of(pid):
        out.append(clamp((opp.pos.x - me.pos.x) / COURT_WIDTH, -1.0, 1.0))
        out.append(clamp((opp.pos.y - me.pos.y) / COURT_LENGTH, -1.0, 1.0))
        nearest = min(nearest, me.pos.dist(opp.pos))
    out.append(ball.pos.x / COURT_WIDTH)
    out.append(ball.pos.y / COURT_LENGTH)
    out.append(clamp(ball.vel.x / BALL_SPEED_NORM, -1.0, 1.0))
    out.append(clamp(ball.vel.y / BALL_SPEED_NORM, -1.0, 1.0))
    out.append(clamp(dist_to_basket(me.pos) / DIST_NORM, 0.0, 1.0))
    out.append(clamp(nearest / DIST_NORM, 0.0, 1.0))
    out.append(clamp(state.shot_clock_remaining / SHOT_CLOCK_NORM, 0.0, 1.0))
    out.append(clamp(state.match_remaining / MATCH_NORM, 0.0, 1.0))
    own_score = state.score_of(me.team)
    opp_score = state.score_of(me.team.other)
    out.append(clamp((own_score - opp_score) / SCORE_NORM, -1.0, 1.0))
    scene = scene_of(state, pid)
    onehot = [0.0] * 5
    onehot[SCENE_INDEX[scene]] = 1.0
    out.extend(onehot)
    return out


def build_global(state: GameState) -> list[float]:
    """All players' local observations concatenated, plus a ball/clock block."""
    out: list[float] = []
    for p in state.players:
        out.extend(build_local(state, p.pid))
    ball = state.ball
    out.extend([
        ball.pos.x / COURT_WIDTH,
        ball.pos.y / COURT_LENGTH,
        clamp(ball.vel.x / BALL_SPEED_NORM, -1.0, 1.0),
        clamp(ball.vel.y / BALL_SPEED_NORM, -1.0, 1.0),
        clamp(state.shot_clock_remaining / SHOT_CLOCK_NORM, 0.0, 1.0),
        clamp(state.match_remaining / MATCH_NORM, 0.0, 1.0),
    ])
    return out


def global_length(state: GameState) -> int:
    n_home = len(state.config.roles_of(Team.HOME))
    n_away = len(state.config.roles_of(Team.AWAY))
    home_len = ObsLayout(n_home, n_away).length
    away_len = ObsLayout(n_away, n_home).length
    return n_home * home_len + n_away * away_len + BALL_CLOCK_BLOCK


def layout_hash(layout: ObsLayout, catalog: ActionCatalog, approximator: str) -> str:
    """Pin the observation layout + action catalog + approximator family."""
    raw = "|".join([layout.describe(), catalog.layout_token(), approximator])
    return hashlib.sha256(raw.encode()).hexdigest()[:16]
