"""Players, ball, roles, and the per-role attribute presets."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .geometry import Vec2


class Team(Enum):
    HOME = "home"
    AWAY = "away"

    @property
    def other(self) -> "Team":
        return Team.AWAY if self is Team.HOME else Team.HOME


class Role(Enum):
    C = "C"
    PF = "PF"
    SF = "SF"
    PG = "PG"
    SG = "SG"


class SceneId(Enum):
    """The five rule-defined sub-tasks a player can be in at any tick."""

    ATTACK = "attack"
    ASSIST = "assist"
    DEFENSE = "defense"
    FREEBALL = "freeball"
    BALLCLEAR = "ballclear"


SCENES = tuple(SceneId)
SCENE_INDEX = {s: i for i, s in enumerate(SCENES)}


@dataclass(frozen=True)
class PlayerAttributes:
    move_speed: float = 0.45  # meters per tick
    shoot_close: float = 1.0  # per-shot-type multipliers, in [0.5, 1.5]
    shoot_mid: float = 1.0
    shoot_three: float = 1.0
    jump: float = 1.0
    steal_skill: float = 0.25
    block_skill: float = 0.25

    def __post_init__(self):
        for name in ("shoot_close", "shoot_mid", "shoot_three"):
            v = getattr(self, name)
            if not 0.5 <= v <= 1.5:
                raise ValueError(f"{name}={v} outside [0.5, 1.5]")
        for name in ("steal_skill", "block_skill"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
        if self.move_speed <= 0 or self.jump < 0:
            raise ValueError("move_speed must be positive, jump non-negative")

    def shoot_mult(self, shot_type) -> float:
        return {"close": self.shoot_close, "mid": self.shoot_mid, "three": self.shoot_three}[
            shot_type.value
        ]


# Positional presets: the roster is collapsed to five parametric roles.
ROLE_PRESETS: dict[Role, PlayerAttributes] = {
    Role.C: PlayerAttributes(move_speed=0.40, shoot_close=1.25, shoot_mid=0.85, shoot_three=0.60,
                             jump=1.30, steal_skill=0.15, block_skill=0.45),
    Role.PF: PlayerAttributes(move_speed=0.42, shoot_close=1.15, shoot_mid=0.95, shoot_three=0.75,
                              jump=1.15, steal_skill=0.18, block_skill=0.35),
    Role.SF: PlayerAttributes(move_speed=0.45, shoot_close=1.05, shoot_mid=1.05, shoot_three=1.00,
                              jump=1.00, steal_skill=0.25, block_skill=0.25),
    Role.PG: PlayerAttributes(move_speed=0.50, shoot_close=0.90, shoot_mid=1.05, shoot_three=1.10,
                              jump=0.85, steal_skill=0.40, block_skill=0.10),
    Role.SG: PlayerAttributes(move_speed=0.48, shoot_close=0.95, shoot_mid=1.10, shoot_three=1.25,
                              jump=0.90, steal_skill=0.30, block_skill=0.15),
}


class BotLevel(Enum):
    EASY = "easy"
    MEDIUM = "medium"
    HARD = "hard"


@dataclass(frozen=True)
class BotDifficulty:
    level: BotLevel
    reaction_delay_ticks: int
    shoot_rate_mult: float


BOT_DIFFICULTIES: dict[BotLevel, BotDifficulty] = {
    BotLevel.EASY: BotDifficulty(BotLevel.EASY, reaction_delay_ticks=6, shoot_rate_mult=0.8),
    BotLevel.MEDIUM: BotDifficulty(BotLevel.MEDIUM, reaction_delay_ticks=3, shoot_rate_mult=1.0),
    BotLevel.HARD: BotDifficulty(BotLevel.HARD, reaction_delay_ticks=1, shoot_rate_mult=1.15),
}


@dataclass(slots=True)
class PlayerEntity:
    pid: int
    team: Team
    role: Role
    pos: Vec2
    facing: float = 0.0
    attrs: PlayerAttributes = field(default_factory=PlayerAttributes)
    current_action: int | None = None
    remaining_ticks: int = 0
    has_ball: bool = False
    # Engine bookkeeping (not part of the decision surface):
    scene_since_tick: int = 0  # when the player last changed scene
    blocked_by: int | None = None  # a landed block waiting for the shot release

    @property
    def pollable(self) -> bool:
        return self.remaining_ticks == 0

    def snapshot(self) -> dict:
        return {
            "pid": self.pid,
            "team": self.team.value,
            "role": self.role.value,
            "pos": (self.pos.x, self.pos.y),
            "facing": self.facing,
            "current_action": self.current_action,
            "remaining_ticks": self.remaining_ticks,
            "has_ball": self.has_ball,
        }


@dataclass(slots=True)
class BallEntity:
    pos: Vec2
    vel: Vec2 = field(default_factory=lambda: Vec2(0.0, 0.0))
    owner: int | None = None
    owning_team: Team | None = None
    in_flight: bool = False
    # Pass bookkeeping while in flight:
    flight_target_pid: int | None = None
    flight_dest: Vec2 | None = None
    flight_from_team: Team | None = None
    flight_passer_pid: int | None = None

    def snapshot(self) -> dict:
        return {
            "pos": (self.pos.x, self.pos.y),
            "vel": (self.vel.x, self.vel.y),
            "owner": self.owner,
            "owning_team": self.owning_team.value if self.owning_team else None,
            "in_flight": self.in_flight,
        }


def preset_for(role: Role, overrides: dict | None = None) -> PlayerAttributes:
    base = ROLE_PRESETS[role]
    return replace(base, **overrides) if overrides else base


def scale_shooting(attrs: PlayerAttributes, mult: float) -> PlayerAttributes:
    """Scale shooting attributes by a difficulty multiplier, clamped to the
    legal attribute range. Bot-controlled players get their difficulty's
    shooting rate applied this way."""

    def c(v: float) -> float:
        return min(1.5, max(0.5, v * mult))

    return replace(attrs, shoot_close=c(attrs.shoot_close), shoot_mid=c(attrs.shoot_mid),
                   shoot_three=c(attrs.shoot_three))
