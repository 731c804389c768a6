"""Deterministic half-court basketball rules engine."""

from .actions import ActionCatalog, ActionCategory, ActionSpec, ShotType, build_catalog
from .bots import bot_policy, run_bot_match
from .config import ConfigError, MatchConfig, Tuning
from .engine import (
    ContractViolation,
    GameState,
    Phase,
    legal_actions,
    new_match,
    resolve_shot,
    scene_of,
    shot_probability,
    state_digest,
    team_scene,
    tick,
)
from .entities import (
    BOT_DIFFICULTIES,
    BallEntity,
    BotDifficulty,
    BotLevel,
    PlayerAttributes,
    PlayerEntity,
    Role,
    SceneId,
    Team,
)
from .events import EventKind, GameEvent
from .geometry import BASKET, COURT_LENGTH, COURT_WIDTH, THREE_POINT_RADIUS, Vec2

__all__ = [
    "ActionCatalog", "ActionCategory", "ActionSpec", "ShotType", "build_catalog",
    "bot_policy", "run_bot_match", "ConfigError", "MatchConfig", "Tuning",
    "ContractViolation", "GameState", "Phase", "legal_actions", "new_match",
    "resolve_shot", "scene_of", "shot_probability", "state_digest", "team_scene",
    "tick", "BOT_DIFFICULTIES", "BallEntity", "BotDifficulty", "BotLevel",
    "PlayerAttributes", "PlayerEntity", "Role", "SceneId", "Team",
    "EventKind", "GameEvent", "BASKET", "COURT_LENGTH", "COURT_WIDTH",
    "THREE_POINT_RADIUS", "Vec2",
]
