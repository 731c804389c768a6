"""Match configuration and validation."""

from __future__ import annotations

from dataclasses import dataclass, field

from .actions import ActionCatalog, build_catalog
from .entities import Role, Team, preset_for


class ConfigError(ValueError):
    """Raised for invalid match or training configuration."""


@dataclass(frozen=True)
class Tuning:
    """Centralized probability/geometry tunables for action resolution.

    These are engine design choices, deliberately kept in one place and
    overridable through the match config file.
    """

    base_p_close: float = 0.60
    base_p_mid: float = 0.45
    base_p_three: float = 0.35
    p_floor: float = 0.05
    p_ceil: float = 0.95
    # Shot quality drops linearly with distance to the basket, floored.
    dist_factor_intercept: float = 1.15
    dist_factor_slope: float = 0.06
    dist_factor_floor: float = 0.30
    # Contest factor by nearest-defender distance.
    contest_near_dist: float = 1.0
    contest_near_factor: float = 0.5
    contest_mid_dist: float = 2.0
    contest_mid_factor: float = 0.75
    steal_range: float = 1.2
    steal_success_mult: float = 0.7
    block_range: float = 1.6
    grab_range: float = 0.9
    catch_range: float = 0.9
    intercept_range: float = 0.7
    intercept_prob_mult: float = 0.9
    pass_speed: float = 1.2  # meters per tick
    rebound_scatter: float = 1.6
    block_scatter: float = 1.0
    cut_speed_mult: float = 0.9
    bot_shoot_threshold: float = 0.42
    bot_open_dist: float = 2.0
    bot_late_clock: int = 40

    def base_p(self, shot_type) -> float:
        return {"close": self.base_p_close, "mid": self.base_p_mid,
                "three": self.base_p_three}[shot_type.value]


# Clock lengths in ticks (1 tick = 100 ms): a 3-minute match, 20-second shot clock.
DEFAULT_MATCH_TICKS = 1800
DEFAULT_SHOT_CLOCK_TICKS = 200

DEFAULT_ROLE_ORDER = [Role.PG, Role.SG, Role.SF, Role.PF, Role.C]

# Who takes the jump / receives dead-ball resets, by role preference.
HANDLER_PRIORITY = [Role.PG, Role.SG, Role.SF, Role.PF, Role.C]


@dataclass
class MatchConfig:
    home_roles: list[Role] = field(default_factory=lambda: [Role.PG, Role.SG, Role.SF])
    away_roles: list[Role] = field(default_factory=lambda: [Role.PG, Role.SG, Role.SF])
    match_ticks: int = DEFAULT_MATCH_TICKS
    shot_clock_ticks: int = DEFAULT_SHOT_CLOCK_TICKS
    duration_overrides: dict[str, int] = field(default_factory=dict)
    attribute_overrides: dict[str, dict] = field(default_factory=dict)  # role name -> fields
    tuning: Tuning = field(default_factory=Tuning)

    def __post_init__(self):
        for team, roles in (("home", self.home_roles), ("away", self.away_roles)):
            if not 1 <= len(roles) <= 3:
                raise ConfigError(f"{team} team size must be 1, 2, or 3, got {len(roles)}")
            if len(set(roles)) != len(roles):
                raise ConfigError(f"duplicate roles within {team} team: {roles}")
        if self.match_ticks < 1 or self.shot_clock_ticks < 1:
            raise ConfigError("clock lengths must be positive")

    @property
    def team_sizes(self) -> tuple[int, int]:
        return len(self.home_roles), len(self.away_roles)

    def roles_of(self, team: Team) -> list[Role]:
        return self.home_roles if team is Team.HOME else self.away_roles

    def build_catalog(self) -> ActionCatalog:
        return build_catalog(self.duration_overrides)

    def attrs_for(self, role: Role):
        return preset_for(role, self.attribute_overrides.get(role.value))

    @staticmethod
    def from_dict(d: dict) -> "MatchConfig":
        def parse_roles(v):
            try:
                return [Role(r) for r in v]
            except ValueError as e:
                raise ConfigError(f"unknown role in {v}") from e

        kwargs = {}
        if "home_roles" in d:
            kwargs["home_roles"] = parse_roles(d["home_roles"])
        if "away_roles" in d:
            kwargs["away_roles"] = parse_roles(d["away_roles"])
        for k in ("match_ticks", "shot_clock_ticks", "duration_overrides",
                  "attribute_overrides"):
            if k in d:
                kwargs[k] = d[k]
        if "tuning" in d:
            try:
                kwargs["tuning"] = Tuning(**d["tuning"])
            except TypeError as e:
                raise ConfigError(f"bad tuning keys: {e}") from e
        unknown = set(d) - {"home_roles", "away_roles", "match_ticks", "shot_clock_ticks",
                            "duration_overrides", "attribute_overrides", "tuning"}
        if unknown:
            raise ConfigError(f"unknown match config keys: {sorted(unknown)}")
        return MatchConfig(**kwargs)

    def to_dict(self) -> dict:
        from dataclasses import asdict

        return {
            "home_roles": [r.value for r in self.home_roles],
            "away_roles": [r.value for r in self.away_roles],
            "match_ticks": self.match_ticks,
            "shot_clock_ticks": self.shot_clock_ticks,
            "duration_overrides": dict(self.duration_overrides),
            "attribute_overrides": {k: dict(v) for k, v in self.attribute_overrides.items()},
            "tuning": asdict(self.tuning),
        }
