"""The primitive action catalog.

Every action is a catalog entry with a fixed execution duration in ticks.
Heterogeneous durations are what make teammates' decision points drift apart,
so the duration table is the load-bearing part; the specific numbers are
config-overridable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .entities import Role, SceneId


class ActionCategory(Enum):
    IDLE = "Idle"
    MOVE = "Move"
    PASS = "Pass"
    SHOOT = "Shoot"
    DRIVE = "Drive"
    SCREEN = "Screen"
    CUT = "Cut"
    REQUEST = "Request"
    STEAL = "Steal"
    BLOCK = "Block"
    GRAB = "Grab"


class ShotType(Enum):
    CLOSE = "close"
    MID = "mid"
    THREE = "three"


# Default execution durations in ticks (1 tick = 100 ms).
DEFAULT_DURATIONS: dict[str, int] = {
    "Idle": 1,
    "Move": 2,
    "Grab": 2,
    "Request": 2,
    "Pass": 3,
    "Drive": 3,
    "ShootClose": 4,
    "Steal": 4,
    "Cut": 4,
    "Block": 5,
    "ShootMid": 5,
    "Screen": 6,
    "ShootThree": 6,
}

# Eight compass move directions, angle measured from +x toward +y.
MOVE_DIRECTIONS: list[tuple[str, float]] = [
    ("E", 0.0),
    ("NE", math.pi / 4),
    ("N", math.pi / 2),
    ("NW", 3 * math.pi / 4),
    ("W", math.pi),
    ("SW", -3 * math.pi / 4),
    ("S", -math.pi / 2),
    ("SE", -math.pi / 4),
]

ALL_ROLES = frozenset(Role)


@dataclass(frozen=True)
class ActionSpec:
    id: int
    name: str
    category: ActionCategory
    duration_ticks: int
    availability: frozenset  # of (SceneId, Role) pairs
    direction: float | None = None  # radians, Move only
    target_slot: int | None = None  # teammate slot, Pass only
    shot_type: ShotType | None = None

    def available(self, scene: SceneId, role: Role) -> bool:
        return (scene, role) in self.availability


def _pairs(scenes: tuple[SceneId, ...], roles=ALL_ROLES) -> frozenset:
    return frozenset((s, r) for s in scenes for r in roles)


@dataclass
class ActionCatalog:
    """Union action space; per-scene subsets are views over it."""

    specs: list[ActionSpec]
    by_name: dict[str, ActionSpec] = field(init=False)

    def __post_init__(self):
        self.by_name = {a.name: a for a in self.specs}
        for i, a in enumerate(self.specs):
            if a.id != i:
                raise ValueError(f"catalog ids must be dense, got {a.id} at {i}")

    def __len__(self) -> int:
        return len(self.specs)

    def __getitem__(self, action_id: int) -> ActionSpec:
        return self.specs[action_id]

    @property
    def idle_id(self) -> int:
        return self.by_name["Idle"].id

    def scene_action_ids(self, scene: SceneId) -> list[int]:
        """Canonical per-scene action space, in id order, any role."""
        return [a.id for a in self.specs if any(p[0] == scene for p in a.availability)]

    def ids_for(self, scene: SceneId, role: Role) -> list[int]:
        return [a.id for a in self.specs if a.available(scene, role)]

    def pass_ids(self) -> list[int]:
        return [a.id for a in self.specs if a.category is ActionCategory.PASS]

    def layout_token(self) -> str:
        """Stable description used in checkpoint layout hashes."""
        return ";".join(
            f"{a.id}:{a.name}:{a.category.value}:{a.duration_ticks}" for a in self.specs
        )


def build_catalog(duration_overrides: dict[str, int] | None = None) -> ActionCatalog:
    """Build the default reduced catalog.

    Attack (ball holder): Idle, 8 moves, Drive, 3 shots, 2 pass slots (15).
    Assist: Idle, 8 moves, Cut, Screen, Request.
    Defense: Idle, 8 moves, Steal, Block.
    Freeball: Idle, 8 moves, Grab.
    Ballclear: Idle, 8 moves, 2 pass slots.
    """
    durations = dict(DEFAULT_DURATIONS)
    if duration_overrides:
        unknown = set(duration_overrides) - set(durations)
        if unknown:
            raise ValueError(f"unknown duration keys: {sorted(unknown)}")
        durations.update(duration_overrides)
    for name, d in durations.items():
        if not isinstance(d, int) or d < 1:
            raise ValueError(f"duration for {name} must be a positive integer")
    if durations["Idle"] != 1:
        raise ValueError("Idle duration is fixed at 1 tick")

    all_scenes = tuple(SceneId)
    move_scenes = all_scenes
    specs: list[ActionSpec] = []

    def add(name, category, dur_key, scenes, **kw):
        specs.append(
            ActionSpec(
                id=len(specs),
                name=name,
                category=category,
                duration_ticks=durations[dur_key],
                availability=_pairs(scenes),
                **kw,
            )
        )

    add("Idle", ActionCategory.IDLE, "Idle", all_scenes)
    for suffix, angle in MOVE_DIRECTIONS:
        add(f"Move_{suffix}", ActionCategory.MOVE, "Move", move_scenes, direction=angle)
    add("Drive", ActionCategory.DRIVE, "Drive", (SceneId.ATTACK,))
    add("ShootClose", ActionCategory.SHOOT, "ShootClose", (SceneId.ATTACK,), shot_type=ShotType.CLOSE)
    add("ShootMid", ActionCategory.SHOOT, "ShootMid", (SceneId.ATTACK,), shot_type=ShotType.MID)
    add("ShootThree", ActionCategory.SHOOT, "ShootThree", (SceneId.ATTACK,), shot_type=ShotType.THREE)
    add("Pass_slot1", ActionCategory.PASS, "Pass", (SceneId.ATTACK, SceneId.BALLCLEAR), target_slot=0)
    add("Pass_slot2", ActionCategory.PASS, "Pass", (SceneId.ATTACK, SceneId.BALLCLEAR), target_slot=1)
    add("Cut", ActionCategory.CUT, "Cut", (SceneId.ASSIST,))
    add("Screen", ActionCategory.SCREEN, "Screen", (SceneId.ASSIST,))
    add("Request", ActionCategory.REQUEST, "Request", (SceneId.ASSIST,))
    add("Steal", ActionCategory.STEAL, "Steal", (SceneId.DEFENSE,))
    add("Block", ActionCategory.BLOCK, "Block", (SceneId.DEFENSE,))
    add("Grab", ActionCategory.GRAB, "Grab", (SceneId.FREEBALL,))

    return ActionCatalog(specs)
