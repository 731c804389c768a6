"""Action-space views over the catalog: the union space, per-scene spaces,
pass-reduced spaces, and the coordination switcher's pseudo-space."""

from __future__ import annotations

from dataclasses import dataclass

from ..sim import SceneId
from ..sim.actions import ActionCatalog, ActionCategory


@dataclass(frozen=True)
class ActionSpace:
    name: str
    ids: tuple[int, ...]  # catalog ids, ascending

    def __len__(self) -> int:
        return len(self.ids)

    def index_of(self, action_id: int) -> int:
        return self.ids.index(action_id)

    def mask_from_legal(self, legal_ids) -> list[bool]:
        return [aid in legal_ids for aid in self.ids]


def union_space(catalog: ActionCatalog) -> ActionSpace:
    return ActionSpace("union", tuple(range(len(catalog))))


def scene_space(catalog: ActionCatalog, scene: SceneId) -> ActionSpace:
    return ActionSpace(f"scene:{scene.value}", tuple(catalog.scene_action_ids(scene)))


def reduced_scene_space(catalog: ActionCatalog, scene: SceneId) -> ActionSpace:
    """Scene space with pass actions removed (owned by the switcher)."""
    passes = set(catalog.pass_ids())
    ids = tuple(a for a in catalog.scene_action_ids(scene) if a not in passes)
    return ActionSpace(f"reduced:{scene.value}", ids)


SWITCH_NO_PASS = -1


def switcher_space(catalog: ActionCatalog) -> ActionSpace:
    """NoPass plus the pass slots; NoPass delegates to the base learner."""
    return ActionSpace("switcher", (SWITCH_NO_PASS, *catalog.pass_ids()))


def index_lookup(space: ActionSpace) -> dict[int, int]:
    return {aid: i for i, aid in enumerate(space.ids)}
