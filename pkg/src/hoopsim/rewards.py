"""Scene-scoped event rewards.

Offense (attack & assist) is rewarded by goals and punished by turnovers;
defense is the exact negation; freeball pays for winning the ball; ballclear
pays for bringing a gained ball out of the arc.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .sim import EventKind, GameEvent, SceneId, Team

OWN, OPP, ANY = "own", "opp", "any"


@dataclass(frozen=True)
class RewardRule:
    kind: EventKind
    perspective: str  # OWN: actor on agent's team; OPP: actor on the other team
    value: float


_OFFENSE_RULES = (
    RewardRule(EventKind.GOAL2, OWN, 2.0),
    RewardRule(EventKind.GOAL3, OWN, 3.0),
    RewardRule(EventKind.STEAL, OPP, -1.0),
    RewardRule(EventKind.BLOCK, OPP, -1.0),
    RewardRule(EventKind.PASS_INTERCEPTED, OPP, -1.0),
    RewardRule(EventKind.SHOT_CLOCK_VIOLATION, OWN, -1.0),
    RewardRule(EventKind.MATCH_END, ANY, -1.0),
)

# Defense mirrors offense exactly, sign-flipped.
_DEFENSE_RULES = tuple(
    RewardRule(r.kind, {OWN: OPP, OPP: OWN, ANY: ANY}[r.perspective], -r.value)
    for r in _OFFENSE_RULES
)

_FREEBALL_RULES = (
    RewardRule(EventKind.POSSESSION_GAINED, OWN, 1.0),
    RewardRule(EventKind.POSSESSION_GAINED, OPP, -1.0),
    RewardRule(EventKind.PASS_INTERCEPTED, OWN, 1.0),
    RewardRule(EventKind.PASS_INTERCEPTED, OPP, -1.0),
    RewardRule(EventKind.MATCH_END, ANY, -1.0),
)

_BALLCLEAR_RULES = (
    RewardRule(EventKind.BALL_CLEAR_SUCCESS, OWN, 1.0),
    RewardRule(EventKind.STEAL, OPP, -1.0),
    RewardRule(EventKind.BLOCK, OPP, -1.0),
    RewardRule(EventKind.PASS_INTERCEPTED, OPP, -1.0),
    RewardRule(EventKind.SHOT_CLOCK_VIOLATION, OWN, -1.0),
    RewardRule(EventKind.MATCH_END, ANY, -1.0),
)


@dataclass(frozen=True)
class RewardScheme:
    rules: dict

    def reward(self, scene: SceneId, event: GameEvent, own: bool | None) -> float:
        total = 0.0
        for rule in self.rules.get(scene, ()):
            if rule.kind is not event.kind:
                continue
            if rule.perspective == ANY or \
                    (rule.perspective == OWN and own is True) or \
                    (rule.perspective == OPP and own is False):
                total += rule.value
        return total


def default_scheme() -> RewardScheme:
    return RewardScheme(rules={
        SceneId.ATTACK: _OFFENSE_RULES,
        SceneId.ASSIST: _OFFENSE_RULES,
        SceneId.DEFENSE: _DEFENSE_RULES,
        SceneId.FREEBALL: _FREEBALL_RULES,
        SceneId.BALLCLEAR: _BALLCLEAR_RULES,
    })


DEFAULT_SCHEME = default_scheme()


def reward_for(events: Iterable[GameEvent], agent_team: Team, scene: SceneId,
               team_of: Callable[[int], Team],
               scheme: RewardScheme = DEFAULT_SCHEME) -> float:
    """Scalar reward for an agent that was in `scene` when `events` fired."""
    total = 0.0
    for e in events:
        own = None if e.actor is None else team_of(e.actor) is agent_team
        total += scheme.reward(scene, e, own)
    return total
