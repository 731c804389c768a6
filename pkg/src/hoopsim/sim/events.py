"""Match events: the reward triggers and the replay log unit."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum


class EventKind(Enum):
    GOAL2 = "Goal2"
    GOAL3 = "Goal3"
    SHOT_MISSED = "ShotMissed"
    STEAL = "Steal"
    BLOCK = "Block"
    PASS_COMPLETED = "PassCompleted"
    PASS_INTERCEPTED = "PassIntercepted"
    POSSESSION_GAINED = "PossessionGained"
    BALL_CLEAR_SUCCESS = "BallClearSuccess"
    SHOT_CLOCK_VIOLATION = "ShotClockViolation"
    MATCH_END = "MatchEnd"
    # Contract extension: an illegal action id at tick() is rejected with an
    # error event rather than an exception; the player idles that tick.
    ACTION_REJECTED = "ActionRejected"


SCORING = {EventKind.GOAL2: 2, EventKind.GOAL3: 3}


@dataclass(frozen=True)
class GameEvent:
    tick: int
    kind: EventKind
    actor: int | None = None
    payload: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {"tick": self.tick, "kind": self.kind.value, "actor": self.actor,
             "payload": self.payload},
            sort_keys=True,
        )

    @staticmethod
    def from_json(line: str) -> "GameEvent":
        d = json.loads(line)
        return GameEvent(d["tick"], EventKind(d["kind"]), d["actor"], d["payload"])
