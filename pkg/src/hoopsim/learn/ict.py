"""Integrated curricula machinery: one learner per rule-defined sub-task with
cascading targets, plus a higher-priority switcher that owns pass decisions in
the ball-holder scenes and thereby shrinks the base action spaces."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..experience import AgentTransition, ReplayBuffer
from ..observations import build_local
from ..sim import GameState, SceneId, legal_actions, scene_of
from ..sim.actions import ActionCatalog
from .spaces import (
    SWITCH_NO_PASS,
    ActionSpace,
    reduced_scene_space,
    scene_space,
    switcher_space,
)
from .updates import select_action

# Typical succession between sub-tasks (offense ends in a scramble, a gained
# ball is cleared into attack). Cascading targets use the successor actually
# observed in each transition; this map is the documented nominal structure.
TYPICAL_SUCCESSORS: dict[SceneId, SceneId] = {
    SceneId.ATTACK: SceneId.FREEBALL,
    SceneId.ASSIST: SceneId.FREEBALL,
    SceneId.DEFENSE: SceneId.FREEBALL,
    SceneId.FREEBALL: SceneId.BALLCLEAR,
    SceneId.BALLCLEAR: SceneId.ATTACK,
}

SWITCHER_SCENES = (SceneId.ATTACK, SceneId.BALLCLEAR)


@dataclass
class LearnerSlot:
    q: object
    target: object
    buffer: ReplayBuffer
    space: ActionSpace

    def sync(self) -> None:
        self.target.sync_from(self.q)


@dataclass
class CurriculumLearnerSet:
    slots: dict[SceneId, LearnerSlot]
    successors: dict[SceneId, SceneId] = field(
        default_factory=lambda: dict(TYPICAL_SUCCESSORS))

    def slot(self, scene: SceneId) -> LearnerSlot:
        return self.slots[scene]

    def sync_all(self) -> None:
        for slot in self.slots.values():
            slot.sync()


@dataclass
class CoordinationSwitcher:
    q: object
    target: object
    buffer: ReplayBuffer
    space: ActionSpace  # (NoPass, Pass_slot1, Pass_slot2)
    scenes: tuple[SceneId, ...] = SWITCHER_SCENES
    # Pass decisions are temporally extended, so the switcher explores at a
    # fraction of the base learners' rate; full-rate exploration churns
    # possessions with random passes.
    epsilon_scale: float = 0.25

    def sync(self) -> None:
        self.target.sync_from(self.q)

    def mask_for(self, legal_ids) -> list[bool]:
        return [aid == SWITCH_NO_PASS or aid in legal_ids for aid in self.space.ids]

    def legal_ids_at(self, legal_ids) -> frozenset[int]:
        return frozenset(a for a in self.space.ids
                         if a == SWITCH_NO_PASS or a in legal_ids)


def build_curriculum_set(catalog: ActionCatalog, make_q, buffer_capacity: int,
                         reduced: bool) -> CurriculumLearnerSet:
    """One (q, target, buffer) per scene; reduced spaces drop pass actions."""
    slots = {}
    for scene in SceneId:
        space = (reduced_scene_space(catalog, scene) if reduced
                 else scene_space(catalog, scene))
        q = make_q(len(space))
        slots[scene] = LearnerSlot(q=q, target=q.clone(),
                                   buffer=ReplayBuffer(buffer_capacity),
                                   space=space)
    return CurriculumLearnerSet(slots=slots)


def build_switcher(catalog: ActionCatalog, make_q,
                   buffer_capacity: int) -> CoordinationSwitcher:
    space = switcher_space(catalog)
    q = make_q(len(space))
    return CoordinationSwitcher(q=q, target=q.clone(),
                                buffer=ReplayBuffer(buffer_capacity), space=space)


def ict_decide(state: GameState, pid: int, learner_set: CurriculumLearnerSet,
               switcher: CoordinationSwitcher | None, epsilon: float,
               rng: random.Random, obs: list[float] | None = None,
               legal=None) -> tuple[int, int | None]:
    """Pick an action; returns (catalog action id, switcher choice or None).

    In the ball-holder scenes the switcher decides first: a pass choice is
    returned immediately, NoPass delegates to the scene's base learner over
    the pass-reduced space. Other scenes go straight to their base learner.
    """
    scene = scene_of(state, pid)
    if obs is None:
        obs = build_local(state, pid)
    if legal is None:
        legal = legal_actions(state, pid)
    sw_choice = None
    if switcher is not None and scene in switcher.scenes:
        mask = switcher.mask_for(legal)
        idx = select_action(switcher.q.q_values(obs), mask,
                            epsilon * switcher.epsilon_scale, rng)
        sw_choice = switcher.space.ids[idx]
        if sw_choice != SWITCH_NO_PASS:
            return sw_choice, sw_choice
    slot = learner_set.slot(scene)
    mask = slot.space.mask_from_legal(legal)
    idx = select_action(slot.q.q_values(obs), mask, epsilon, rng)
    return slot.space.ids[idx], sw_choice


def ict_act(state: GameState, pid: int, learner_set: CurriculumLearnerSet,
            switcher: CoordinationSwitcher | None, epsilon: float,
            rng: random.Random) -> int:
    action, _ = ict_decide(state, pid, learner_set, switcher, epsilon, rng)
    return action


@dataclass
class _OpenSwitch:
    pid: int
    scene: SceneId
    s: list[float]
    a: int  # switcher-space id (SWITCH_NO_PASS or a pass catalog id)
    start_tick: int
    reward: float = 0.0


OFFENSE_SCENES = (SceneId.ATTACK, SceneId.ASSIST, SceneId.BALLCLEAR)


class SwitcherRecorder:
    """Transitions for the switcher: one record per pass decision, rewarded
    with the agent's offense-scene rewards until its next decision or until
    the team stops attacking."""

    def __init__(self, env, pids, switcher: CoordinationSwitcher,
                 sink) -> None:
        self.env = env
        self.pids = sorted(pids)
        self.switcher = switcher
        self.sink = sink
        self.open: dict[int, _OpenSwitch] = {}
        env.observers.append(self.on_tick)

    def on_decision(self, pid: int, scene: SceneId, obs: list[float],
                    sw_choice: int, tick: int, legal_ids) -> None:
        prev = self.open.pop(pid, None)
        if prev is not None:
            self._emit(prev, obs, done=False,
                       next_legal=self.switcher.legal_ids_at(legal_ids))
        self.open[pid] = _OpenSwitch(pid=pid, scene=scene, s=obs, a=sw_choice,
                                     start_tick=tick)

    def on_tick(self, rec) -> None:
        state = self.env.state
        for pid, record in list(self.open.items()):
            record.reward += rec.rewards.get(pid, 0.0)
            if rec.done:
                self._close_terminal(record, state)
            elif scene_of(state, pid) not in OFFENSE_SCENES:
                self._close_terminal(record, state)

    def _close_terminal(self, record: _OpenSwitch, state: GameState) -> None:
        obs = build_local(state, record.pid)
        self._emit(record, obs, done=True, next_legal=frozenset([SWITCH_NO_PASS]))
        del self.open[record.pid]

    def _emit(self, record: _OpenSwitch, s_next, done: bool, next_legal) -> None:
        self.sink(AgentTransition(
            pid=record.pid, curriculum=record.scene, s=record.s, a=record.a,
            r=record.reward, s_next=s_next, done=done,
            duration=0, start_tick=record.start_tick, end_tick=record.start_tick,
            next_legal=next_legal))
