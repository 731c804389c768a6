"""Learning records from asynchronous rollouts.

Per-agent records close at action completion, or early when the agent's scene
changes mid-action (the curriculum episode ended under it). Joint records come
in two flavors:

* mask assembly: sample at every tick where at least one teammate starts an
  action, recording mid-execution teammates as Idle;
* splice assembly: wait until the whole team is simultaneously action-complete,
  then emit one transition per agent anchored at that agent's own action-start
  observation. Only each agent's final in-window action is spliced, so short
  actions squeezed before a teammate's long one leave no joint record.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .env import MatchEnv, StepReport, TickRecord
from .observations import build_global, build_local
from .sim import GameState, SceneId, Team, legal_actions, scene_of, team_scene


@dataclass
class AgentTransition:
    pid: int
    curriculum: SceneId
    s: list[float]
    a: int
    r: float
    s_next: list[float]
    done: bool
    duration: int
    start_tick: int
    end_tick: int
    next_legal: frozenset[int]
    # Present when the record closed because the scene changed: the agent's
    # first observation in the successor curriculum, for cascading targets.
    successor: SceneId | None = None
    successor_obs: list[float] | None = None
    successor_legal: frozenset[int] | None = None
    # Approximator-side memo (discretized keys / feature vectors); replay
    # buffers resample transitions many times, so this is a hot cache.
    cache: dict = field(default_factory=dict, repr=False, compare=False)

    def to_json(self) -> str:
        return json.dumps({
            "type": "agent", "pid": self.pid, "curriculum": self.curriculum.value,
            "s": self.s, "a": self.a, "r": self.r, "s_next": self.s_next,
            "done": self.done, "duration": self.duration,
            "start_tick": self.start_tick, "end_tick": self.end_tick,
            "successor": self.successor.value if self.successor else None,
        })


@dataclass
class JointTransition:
    team: Team
    anchor_tick: int
    o: list[float]
    s_vec: list[list[float]]
    a_vec: list[int]
    r: float
    o_next: list[float]
    s_vec_next: list[list[float]]
    done: bool
    next_anchor_tick: int
    next_legal_vec: tuple[frozenset[int], ...]
    team_scene: str
    cache: dict = field(default_factory=dict, repr=False, compare=False)

    def to_json(self) -> str:
        return json.dumps({
            "type": "joint", "team": self.team.value, "anchor_tick": self.anchor_tick,
            "a_vec": self.a_vec, "r": self.r, "done": self.done,
            "next_anchor_tick": self.next_anchor_tick, "team_scene": self.team_scene,
        })


class ReplayBuffer:
    """Bounded FIFO ring with uniform sampling."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._items: list = []
        self._next = 0
        self.pushed = 0

    def __len__(self) -> int:
        return len(self._items)

    def push(self, item) -> None:
        if len(self._items) < self.capacity:
            self._items.append(item)
        else:
            self._items[self._next] = item
        self._next = (self._next + 1) % self.capacity
        self.pushed += 1

    def sample(self, batch_size: int, rng: random.Random):
        """Uniform without replacement; None signals an underfull buffer."""
        if batch_size > len(self._items):
            return None
        idx = rng.sample(range(len(self._items)), batch_size)
        return [self._items[i] for i in idx]

    def oldest_first(self) -> list:
        return self._items[self._next:] + self._items[:self._next] \
            if len(self._items) == self.capacity else list(self._items)


@dataclass
class _OpenRecord:
    pid: int
    curriculum: SceneId
    s: list[float]
    a: int
    start_tick: int
    reward: float = 0.0


class ILRecorder:
    """Builds per-agent transitions for the given controlled agents.

    Call on_starts() with each report and the chosen assignments before
    stepping the environment; per-tick closure runs off the env observer.

    In curriculum mode a record closes early (done, successor noted) the
    moment the agent's scene changes: the sub-task episode ended under it.
    A full-game learner instead lives in one continuing task, so records
    span their whole execution window and only the match end is terminal.
    """

    def __init__(self, env: MatchEnv, pids: Iterable[int],
                 sink: Callable[[AgentTransition], None],
                 curriculum_mode: bool = True):
        self.env = env
        self.pids = sorted(pids)
        self.sink = sink
        self.curriculum_mode = curriculum_mode
        self.open: dict[int, _OpenRecord] = {}
        self.pending_reward: dict[int, float] = {pid: 0.0 for pid in self.pids}
        env.observers.append(self.on_tick)

    def on_starts(self, report: StepReport, assignments: dict[int, int]) -> None:
        for entry in report.pollable:
            pid = entry.handle.pid
            if pid not in self.pending_reward or pid not in assignments:
                continue
            self.open[pid] = _OpenRecord(
                pid=pid, curriculum=entry.scene, s=entry.observation,
                a=assignments[pid], start_tick=report.tick,
                reward=self.pending_reward[pid])
            self.pending_reward[pid] = 0.0

    def on_tick(self, rec: TickRecord) -> None:
        state = self.env.state
        for pid in self.pids:
            r = rec.rewards.get(pid, 0.0)
            record = self.open.get(pid)
            if record is None:
                self.pending_reward[pid] += r
                continue
            record.reward += r
            player = state.players[pid]
            if rec.done:
                self._close(record, state, done=True, successor=None)
            elif self.curriculum_mode:
                scene_now = scene_of(state, pid)
                if scene_now is not record.curriculum:
                    self._close(record, state, done=True, successor=scene_now)
                elif player.remaining_ticks == 0:
                    self._close(record, state, done=False, successor=None)
            elif player.remaining_ticks == 0:
                self._close(record, state, done=False, successor=None)

    def _close(self, record: _OpenRecord, state: GameState, done: bool,
               successor: SceneId | None) -> None:
        pid = record.pid
        obs_now = build_local(state, pid)
        legal_now = legal_actions(state, pid)
        self.sink(AgentTransition(
            pid=pid, curriculum=record.curriculum, s=record.s, a=record.a,
            r=record.reward, s_next=obs_now, done=done,
            duration=state.tick - record.start_tick,
            start_tick=record.start_tick, end_tick=state.tick,
            next_legal=legal_now,
            successor=successor,
            successor_obs=obs_now if successor is not None else None,
            successor_legal=legal_now if successor is not None else None,
        ))
        del self.open[pid]


@dataclass
class _AgentAnchor:
    tick: int
    o: list[float]
    s: list[float]
    a: int
    team_scene: str


class JointRecorder:
    """Joint-transition assembly for one team's controlled agents.

    Produces the mask stream (sink_ms) and/or the splice stream (sink_sp).
    """

    def __init__(self, env: MatchEnv, team: Team, pids: Iterable[int],
                 sink_ms: Callable[[JointTransition], None] | None = None,
                 sink_sp: Callable[[JointTransition], None] | None = None):
        self.env = env
        self.team = team
        self.pids = sorted(pids)
        self.sink_ms = sink_ms
        self.sink_sp = sink_sp
        self.idle_id = 0
        # mask stream state
        self._ms_prev: dict | None = None
        self._ms_reward = 0.0
        # splice window state
        self._window: dict[int, _AgentAnchor] = {}
        self._window_reward = 0.0
        self._closed = False
        env.observers.append(self.on_tick)

    def _snapshot(self, state: GameState) -> dict:
        return {
            "tick": state.tick,
            "o": build_global(state),
            "locals": {pid: build_local(state, pid) for pid in self.pids},
            "legal": tuple(legal_actions(state, pid) for pid in self.pids),
            "team_scene": team_scene(state, self.team),
        }

    def on_starts(self, report: StepReport, assignments: dict[int, int]) -> None:
        state = self.env.state
        self.idle_id = state.catalog.idle_id
        starting = [pid for pid in self.pids if pid in assignments]
        if not starting:
            return
        snap = self._snapshot(state)
        # Mask stream: pair this anchor with the previous one.
        a_vec = [assignments.get(pid, self.idle_id) for pid in self.pids]
        if self.sink_ms is not None:
            if self._ms_prev is not None:
                self._emit_ms(snap, done=False)
            self._ms_prev = {**snap, "a_vec": a_vec}
            self._ms_reward = 0.0
        # Splice stream: note each starting agent's own anchor.
        if self.sink_sp is not None:
            for pid in starting:
                self._window[pid] = _AgentAnchor(
                    tick=report.tick, o=snap["o"], s=snap["locals"][pid],
                    a=assignments[pid], team_scene=snap["team_scene"])

    def _emit_ms(self, snap_next: dict, done: bool) -> None:
        prev = self._ms_prev
        self.sink_ms(JointTransition(
            team=self.team, anchor_tick=prev["tick"], o=prev["o"],
            s_vec=[prev["locals"][pid] for pid in self.pids],
            a_vec=list(prev["a_vec"]), r=self._ms_reward,
            o_next=snap_next["o"],
            s_vec_next=[snap_next["locals"][pid] for pid in self.pids],
            done=done, next_anchor_tick=snap_next["tick"],
            next_legal_vec=snap_next["legal"], team_scene=prev["team_scene"]))

    def on_tick(self, rec: TickRecord) -> None:
        state = self.env.state
        r = sum(rec.rewards.get(pid, 0.0) for pid in self.pids)
        self._ms_reward += r
        self._window_reward += r
        done = rec.done
        all_complete = all(state.players[pid].remaining_ticks == 0 for pid in self.pids)
        if done or (self._window and all_complete):
            snap = self._snapshot(state)
            if self.sink_sp is not None and self._window:
                self._close_window(snap, done)
            if self.sink_ms is not None and done and self._ms_prev is not None:
                self._emit_ms(snap, done=True)
                self._ms_prev = None

    def _close_window(self, snap: dict, done: bool) -> None:
        for pid in self.pids:
            anchor = self._window.get(pid)
            if anchor is None:
                continue
            self.sink_sp(JointTransition(
                team=self.team, anchor_tick=anchor.tick, o=anchor.o,
                s_vec=[self._window[q].s if q in self._window else snap["locals"][q]
                       for q in self.pids],
                a_vec=[self._window[q].a if q in self._window else self.idle_id
                       for q in self.pids],
                r=self._window_reward,
                o_next=snap["o"],
                s_vec_next=[snap["locals"][q] for q in self.pids],
                done=done, next_anchor_tick=snap["tick"],
                next_legal_vec=snap["legal"], team_scene=anchor.team_scene))
        self._window = {}
        self._window_reward = 0.0


def dump_transitions(path, transitions: Iterable) -> None:
    """One JSON object per line, for offline inspection."""
    with open(path, "w") as fh:
        for t in transitions:
            fh.write(t.to_json() + "\n")
