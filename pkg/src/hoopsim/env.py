"""Asynchronous multi-agent environment over the rules engine.

The polling contract: a report is emitted whenever at least one externally
controlled agent is pollable (or the episode ends); the step call must supply
exactly one legal action per reported agent. Bots are polled internally every
tick. Rewards accruing while an agent executes are credited to that agent's
next report.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable

from .observations import build_global, build_local, layout_for
from .rewards import DEFAULT_SCHEME, RewardScheme, reward_for
from .sim import (
    BOT_DIFFICULTIES,
    BotLevel,
    ContractViolation,
    EventKind,
    GameEvent,
    GameState,
    MatchConfig,
    Phase,
    SceneId,
    Team,
    bot_policy,
    legal_actions,
    new_match,
    scene_of,
    tick,
)
from .sim.entities import scale_shooting


class ControllerKind(Enum):
    LEARNER = "learner"
    BOT = "bot"
    HUMAN = "human"


@dataclass(frozen=True)
class AgentHandle:
    pid: int
    kind: ControllerKind
    bot_level: BotLevel | None = None


class MaskMode(Enum):
    FULL_GAME = "full_game"
    DIVIDE_AND_CONQUER = "divide_and_conquer"


def make_controllers(state_config: MatchConfig,
                     home: str | BotLevel = "learner",
                     away: str | BotLevel = BotLevel.EASY) -> dict[int, AgentHandle]:
    """Map every player to a controller, one spec per team."""
    handles: dict[int, AgentHandle] = {}
    pid = 0
    for team_spec, roles in ((home, state_config.home_roles),
                             (away, state_config.away_roles)):
        for _ in roles:
            if isinstance(team_spec, BotLevel):
                handles[pid] = AgentHandle(pid, ControllerKind.BOT, team_spec)
            elif team_spec == "learner":
                handles[pid] = AgentHandle(pid, ControllerKind.LEARNER)
            elif team_spec == "human":
                handles[pid] = AgentHandle(pid, ControllerKind.HUMAN)
            else:
                raise ValueError(f"unknown controller spec {team_spec!r}")
            pid += 1
    return handles


@dataclass
class PollEntry:
    handle: AgentHandle
    observation: list[float]
    mask: list[bool]  # over the union catalog
    scene: SceneId


@dataclass
class StepReport:
    tick: int
    pollable: list[PollEntry]
    events: list[GameEvent]
    rewards: dict[int, float]
    episode_done: bool

    def entry(self, pid: int) -> PollEntry:
        for e in self.pollable:
            if e.handle.pid == pid:
                return e
        raise KeyError(pid)


@dataclass
class TickRecord:
    """Per-tick feed for experience recorders."""

    tick: int
    starts: dict[int, int]
    events: list[GameEvent]
    scenes_before: dict[int, SceneId]
    rewards: dict[int, float]
    done: bool


def action_mask(state: GameState, pid: int, mode: MaskMode) -> list[bool]:
    """FullGame: mask over the union catalog. DivideAndConquer: mask over the
    current scene's canonical action list."""
    legal = legal_actions(state, pid)
    if mode is MaskMode.FULL_GAME:
        return [aid in legal for aid in range(len(state.catalog))]
    scene = scene_of(state, pid)
    return [aid in legal for aid in state.catalog.scene_action_ids(scene)]


class IllegalActionError(ContractViolation):
    def __init__(self, pid: int, action: int):
        super().__init__(f"agent {pid} assigned illegal action {action}")
        self.pid = pid
        self.action = action


class MatchEnv:
    """One match seen through the polling interface."""

    def __init__(self, config: MatchConfig, controllers: dict[int, AgentHandle],
                 seed: int, scheme: RewardScheme = DEFAULT_SCHEME):
        self.config = config
        self.controllers = controllers
        self.seed = seed
        self.scheme = scheme
        self.state: GameState | None = None
        self.observers: list[Callable[[TickRecord], None]] = []
        self._awaiting: list[int] = []
        self._reward_accum: dict[int, float] = {}
        self._pending_events: list[GameEvent] = []
        self.event_log: list[GameEvent] = []
        self.stats: dict[str, int] = {}

    # -- lifecycle ----------------------------------------------------------

    def reset(self, seed: int | None = None) -> StepReport:
        if seed is not None:
            self.seed = seed
        self.state = new_match(self.config, self.seed)
        n_players = len(self.state.players)
        if sorted(self.controllers) != list(range(n_players)):
            raise ContractViolation("controllers must cover every player exactly once")
        for pid, handle in self.controllers.items():
            if handle.kind is ControllerKind.BOT:
                p = self.state.players[pid]
                p.attrs = scale_shooting(
                    p.attrs, BOT_DIFFICULTIES[handle.bot_level].shoot_rate_mult)
        self._controlled = sorted(
            pid for pid, h in self.controllers.items() if h.kind is not ControllerKind.BOT)
        self._reward_accum = {pid: 0.0 for pid in self._controlled}
        self._pending_events = []
        self.event_log = []
        self.stats = {"goals2": 0, "goals3": 0, "steals": 0, "blocks": 0,
                      "passes": 0, "shot_attempts": 0}
        self._advance_until_poll()
        return self._report()

    def step(self, assignments: dict[int, int]) -> StepReport:
        if self.state is None:
            raise ContractViolation("step() before reset()")
        if sorted(assignments) != sorted(self._awaiting):
            raise ContractViolation(
                f"assignments {sorted(assignments)} must exactly cover the "
                f"reported pollable agents {sorted(self._awaiting)}")
        for pid, aid in assignments.items():
            if aid not in legal_actions(self.state, pid):
                raise IllegalActionError(pid, aid)
        self._tick_once(dict(assignments))
        self._advance_until_poll()
        return self._report()

    # -- internals ----------------------------------------------------------

    def _bot_starts(self) -> dict[int, int]:
        starts = {}
        for pid in self.state.pollable_ids():
            handle = self.controllers[pid]
            if handle.kind is ControllerKind.BOT:
                starts[pid] = bot_policy(
                    self.state, pid, BOT_DIFFICULTIES[handle.bot_level], self.state.rng)
        return starts

    def _tick_once(self, controlled_starts: dict[int, int]) -> None:
        state = self.state
        starts = self._bot_starts()
        starts.update(controlled_starts)
        scenes_before = {pid: scene_of(state, pid) for pid in self._controlled}
        team_of = lambda pid: state.players[pid].team
        tick_no = state.tick
        _, events = tick(state, starts)
        rewards = {}
        for pid in self._controlled:
            r = reward_for(events, team_of(pid), scenes_before[pid], team_of,
                           self.scheme)
            rewards[pid] = r
            self._reward_accum[pid] += r
        self._pending_events.extend(events)
        self.event_log.extend(events)
        self._count(events)
        if self.observers:
            record = TickRecord(tick=tick_no, starts=starts, events=events,
                                scenes_before=scenes_before, rewards=rewards,
                                done=state.phase is Phase.OVER)
            for obs in self.observers:
                obs(record)

    def _count(self, events: Iterable[GameEvent]) -> None:
        s = self.stats
        for e in events:
            if e.kind is EventKind.GOAL2:
                s["goals2"] += 1
                s["shot_attempts"] += 1
            elif e.kind is EventKind.GOAL3:
                s["goals3"] += 1
                s["shot_attempts"] += 1
            elif e.kind in (EventKind.SHOT_MISSED, EventKind.BLOCK):
                s["shot_attempts"] += 1
                if e.kind is EventKind.BLOCK:
                    s["blocks"] += 1
            elif e.kind is EventKind.STEAL:
                s["steals"] += 1
            elif e.kind is EventKind.PASS_COMPLETED:
                s["passes"] += 1

    def _advance_until_poll(self) -> None:
        state = self.state
        while state.phase is not Phase.OVER:
            pollable = [pid for pid in state.pollable_ids() if pid in self._reward_accum]
            if pollable:
                self._awaiting = pollable
                return
            self._tick_once({})
        self._awaiting = []

    def _report(self) -> StepReport:
        state = self.state
        done = state.phase is Phase.OVER
        entries = []
        rewards = {}
        for pid in self._awaiting:
            entries.append(PollEntry(
                handle=self.controllers[pid],
                observation=build_local(state, pid),
                mask=action_mask(state, pid, MaskMode.FULL_GAME),
                scene=scene_of(state, pid),
            ))
            rewards[pid] = self._reward_accum[pid]
            self._reward_accum[pid] = 0.0
        if done:
            for pid in self._controlled:
                rewards.setdefault(pid, self._reward_accum[pid])
                self._reward_accum[pid] = 0.0
        events = self._pending_events
        self._pending_events = []
        return StepReport(tick=state.tick, pollable=entries, events=events,
                          rewards=rewards, episode_done=done)

    # -- views used by recorders and the bridge server ------------------------

    def local_observation(self, pid: int) -> list[float]:
        return build_local(self.state, pid)

    def global_observation(self) -> list[float]:
        return build_global(self.state)


@dataclass
class EpisodeStats:
    episode: int
    seed: int
    score_home: int
    score_away: int
    score_gap: int
    goals2: int
    goals3: int
    steals: int
    blocks: int
    passes: int
    shot_attempts: int

    CSV_HEADER = ("episode,seed,score_home,score_away,score_gap,goals2,goals3,"
                  "steals,blocks,passes,shot_attempts")

    def csv_row(self) -> str:
        return (f"{self.episode},{self.seed},{self.score_home},{self.score_away},"
                f"{self.score_gap},{self.goals2},{self.goals3},{self.steals},"
                f"{self.blocks},{self.passes},{self.shot_attempts}")


PolicyFn = Callable[[PollEntry], int]


def run_episode(config: MatchConfig, controllers: dict[int, AgentHandle],
                policy: PolicyFn, seed: int, episode: int = 0) -> EpisodeStats:
    env = MatchEnv(config, controllers, seed)
    report = env.reset()
    while not report.episode_done:
        assignments = {e.handle.pid: policy(e) for e in report.pollable}
        report = env.step(assignments)
    state = env.state
    return EpisodeStats(
        episode=episode, seed=seed,
        score_home=state.score_home, score_away=state.score_away,
        score_gap=state.score_home - state.score_away,
        **env.stats,
    )


def run_parallel(config: MatchConfig, controllers: dict[int, AgentHandle],
                 policy: PolicyFn, n_episodes: int, seed_base: int,
                 n_envs: int = 20) -> list[EpisodeStats]:
    """Run independent episodes on a thread pool using a read-only policy.

    Each episode is deterministic in its own seed, so the result set does not
    depend on scheduling order; results come back sorted by episode index.
    """
    if n_envs < 1:
        raise ValueError("n_envs must be >= 1")
    jobs = [(i, seed_base + i) for i in range(n_episodes)]
    if n_envs == 1 or n_episodes <= 1:
        return [run_episode(config, controllers, policy, seed, i) for i, seed in jobs]
    results: list[EpisodeStats] = []
    with concurrent.futures.ThreadPoolExecutor(max_workers=n_envs) as pool:
        futures = [pool.submit(run_episode, config, controllers, policy, seed, i)
                   for i, seed in jobs]
        for f in futures:
            results.append(f.result())
    results.sort(key=lambda s: s.episode)
    return results
