"""Training loops for the benchmark algorithms.

Algorithm families:
  iql / hyq / one_model          independent learners (one_model = full-game)
  base_curricula / cascade / ict per-scene learners with cascading targets
                                 (base pins the cascade weight at 0; ict adds
                                 the coordination switcher)
  vdn_ms / vdn_sp                joint learners over mask- or splice-assembled
                                 transitions
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field, replace

from ..env import MatchEnv, PollEntry, make_controllers, run_parallel
from ..experience import ILRecorder, JointRecorder, ReplayBuffer
from ..observations import ObsLayout, layout_hash
from ..sim import BotLevel, ConfigError, MatchConfig, Role, SceneId, Team
from .ict import (
    SWITCH_NO_PASS,
    CoordinationSwitcher,
    CurriculumLearnerSet,
    SwitcherRecorder,
    build_curriculum_set,
    build_switcher,
    ict_decide,
)
from .qfunction import make_q
from .spaces import ActionSpace, index_lookup, scene_space, union_space
from .targets import EtaSchedule, td_target_base, td_target_cascade
from .updates import select_action, update_hyq, update_iql, update_vdn

ALGORITHMS = ("iql", "hyq", "vdn_ms", "vdn_sp", "one_model", "base_curricula",
              "cascade", "ict")
SETTINGS = ("divide_and_conquer", "full_game")
CASCADE_FAMILY = ("base_curricula", "cascade", "ict")


@dataclass
class TrainConfig:
    algorithm: str = "iql"
    setting: str = "divide_and_conquer"
    approximator: str = "tabular"
    gamma: float = 0.99
    alpha: float = 0.10
    beta: float = 0.01
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    epsilon_decay_ticks: int = 150_000
    eta_ramp_frac: float = 0.5
    eta_fixed: float | None = None
    buffer_capacity: int = 50_000
    batch_size: int = 32
    sync_period: int = 50  # update rounds between target syncs
    train_every: int = 20  # env ticks between update rounds
    budget_ticks: int = 300_000
    eval_period_episodes: int = 100
    eval_episodes: int = 20
    eval_envs: int = 10
    opponent: BotLevel = BotLevel.EASY
    share_parameters: bool = True
    seed: int = 0
    home_roles: list[Role] = field(default_factory=lambda: [Role.SG])
    away_roles: list[Role] = field(default_factory=lambda: [Role.SG])
    match_ticks: int = 1800
    shot_clock_ticks: int = 200

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(
                f"unknown algorithm {self.algorithm!r}; valid: {', '.join(ALGORITHMS)}")
        if self.setting not in SETTINGS:
            raise ConfigError(
                f"unknown setting {self.setting!r}; valid: {', '.join(SETTINGS)}")
        if not 0 <= self.gamma < 1:
            raise ConfigError("gamma must lie in [0, 1)")
        if not 0 < self.beta <= self.alpha:
            raise ConfigError("require 0 < beta <= alpha")
        if not 0 <= self.epsilon_end <= self.epsilon_start <= 1:
            raise ConfigError("epsilon schedule must satisfy end <= start in [0, 1]")

    @property
    def effective_setting(self) -> str:
        if self.algorithm == "one_model":
            return "full_game"
        if self.algorithm in CASCADE_FAMILY:
            return "divide_and_conquer"
        return self.setting

    def match_config(self) -> MatchConfig:
        return MatchConfig(home_roles=list(self.home_roles),
                           away_roles=list(self.away_roles),
                           match_ticks=self.match_ticks,
                           shot_clock_ticks=self.shot_clock_ticks)

    def epsilon_at(self, ticks: int) -> float:
        if self.epsilon_decay_ticks <= 0:
            return self.epsilon_end
        frac = min(1.0, ticks / self.epsilon_decay_ticks)
        return self.epsilon_start + (self.epsilon_end - self.epsilon_start) * frac

    KEYS = ("algorithm", "setting", "approximator", "gamma", "alpha", "beta",
            "epsilon_start", "epsilon_end", "epsilon_decay_ticks",
            "eta_ramp_frac", "eta_fixed", "buffer_capacity", "batch_size",
            "sync_period", "train_every", "budget_ticks",
            "eval_period_episodes", "eval_episodes", "eval_envs", "opponent",
            "share_parameters", "seed", "home_roles", "away_roles",
            "match_ticks", "shot_clock_ticks")

    @staticmethod
    def from_dict(d: dict) -> "TrainConfig":
        unknown = set(d) - set(TrainConfig.KEYS)
        if unknown:
            raise ConfigError(f"unknown training config keys: {sorted(unknown)}")
        kw = dict(d)
        if "opponent" in kw:
            kw["opponent"] = BotLevel(kw["opponent"])
        for side in ("home_roles", "away_roles"):
            if side in kw:
                kw[side] = [Role(r) for r in kw[side]]
        return TrainConfig(**kw)

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.KEYS}
        d["opponent"] = self.opponent.value
        d["home_roles"] = [r.value for r in self.home_roles]
        d["away_roles"] = [r.value for r in self.away_roles]
        return d


@dataclass
class MetricsRow:
    ticks: int
    updates: int
    episodes: int
    eval_mean_gap: float
    eval_std_gap: float
    eval_mean_score: float
    wall_seconds: float

    CSV_HEADER = ("ticks,updates,episodes,eval_mean_gap,eval_std_gap,"
                  "eval_mean_score,wall_seconds")

    def csv_row(self) -> str:
        return (f"{self.ticks},{self.updates},{self.episodes},"
                f"{self.eval_mean_gap:.4f},{self.eval_std_gap:.4f},"
                f"{self.eval_mean_score:.4f},{self.wall_seconds:.2f}")


@dataclass
class TrainResult:
    config: TrainConfig
    metrics: list[MetricsRow]
    final_eval_gap: float
    ticks: int
    updates: int
    episodes: int
    trainer: "Trainer"


def _mean(xs):
    xs = list(xs)
    return sum(xs) / len(xs) if xs else 0.0


def _std(xs):
    xs = list(xs)
    if len(xs) < 2:
        return 0.0
    m = _mean(xs)
    return (sum((x - m) ** 2 for x in xs) / (len(xs) - 1)) ** 0.5


class Trainer:
    """Owns the learner state for one run and drives the env loop."""

    def __init__(self, cfg: TrainConfig):
        self.cfg = cfg
        self.match_config = cfg.match_config()
        self.catalog = self.match_config.build_catalog()
        n_home = len(cfg.home_roles)
        n_away = len(cfg.away_roles)
        self.layout = ObsLayout(n_home, n_away)
        self.controlled = list(range(n_home))
        self.rng = random.Random(cfg.seed)
        self.ticks = 0
        self.updates = 0
        self.episodes = 0
        self.metrics: list[MetricsRow] = []
        self._t0 = time.time()

        self.groups = (["shared"] if cfg.share_parameters
                       else [f"pid{p}" for p in self.controlled])
        self.union = union_space(self.catalog)
        self.eta = EtaSchedule(ramp_updates=max(
            1, int(cfg.eta_ramp_frac * cfg.budget_ticks / cfg.train_every)),
            fixed=cfg.eta_fixed if cfg.algorithm != "base_curricula" else 0.0)

        algo = cfg.algorithm
        self.family = ("vdn" if algo.startswith("vdn")
                       else "cascade" if algo in CASCADE_FAMILY else "il")
        mk = lambda n_actions: make_q(cfg.approximator, self.layout.length,
                                      n_actions, self.layout)
        if self.family == "vdn":
            self.vdn_qs = {pid: mk(len(self.union)) for pid in self.controlled}
            self.vdn_targets = {pid: q.clone() for pid, q in self.vdn_qs.items()}
            self.joint_buffers: dict[str, ReplayBuffer] = {}
        else:
            self.il: dict[str, dict] = {}
            self.switchers: dict[str, CoordinationSwitcher] = {}
            for g in self.groups:
                if cfg.effective_setting == "full_game":
                    q = mk(len(self.union))
                    self.il[g] = {"__all__": _FullGameSlot(
                        q=q, target=q.clone(),
                        buffer=ReplayBuffer(cfg.buffer_capacity), space=self.union)}
                else:
                    lset = build_curriculum_set(
                        self.catalog, mk, cfg.buffer_capacity,
                        reduced=(algo == "ict"))
                    self.il[g] = dict(lset.slots)
                    self.il[g]["__set__"] = lset
                if algo == "ict":
                    self.switchers[g] = build_switcher(self.catalog, mk,
                                                       cfg.buffer_capacity)

    # -- per-agent routing ----------------------------------------------------

    def _slot_pid(self, pid: int) -> int:
        """Away agents (self-play) reuse the home-trained slots."""
        n_home = len(self.cfg.home_roles)
        return pid if pid < n_home else pid - n_home

    def group_of(self, pid: int) -> str:
        return "shared" if self.cfg.share_parameters else f"pid{self._slot_pid(pid)}"

    # -- acting ---------------------------------------------------------------

    def act(self, env: MatchEnv, entry: PollEntry, epsilon: float,
            rng: random.Random, switch_hook=None) -> int:
        pid = entry.handle.pid
        legal = frozenset(i for i, ok in enumerate(entry.mask) if ok)
        if self.family == "vdn":
            q = self.vdn_qs[self._slot_pid(pid)]
            idx = select_action(q.values_at(q.prepare(entry.observation)),
                                entry.mask, epsilon, rng)
            return idx  # union space: index == catalog id
        g = self.group_of(pid)
        slots = self.il[g]
        if "__all__" in slots:
            slot = slots["__all__"]
            idx = select_action(slot.q.values_at(slot.q.prepare(entry.observation)),
                                entry.mask, epsilon, rng)
            return idx
        lset: CurriculumLearnerSet = slots["__set__"]
        switcher = self.switchers.get(g)
        action, sw_choice = ict_decide(env.state, pid, lset, switcher, epsilon,
                                       rng, obs=entry.observation, legal=legal)
        if switcher is not None and sw_choice is not None and switch_hook:
            switch_hook(pid, entry.scene, entry.observation, sw_choice,
                        env.state.tick, legal)
        return action

    def greedy_policy(self):
        """Read-only snapshot policy for evaluation (epsilon = epsilon_end)."""
        eps = self.cfg.epsilon_end

        def policy(entry: PollEntry) -> int:
            rng = random.Random((entry.handle.pid * 2654435761) ^ 912367)
            return self._act_stateless(entry, eps, rng)

        return policy

    def _act_stateless(self, entry: PollEntry, epsilon: float,
                       rng: random.Random) -> int:
        pid = entry.handle.pid
        if self.family == "vdn":
            q = self.vdn_qs[self._slot_pid(pid)]
            return select_action(q.q_values(entry.observation), entry.mask,
                                 epsilon, rng)
        g = self.group_of(pid)
        slots = self.il[g]
        legal = frozenset(i for i, ok in enumerate(entry.mask) if ok)
        if "__all__" in slots:
            slot = slots["__all__"]
            return select_action(slot.q.q_values(entry.observation), entry.mask,
                                 epsilon, rng)
        lset: CurriculumLearnerSet = slots["__set__"]
        switcher = self.switchers.get(g)
        scene = entry.scene
        if switcher is not None and scene in switcher.scenes:
            mask = switcher.mask_for(legal)
            idx = select_action(switcher.q.q_values(entry.observation), mask,
                                epsilon * switcher.epsilon_scale, rng)
            chosen = switcher.space.ids[idx]
            if chosen != SWITCH_NO_PASS:
                return chosen
            slot = lset.slot(scene)
        else:
            slot = lset.slot(scene)
        mask = slot.space.mask_from_legal(legal)
        idx = select_action(slot.q.q_values(entry.observation), mask, epsilon, rng)
        return slot.space.ids[idx]

    # -- transition routing ---------------------------------------------------

    def _push_il(self, tr) -> None:
        g = self.group_of(tr.pid)
        slots = self.il[g]
        slot = slots["__all__"] if "__all__" in slots else slots[tr.curriculum]
        if tr.a not in slot.space.ids:
            # Under ICT the switcher owns pass actions; the base learner's
            # reduced space cannot represent them, so the switcher's own
            # records carry that learning signal instead.
            return
        slot.buffer.push(tr)

    def _push_joint(self, tr) -> None:
        key = tr.team_scene if self.cfg.effective_setting == "divide_and_conquer" \
            else "__all__"
        buf = self.joint_buffers.get(key)
        if buf is None:
            buf = ReplayBuffer(self.cfg.buffer_capacity)
            self.joint_buffers[key] = buf
        buf.push(tr)

    # -- updates ----------------------------------------------------------------

    def _target_fn(self, slot, lset: CurriculumLearnerSet | None):
        cfg = self.cfg
        if self.family == "cascade" and lset is not None:
            eta = self.eta.value(self.updates)

            def fn(tr):
                succ_slot = lset.slots.get(tr.successor) if tr.successor else None
                return td_target_cascade(
                    tr, slot.target,
                    succ_slot.target if succ_slot else None,
                    eta, cfg.gamma, slot.space,
                    succ_slot.space if succ_slot else None)

            return fn
        return lambda tr: td_target_base(tr, slot.target, cfg.gamma, slot.space)

    def _update_units(self) -> list:
        """One unit = one (buffer, learner) pair; rounds rotate through them
        so each round costs a single batch."""
        if self.family == "vdn":
            return [("vdn", key) for key in sorted(self.joint_buffers)]
        units = []
        for g in self.groups:
            for key in self.il[g]:
                if key != "__set__":
                    units.append((g, key))
            if g in self.switchers:
                units.append((g, "__switcher__"))
        return units

    def _update_round(self) -> None:
        """One batch per learner unit, so every learner trains at the same
        cadence regardless of how many units an algorithm owns."""
        cfg = self.cfg
        for kind, key in self._update_units():
            if kind == "vdn":
                qs = [self.vdn_qs[pid] for pid in self.controlled]
                targets = [self.vdn_targets[pid] for pid in self.controlled]
                batch = self.joint_buffers[key].sample(cfg.batch_size, self.rng)
                if batch is not None:
                    update_vdn(batch, qs, targets, cfg.gamma, cfg.alpha, self.union)
            elif key == "__switcher__":
                switcher = self.switchers[kind]
                batch = switcher.buffer.sample(cfg.batch_size, self.rng)
                if batch is not None:
                    fn = lambda tr: td_target_base(tr, switcher.target,
                                                   cfg.gamma, switcher.space)
                    update_iql(batch, switcher.q, fn, cfg.alpha, switcher.space)
            else:
                slots = self.il[kind]
                slot = slots[key]
                batch = slot.buffer.sample(cfg.batch_size, self.rng)
                if batch is not None:
                    fn = self._target_fn(slot, slots.get("__set__"))
                    if cfg.algorithm == "hyq":
                        update_hyq(batch, slot.q, fn, cfg.alpha, cfg.beta,
                                   slot.space)
                    else:
                        update_iql(batch, slot.q, fn, cfg.alpha, slot.space)
        self.updates += 1
        if self.updates % cfg.sync_period == 0:
            self._sync_targets()

    def _sync_targets(self) -> None:
        if self.family == "vdn":
            for pid in self.controlled:
                self.vdn_targets[pid].sync_from(self.vdn_qs[pid])
            return
        for g in self.groups:
            for key, slot in self.il[g].items():
                if key != "__set__":
                    slot.target.sync_from(slot.q)
            if g in self.switchers:
                self.switchers[g].sync()

    # -- evaluation -------------------------------------------------------------

    def evaluate(self, episodes: int | None = None, seed_base: int | None = None,
                 n_envs: int | None = None):
        cfg = self.cfg
        controllers = make_controllers(self.match_config, home="learner",
                                       away=cfg.opponent)
        stats = run_parallel(
            self.match_config, controllers, self.greedy_policy(),
            n_episodes=episodes or cfg.eval_episodes,
            seed_base=(seed_base if seed_base is not None
                       else cfg.seed * 1_000_003 + 7_777),
            n_envs=n_envs or cfg.eval_envs)
        return stats

    def _record_eval(self) -> None:
        stats = self.evaluate(
            seed_base=self.cfg.seed * 1_000_003 + 7_777 + self.episodes)
        gaps = [s.score_gap for s in stats]
        self.metrics.append(MetricsRow(
            ticks=self.ticks, updates=self.updates, episodes=self.episodes,
            eval_mean_gap=_mean(gaps), eval_std_gap=_std(gaps),
            eval_mean_score=_mean(s.score_home for s in stats),
            wall_seconds=time.time() - self._t0))

    # -- the loop -----------------------------------------------------------------

    def snapshot_policy(self):
        """Frozen copy of the current parameters, for self-play opponents."""
        frozen = Trainer(self.cfg)
        payload = self.to_payload()
        payload["counters"] = {}
        frozen.load_payload(payload)
        return frozen

    def train(self, budget_ticks: int | None = None, stop_when=None,
              selfplay_interval: int | None = None) -> TrainResult:
        cfg = self.cfg
        budget = budget_ticks if budget_ticks is not None else cfg.budget_ticks
        selfplay = selfplay_interval is not None
        controllers = make_controllers(
            self.match_config, home="learner",
            away="learner" if selfplay else cfg.opponent)
        n_home = len(cfg.home_roles)
        frozen = self.snapshot_policy() if selfplay else None
        next_update_at = self.ticks + cfg.train_every
        start_ticks = self.ticks
        env = None
        report = None
        recorders = []
        sw_recorder = None

        def begin_episode():
            nonlocal env, report, recorders, sw_recorder
            env = MatchEnv(self.match_config, controllers,
                           seed=cfg.seed * 99_991 + self.episodes)
            report = env.reset()
            recorders = []
            sw_recorder = None
            if self.family == "vdn":
                sink = self._push_joint
                rec = JointRecorder(env, Team.HOME, self.controlled,
                                    sink_ms=sink if cfg.algorithm == "vdn_ms" else None,
                                    sink_sp=sink if cfg.algorithm == "vdn_sp" else None)
                recorders.append(rec)
            else:
                # The benchmark full-game setting is one continuing task;
                # the ablation's one-model variant is the curriculum
                # formulation squeezed through a single shared model, so it
                # keeps scene-terminal records like the rest of its family.
                continuing = (cfg.effective_setting == "full_game"
                              and cfg.algorithm != "one_model")
                rec = ILRecorder(env, self.controlled, self._push_il,
                                 curriculum_mode=not continuing)
                recorders.append(rec)
                if cfg.algorithm == "ict":
                    g = self.groups[0]
                    sw_recorder = SwitcherRecorder(
                        env, self.controlled, self.switchers[g],
                        lambda tr: self.switchers[self.group_of(tr.pid)]
                        .buffer.push(tr))

        begin_episode()
        prev_tick = report.tick
        self.ticks += prev_tick

        while self.ticks - start_ticks < budget:
            if report.episode_done:
                self.episodes += 1
                if selfplay and self.episodes % selfplay_interval == 0:
                    frozen = self.snapshot_policy()
                if cfg.eval_period_episodes and \
                        self.episodes % cfg.eval_period_episodes == 0:
                    self._record_eval()
                    if stop_when is not None and stop_when(self.metrics[-1]):
                        break
                begin_episode()
                prev_tick = report.tick
                self.ticks += prev_tick
                continue
            epsilon = cfg.epsilon_at(self.ticks)
            assignments = {}
            hook = sw_recorder.on_decision if sw_recorder is not None else None
            for entry in report.pollable:
                pid = entry.handle.pid
                if selfplay and pid >= n_home:
                    assignments[pid] = frozen._act_stateless(
                        entry, cfg.epsilon_end,
                        random.Random((pid * 2654435761) ^ env.state.tick))
                else:
                    assignments[pid] = self.act(env, entry, epsilon, self.rng,
                                                switch_hook=hook)
            for rec in recorders:
                rec.on_starts(report, assignments)
            report = env.step(assignments)
            self.ticks += report.tick - prev_tick
            prev_tick = report.tick
            while self.ticks >= next_update_at:
                self._update_round()
                next_update_at += cfg.train_every

        self._record_eval()
        return TrainResult(config=cfg, metrics=self.metrics,
                           final_eval_gap=self.metrics[-1].eval_mean_gap,
                           ticks=self.ticks, updates=self.updates,
                           episodes=self.episodes, trainer=self)

    # -- serialization -------------------------------------------------------------

    def layout_hash(self) -> str:
        return layout_hash(self.layout, self.catalog, self.cfg.approximator)

    def to_payload(self) -> dict:
        comp = {}
        if self.family == "vdn":
            for pid, q in self.vdn_qs.items():
                comp[f"vdn:{pid}"] = q.to_payload()
        else:
            for g in self.groups:
                for key, slot in self.il[g].items():
                    if key == "__set__":
                        continue
                    name = key.value if isinstance(key, SceneId) else key
                    comp[f"{g}:{name}"] = slot.q.to_payload()
                if g in self.switchers:
                    comp[f"{g}:switcher"] = self.switchers[g].q.to_payload()
        return {
            "algorithm": self.cfg.algorithm,
            "layout_hash": self.layout_hash(),
            "counters": {"ticks": self.ticks, "updates": self.updates,
                         "episodes": self.episodes},
            "components": comp,
        }

    def load_payload(self, payload: dict) -> None:
        if payload.get("layout_hash") != self.layout_hash():
            raise ConfigError(
                f"checkpoint layout hash {payload.get('layout_hash')} does not "
                f"match current config {self.layout_hash()}")
        comp = payload["components"]
        if self.family == "vdn":
            for pid in self.controlled:
                self.vdn_qs[pid].load_payload(comp[f"vdn:{pid}"])
                self.vdn_targets[pid].sync_from(self.vdn_qs[pid])
        else:
            for g in self.groups:
                for key, slot in self.il[g].items():
                    if key == "__set__":
                        continue
                    name = key.value if isinstance(key, SceneId) else key
                    slot.q.load_payload(comp[f"{g}:{name}"])
                    slot.target.sync_from(slot.q)
                if g in self.switchers:
                    self.switchers[g].q.load_payload(comp[f"{g}:switcher"])
                    self.switchers[g].sync()
        counters = payload.get("counters", {})
        self.ticks = counters.get("ticks", 0)
        self.updates = counters.get("updates", 0)
        self.episodes = counters.get("episodes", 0)


@dataclass
class _FullGameSlot:
    q: object
    target: object
    buffer: ReplayBuffer
    space: ActionSpace

    def sync(self) -> None:
        self.target.sync_from(self.q)


def train_ict(cfg: TrainConfig, budget_ticks: int | None = None):
    """Co-train the five curriculum learners and the switcher; returns the
    learner set, the switcher, and the metrics history."""
    cfg = replace(cfg, algorithm="ict")
    trainer = Trainer(cfg)
    result = trainer.train(budget_ticks=budget_ticks)
    g = trainer.groups[0]
    lset = trainer.il[g]["__set__"]
    return lset, trainer.switchers[g], result
