"""ICT framework tests: switcher priority, reduced spaces, training wiring."""

from __future__ import annotations

import random

import numpy as np
import pytest

from hoopsim.learn import (
    SWITCH_NO_PASS,
    TrainConfig,
    Trainer,
    build_curriculum_set,
    build_switcher,
    ict_decide,
    make_q,
    train_ict,
)
from hoopsim.observations import ObsLayout, build_local
from hoopsim.sim import Role, SceneId, Team, scene_of

from conftest import cfg_3v3, fresh_match, hand_ball_to


@pytest.fixture
def attack_state():
    state = fresh_match(seed=3)
    hand_ball_to(state, 0, cleared=True)
    assert scene_of(state, 0) is SceneId.ATTACK
    return state


def build_ict(state, approximator="tabular"):
    layout = ObsLayout(3, 3)
    mk = lambda n: make_q(approximator, layout.length, n, layout)
    lset = build_curriculum_set(state.catalog, mk, 100, reduced=True)
    switcher = build_switcher(state.catalog, mk, 100)
    return lset, switcher


def _force_switcher(switcher, obs, values):
    key = switcher.q.key_fn(obs)
    switcher.q.table[key] = np.asarray(values, dtype=float)


def test_switcher_not_consulted_outside_holder_scenes(attack_state):
    state = attack_state
    lset, switcher = build_ict(state)
    # A teammate is in Assist: the switcher must not be consulted.
    rng = random.Random(0)
    assert scene_of(state, 1) is SceneId.ASSIST
    _, sw = ict_decide(state, 1, lset, switcher, 0.0, rng)
    assert sw is None
    # Freeball: drop the ball.
    state.players[0].has_ball = False
    state.ball.owner = None
    state.ball.owning_team = None
    assert scene_of(state, 1) is SceneId.FREEBALL
    _, sw = ict_decide(state, 1, lset, switcher, 0.0, rng)
    assert sw is None


def test_switcher_pass_choice_overrides_base_learner(attack_state):
    state = attack_state
    lset, switcher = build_ict(state)
    obs = build_local(state, 0)
    _force_switcher(switcher, obs, [0.0, 0.0, 5.0])  # prefer Pass_slot2
    rng = random.Random(0)
    action, sw = ict_decide(state, 0, lset, switcher, 0.0, rng, obs=obs)
    pass2 = state.catalog.by_name["Pass_slot2"].id
    assert sw == pass2
    assert action == pass2


def test_switcher_nopass_delegates_to_reduced_space(attack_state):
    state = attack_state
    lset, switcher = build_ict(state)
    obs = build_local(state, 0)
    _force_switcher(switcher, obs, [5.0, 0.0, 0.0])  # NoPass
    rng = random.Random(0)
    pass_ids = set(state.catalog.pass_ids())
    for _ in range(50):
        action, sw = ict_decide(state, 0, lset, switcher, 0.5, rng, obs=obs)
        if sw == SWITCH_NO_PASS:
            assert action not in pass_ids
            assert action in lset.slot(SceneId.ATTACK).space.ids


def test_reduced_spaces_only_shrink_holder_scenes(attack_state):
    state = attack_state
    lset, _ = build_ict(state)
    pass_ids = set(state.catalog.pass_ids())
    for scene in (SceneId.ATTACK, SceneId.BALLCLEAR):
        assert not pass_ids & set(lset.slot(scene).space.ids)
    for scene in (SceneId.ASSIST, SceneId.DEFENSE, SceneId.FREEBALL):
        full = set(state.catalog.scene_action_ids(scene))
        assert set(lset.slot(scene).space.ids) == full


def test_train_ict_budget_zero_returns_untrained_learners():
    cfg = TrainConfig(algorithm="ict", budget_ticks=0, eval_episodes=2,
                      eval_envs=1, eval_period_episodes=0,
                      home_roles=[Role.PG, Role.SG, Role.SF],
                      away_roles=[Role.PG, Role.SG, Role.SF])
    lset, switcher, result = train_ict(cfg, budget_ticks=0)
    assert result.updates == 0
    for slot in lset.slots.values():
        assert slot.q.table == {}
    assert switcher.q.table == {}


def test_eta_frozen_zero_metrics_equal_base_curricula_run():
    common = dict(budget_ticks=6000, epsilon_decay_ticks=4000,
                  eval_episodes=2, eval_envs=1, eval_period_episodes=0,
                  seed=5, match_ticks=600)
    base = Trainer(TrainConfig(algorithm="base_curricula", **common)).train()
    frozen = Trainer(TrainConfig(algorithm="cascade", eta_fixed=0.0,
                                 **common)).train()
    assert [m.csv_row().rsplit(",", 1)[0] for m in base.metrics] == \
        [m.csv_row().rsplit(",", 1)[0] for m in frozen.metrics]


def test_ict_training_fills_switcher_buffer():
    cfg = TrainConfig(algorithm="ict", budget_ticks=4000,
                      epsilon_decay_ticks=2000, eval_episodes=1, eval_envs=1,
                      eval_period_episodes=0, match_ticks=600, seed=2,
                      home_roles=[Role.PG, Role.SG, Role.SF],
                      away_roles=[Role.PG, Role.SG, Role.SF])
    trainer = Trainer(cfg)
    trainer.train()
    switcher = trainer.switchers["shared"]
    assert len(switcher.buffer) > 0
    # Pass decisions were actually taken over the switcher's space.
    kinds = {tr.a for tr in switcher.buffer.oldest_first()}
    assert SWITCH_NO_PASS in kinds
