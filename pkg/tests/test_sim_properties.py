"""Property tests over the rules engine."""

from __future__ import annotations

import random

from hypothesis import given, settings, strategies as st

from hoopsim.sim import (
    BotLevel,
    MatchConfig,
    Phase,
    Role,
    legal_actions,
    new_match,
    run_bot_match,
    scene_of,
    state_digest,
    tick,
)

from audit_helpers import run_audited_bot_match

SHORT = dict(match_ticks=400)


@settings(max_examples=12, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10**6))
def test_bot_match_is_deterministic(seed: int) -> None:
    cfg = MatchConfig(**SHORT)
    a_state, a_events = run_bot_match(cfg, seed, BotLevel.MEDIUM, BotLevel.HARD)
    b_state, b_events = run_bot_match(cfg, seed, BotLevel.MEDIUM, BotLevel.HARD)
    assert [e.to_json() for e in a_events] == [e.to_json() for e in b_events]
    assert state_digest(a_state) == state_digest(b_state)


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10**6))
def test_asynchrony_contract_holds(seed: int) -> None:
    cfg = MatchConfig(**SHORT)
    report = run_audited_bot_match(cfg, seed)
    assert report.ok, report.violations[:5]


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10**6),
       sizes=st.tuples(st.integers(1, 3), st.integers(1, 3)))
def test_contract_holds_for_all_team_sizes(seed: int, sizes) -> None:
    order = [Role.PG, Role.SG, Role.SF]
    cfg = MatchConfig(home_roles=order[: sizes[0]], away_roles=order[: sizes[1]],
                      **SHORT)
    report = run_audited_bot_match(cfg, seed)
    assert report.ok, report.violations[:5]


@settings(max_examples=8, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10**6))
def test_scene_is_total_and_single_valued(seed: int) -> None:
    cfg = MatchConfig(**SHORT)
    state = new_match(cfg, seed)
    rng = random.Random(seed ^ 0xABCD)
    for _ in range(150):
        if state.phase is Phase.OVER:
            break
        for p in state.players:
            scene = scene_of(state, p.pid)
            assert scene is not None
            legal = legal_actions(state, p.pid)
            assert legal, "legal action set must be nonempty"
            assert state.catalog.idle_id in legal
        starts = {}
        for pid in state.pollable_ids():
            ids = sorted(legal_actions(state, pid))
            starts[pid] = ids[rng.randrange(len(ids))]
        tick(state, starts)
