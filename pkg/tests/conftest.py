from __future__ import annotations

import pytest

from hoopsim.sim import MatchConfig, Role, new_match
from hoopsim.sim.engine import _give_ball


def cfg_3v3(**kw) -> MatchConfig:
    return MatchConfig(**kw)


def cfg_1v1(**kw) -> MatchConfig:
    kw.setdefault("home_roles", [Role.SG])
    kw.setdefault("away_roles", [Role.SG])
    return MatchConfig(**kw)


def fresh_match(config=None, seed=7):
    return new_match(config or cfg_3v3(), seed)


def hand_ball_to(state, pid, cleared=None):
    """Test fixture hook: move possession while keeping invariants."""
    _give_ball(state, pid, cleared=cleared)
    return state


@pytest.fixture
def state3():
    return fresh_match()
