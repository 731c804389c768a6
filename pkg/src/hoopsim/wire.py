"""Wire schema for the live human-play bridge: six JSON message types
(hello, state, action, ack, error, end), one JSON object per websocket
message."""

from __future__ import annotations

import json

from .env import MaskMode, action_mask
from .sim import GameState, Team, scene_of
from .sim.geometry import BASKET, COURT_LENGTH, COURT_WIDTH, THREE_POINT_RADIUS

MESSAGE_TYPES = ("hello", "state", "action", "ack", "error", "end")


def encode_hello(state: GameState, human_pid: int, speed: float) -> dict:
    return {
        "type": "hello",
        "court": {"width": COURT_WIDTH, "length": COURT_LENGTH,
                  "basket": [BASKET.x, BASKET.y], "arc": THREE_POINT_RADIUS},
        "players": [{"pid": p.pid, "team": p.team.value, "role": p.role.value}
                    for p in state.players],
        "human_pid": human_pid,
        "catalog": [{"id": a.id, "name": a.name, "category": a.category.value,
                     "duration": a.duration_ticks} for a in state.catalog.specs],
        "speed": speed,
        "match_ticks": state.config.match_ticks,
        "shot_clock_ticks": state.config.shot_clock_ticks,
    }


def encode_state(state: GameState, human_pid: int) -> dict:
    """Display-lossless snapshot: positions at 2-decimal meters, the human's
    legal-action mask aligned to the published catalog."""
    human = state.players[human_pid]
    return {
        "type": "state",
        "tick": state.tick,
        "scores": [state.score_home, state.score_away],
        "shot_clock": state.shot_clock_remaining,
        "match_remaining": state.match_remaining,
        "players": [{
            "pid": p.pid,
            "team": p.team.value,
            "x": round(p.pos.x, 2),
            "y": round(p.pos.y, 2),
            "facing": round(p.facing, 2),
            "scene": scene_of(state, p.pid).value,
            "has_ball": p.has_ball,
            "busy": p.remaining_ticks,
            "action": p.current_action if p.remaining_ticks > 0 else None,
        } for p in state.players],
        "ball": {
            "x": round(state.ball.pos.x, 2),
            "y": round(state.ball.pos.y, 2),
            "vx": round(state.ball.vel.x, 2),
            "vy": round(state.ball.vel.y, 2),
            "owner": state.ball.owner,
            "in_flight": state.ball.in_flight,
        },
        "human": {
            "pollable": human.remaining_ticks == 0,
            "mask": action_mask(state, human_pid, MaskMode.FULL_GAME),
        },
    }


def encode_ack(action: int, status: str, reason: str | None = None) -> dict:
    msg = {"type": "ack", "action": action, "status": status}
    if reason is not None:
        msg["reason"] = reason
    return msg


def encode_error(message: str) -> dict:
    return {"type": "error", "message": message}


def encode_end(state: GameState) -> dict:
    home, away = state.score_home, state.score_away
    winner = "draw" if home == away else ("home" if home > away else "away")
    return {"type": "end", "scores": [home, away], "winner": winner}


def encode_action(action: int) -> dict:
    return {"type": "action", "action": action}


def marshal(msg: dict) -> str:
    return json.dumps(msg, separators=(",", ":"))


def unmarshal(raw: str) -> dict:
    msg = json.loads(raw)
    if not isinstance(msg, dict) or msg.get("type") not in MESSAGE_TYPES:
        raise ValueError(f"malformed message: {raw[:80]}")
    return msg
