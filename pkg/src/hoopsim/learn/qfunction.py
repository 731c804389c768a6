"""Value-function approximators: a tabular Q over a documented discretization
of the local observation, and a linear Q over the raw features."""

from __future__ import annotations

import math

import numpy as np

from ..observations import DIST_NORM, ObsLayout

# Discretization bins (tabular): distance to basket uses the shot-selection
# boundaries, defender distance uses the contest-factor boundaries.
DIST_BINS = (2.5, 4.5, 6.75)  # -> 4 bins
DEFENDER_BINS = (1.0, 2.0)  # -> 3 bins
BALL_NEAR = 1.2  # meters; within reach collapses the direction bins
N_DIR_BINS = 8
LATE_CLOCK_FRAC = 0.2  # shot clock below 20% reads as "late"


def _bin(value: float, edges: tuple[float, ...]) -> int:
    for i, e in enumerate(edges):
        if value < e:
            return i
    return len(edges)


def _dir_bin(dx: float, dy: float) -> int:
    if dx == 0.0 and dy == 0.0:
        return 0
    a = math.atan2(dy, dx) % (2 * math.pi)
    return int(a / (2 * math.pi) * N_DIR_BINS) % N_DIR_BINS


def make_obs_key(layout: ObsLayout):
    """Key function for the tabular approximator.

    Components: scene, has-ball flag, distance-to-basket bin, bearing-to-basket
    bin, bearing-to-ball bin (with a near-ball bucket), nearest-defender bin,
    late-shot-clock flag.
    """
    from ..sim.geometry import BASKET, COURT_LENGTH, COURT_WIDTH

    i_scene = layout.idx_scene
    i_ball = layout.idx_ball
    i_dist = layout.idx_dist_basket
    i_def = layout.idx_defender_dist
    i_clock = layout.idx_shot_clock
    i_has = layout.idx_has_ball

    def key(obs) -> tuple:
        scene = 0
        for k in range(5):
            if obs[i_scene + k] == 1.0:
                scene = k
                break
        sx = obs[0] * COURT_WIDTH
        sy = obs[1] * COURT_LENGTH
        bx = obs[i_ball] * COURT_WIDTH
        by = obs[i_ball + 1] * COURT_LENGTH
        ball_dx, ball_dy = bx - sx, by - sy
        ball_dist = math.hypot(ball_dx, ball_dy)
        ball_bin = N_DIR_BINS if ball_dist <= BALL_NEAR else _dir_bin(ball_dx, ball_dy)
        return (
            scene,
            1 if obs[i_has] == 1.0 else 0,
            _bin(obs[i_dist] * DIST_NORM, DIST_BINS),
            _dir_bin(BASKET.x - sx, BASKET.y - sy),
            ball_bin,
            _bin(obs[i_def] * DIST_NORM, DEFENDER_BINS),
            1 if obs[i_clock] < LATE_CLOCK_FRAC else 0,
        )

    return key


class TabularQ:
    """Q table over a discretized observation key."""

    kind = "tabular"

    def __init__(self, n_actions: int, key_fn):
        self.n_actions = n_actions
        self.key_fn = key_fn
        self.table: dict[tuple, np.ndarray] = {}
        self._zeros = np.zeros(n_actions)

    def _row(self, obs) -> np.ndarray:
        k = self.key_fn(obs)
        row = self.table.get(k)
        if row is None:
            row = np.zeros(self.n_actions)
            self.table[k] = row
        return row

    def q_values(self, obs) -> np.ndarray:
        row = self.table.get(self.key_fn(obs))
        return row.copy() if row is not None else np.zeros(self.n_actions)

    def grad_step(self, obs, action_idx: int, delta: float, lr: float) -> None:
        self._row(obs)[action_idx] += lr * delta

    # Handle API: prepare() once per observation, then read/step without
    # re-discretizing. values_at returns a read-only view.
    def prepare(self, obs):
        return self.key_fn(obs)

    def values_at(self, handle) -> np.ndarray:
        row = self.table.get(handle)
        return row if row is not None else self._zeros

    def step_at(self, handle, action_idx: int, delta: float, lr: float) -> None:
        row = self.table.get(handle)
        if row is None:
            row = np.zeros(self.n_actions)
            self.table[handle] = row
        row[action_idx] += lr * delta

    def sync_from(self, other: "TabularQ") -> None:
        self.table = {k: v.copy() for k, v in other.table.items()}

    def clone(self) -> "TabularQ":
        c = TabularQ(self.n_actions, self.key_fn)
        c.sync_from(self)
        return c

    def to_payload(self) -> dict:
        return {"kind": self.kind, "n_actions": self.n_actions,
                "table": {",".join(map(str, k)): v.tolist()
                          for k, v in self.table.items()}}

    def load_payload(self, payload: dict) -> None:
        self.table = {tuple(int(x) for x in k.split(",")): np.asarray(v, dtype=float)
                      for k, v in payload["table"].items()}


class LinearQ:
    """Linear Q: one weight column per action over the observation features
    plus a bias term."""

    kind = "linear"

    def __init__(self, n_features: int, n_actions: int):
        self.n_features = n_features
        self.n_actions = n_actions
        self.theta = np.zeros((n_features + 1, n_actions))

    def _phi(self, obs) -> np.ndarray:
        phi = np.empty(self.n_features + 1)
        phi[:-1] = obs
        phi[-1] = 1.0
        return phi

    def q_values(self, obs) -> np.ndarray:
        return self._phi(obs) @ self.theta

    def grad_step(self, obs, action_idx: int, delta: float, lr: float) -> None:
        self.theta[:, action_idx] += lr * delta * self._phi(obs)

    def prepare(self, obs):
        return self._phi(obs)

    def values_at(self, handle) -> np.ndarray:
        return handle @ self.theta

    def step_at(self, handle, action_idx: int, delta: float, lr: float) -> None:
        self.theta[:, action_idx] += lr * delta * handle

    def sync_from(self, other: "LinearQ") -> None:
        self.theta = other.theta.copy()

    def clone(self) -> "LinearQ":
        c = LinearQ(self.n_features, self.n_actions)
        c.sync_from(self)
        return c

    def to_payload(self) -> dict:
        return {"kind": self.kind, "n_features": self.n_features,
                "n_actions": self.n_actions, "theta": self.theta.tolist()}

    def load_payload(self, payload: dict) -> None:
        self.theta = np.asarray(payload["theta"], dtype=float)


def make_q(approximator: str, n_features: int, n_actions: int, layout: ObsLayout):
    if approximator == "tabular":
        return TabularQ(n_actions, make_obs_key(layout))
    if approximator == "linear":
        return LinearQ(n_features, n_actions)
    raise ValueError(f"unknown approximator {approximator!r}")


def cached_handle(q, tr, slot: str, obs):
    """Per-transition memo of q.prepare(obs); shared by q/target of one kind."""
    key = (q.kind, slot)
    h = tr.cache.get(key)
    if h is None:
        h = q.prepare(obs)
        tr.cache[key] = h
    return h
