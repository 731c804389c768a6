"""Gradient updates for independent, hysteretic, and value-decomposition
learners, plus masked epsilon-greedy selection.

All deltas in a batch are computed against the pre-update parameters and then
applied with learning rate alpha / batch size.
"""

from __future__ import annotations

import functools
import random
from typing import Callable, Sequence

from ..experience import AgentTransition, JointTransition
from .qfunction import cached_handle
from .spaces import ActionSpace
from .targets import legal_indices, max_over_legal


@functools.lru_cache(maxsize=None)
def _index_map(space: ActionSpace) -> dict[int, int]:
    return {aid: i for i, aid in enumerate(space.ids)}


def _a_index(tr, space: ActionSpace, action_id: int, slot: str) -> int:
    key = (space.name, slot)
    v = tr.cache.get(key)
    if v is None:
        v = _index_map(space)[action_id]
        tr.cache[key] = v
    return v


def select_action(q_values, legal_mask: Sequence[bool], epsilon: float,
                  rng: random.Random) -> int:
    """Epsilon-greedy over the legal entries; greedy ties break toward the
    lowest index."""
    legal = [i for i, ok in enumerate(legal_mask) if ok]
    if not legal:
        raise ValueError("select_action needs at least one legal entry")
    if epsilon > 0.0 and rng.random() < epsilon:
        return legal[rng.randrange(len(legal))]
    best = legal[0]
    best_v = q_values[best]
    for i in legal[1:]:
        if q_values[i] > best_v:
            best, best_v = i, q_values[i]
    return best


TargetFn = Callable[[AgentTransition], float]


def update_iql(batch: Sequence[AgentTransition], q, target_fn: TargetFn,
               alpha: float, space: ActionSpace) -> float:
    """One batch-averaged TD step; returns the mean absolute TD error."""
    steps = []
    for tr in batch:
        a = _a_index(tr, space, tr.a, "a")
        h = cached_handle(q, tr, "s", tr.s)
        delta = target_fn(tr) - float(q.values_at(h)[a])
        steps.append((h, a, delta))
    lr = alpha / len(batch)
    for h, a, delta in steps:
        q.step_at(h, a, delta, lr)
    return sum(abs(d) for _, _, d in steps) / len(steps)


def update_hyq(batch: Sequence[AgentTransition], q, target_fn: TargetFn,
               alpha: float, beta: float, space: ActionSpace) -> float:
    """Hysteretic step: positive TD errors learn at alpha, negative at beta."""
    steps = []
    for tr in batch:
        a = _a_index(tr, space, tr.a, "a")
        h = cached_handle(q, tr, "s", tr.s)
        delta = target_fn(tr) - float(q.values_at(h)[a])
        steps.append((h, a, delta))
    n = len(batch)
    for h, a, delta in steps:
        rate = alpha if delta > 0 else beta
        q.step_at(h, a, delta, rate / n)
    return sum(abs(d) for _, _, d in steps) / len(steps)


def vdn_q_tot(tr: JointTransition, qs, space: ActionSpace) -> float:
    total = 0.0
    for i, q in enumerate(qs):
        a = _a_index(tr, space, tr.a_vec[i], f"a{i}")
        h = cached_handle(q, tr, f"s{i}", tr.s_vec[i])
        total += float(q.values_at(h)[a])
    return total


def vdn_target(tr: JointTransition, target_qs, gamma: float,
               space: ActionSpace) -> float:
    if tr.done:
        return tr.r
    total = 0.0
    for i, q in enumerate(target_qs):
        h = cached_handle(q, tr, f"next{i}", tr.s_vec_next[i])
        idxs = legal_indices(tr, space, f"nexti{i}", tr.next_legal_vec[i])
        values = q.values_at(h)
        best = values[idxs[0]]
        for j in idxs[1:]:
            if values[j] > best:
                best = values[j]
        total += float(best)
    return tr.r + gamma * total


def update_vdn(batch: Sequence[JointTransition], qs, target_qs, gamma: float,
               alpha: float, space: ActionSpace) -> float:
    """Joint TD step on the summed value; the shared error distributes
    additively onto every agent's parameters."""
    steps = []
    for tr in batch:
        delta = vdn_target(tr, target_qs, gamma, space) - vdn_q_tot(tr, qs, space)
        steps.append((tr, delta))
    lr = alpha / len(batch)
    for tr, delta in steps:
        for i, q in enumerate(qs):
            a = _a_index(tr, space, tr.a_vec[i], f"a{i}")
            h = cached_handle(q, tr, f"s{i}", tr.s_vec[i])
            q.step_at(h, a, delta, lr)
    return sum(abs(d) for _, d in steps) / len(steps)
