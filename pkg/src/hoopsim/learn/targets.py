"""TD targets: the base one-step target and the cascading variant that, at a
curriculum terminal, backs up the successor curriculum's value scaled by the
ramping weight."""

from __future__ import annotations

from dataclasses import dataclass

from ..experience import AgentTransition
from .qfunction import cached_handle
from .spaces import ActionSpace


@dataclass
class EtaSchedule:
    """Cascading weight: 0 at the start, ramping linearly to 1."""

    ramp_updates: int
    fixed: float | None = None  # pin the weight (0 for base-curricula training)

    def value(self, updates_done: int) -> float:
        if self.fixed is not None:
            return self.fixed
        if self.ramp_updates <= 0:
            return 1.0
        return min(1.0, updates_done / self.ramp_updates)


def max_over_legal(q_values, space: ActionSpace, legal_ids) -> float:
    best = None
    for i, aid in enumerate(space.ids):
        if aid in legal_ids:
            v = q_values[i]
            if best is None or v > best:
                best = v
    if best is None:
        raise ValueError("no legal action in space for the max target")
    return float(best)


def legal_indices(tr, space: ActionSpace, slot: str, legal_ids) -> tuple[int, ...]:
    """Space indices legal at the transition's next anchor, memoized."""
    key = (space.name, slot)
    v = tr.cache.get(key)
    if v is None:
        v = tuple(i for i, aid in enumerate(space.ids) if aid in legal_ids)
        if not v:
            raise ValueError("no legal action in space for the max target")
        tr.cache[key] = v
    return v


def _max_at(values, idxs) -> float:
    best = values[idxs[0]]
    for i in idxs[1:]:
        v = values[i]
        if v > best:
            best = v
    return float(best)


def td_target_base(tr: AgentTransition, target_q, gamma: float,
                   space: ActionSpace) -> float:
    if tr.done:
        return tr.r
    h = cached_handle(target_q, tr, "next", tr.s_next)
    idxs = legal_indices(tr, space, "next", tr.next_legal)
    return tr.r + gamma * _max_at(target_q.values_at(h), idxs)


def td_target_cascade(tr: AgentTransition, own_target_q, successor_target_q,
                      eta: float, gamma: float, own_space: ActionSpace,
                      successor_space: ActionSpace | None) -> float:
    """Identical to the base target until the transition is terminal for its
    curriculum; then the successor's best value is mixed in with weight eta.
    A terminal with no recorded successor (match end) falls back to the base
    target."""
    if not tr.done:
        return td_target_base(tr, own_target_q, gamma, own_space)
    if (tr.successor_obs is None or successor_target_q is None
            or successor_space is None):
        return tr.r
    if eta == 0.0:
        return tr.r
    h = cached_handle(successor_target_q, tr, "succ", tr.successor_obs)
    idxs = legal_indices(tr, successor_space, "succ", tr.successor_legal)
    succ_max = _max_at(successor_target_q.values_at(h), idxs)
    return tr.r + eta * gamma * succ_max
