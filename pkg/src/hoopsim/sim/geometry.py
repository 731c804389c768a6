"""Court geometry: a half court in meters, basket fixed, three-point arc."""

from __future__ import annotations

import math
from dataclasses import dataclass

# Half court, x across the baseline, y away from it.
COURT_WIDTH = 15.0
COURT_LENGTH = 11.4

BASKET_X = 7.5
BASKET_Y = 0.8
THREE_POINT_RADIUS = 6.75

# Geometry normalizer for observation features: largest possible distance
# from the basket to a point on the court (far corner).
MAX_BASKET_DIST = math.hypot(BASKET_X, COURT_LENGTH - BASKET_Y)


@dataclass(slots=True)
class Vec2:
    x: float
    y: float

    def dist(self, other: "Vec2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def copy(self) -> "Vec2":
        return Vec2(self.x, self.y)


BASKET = Vec2(BASKET_X, BASKET_Y)


def clamp(v: float, lo: float, hi: float) -> float:
    return lo if v < lo else hi if v > hi else v


def clamp_to_court(p: Vec2) -> None:
    p.x = clamp(p.x, 0.0, COURT_WIDTH)
    p.y = clamp(p.y, 0.0, COURT_LENGTH)


def dist_to_basket(p: Vec2) -> float:
    return math.hypot(p.x - BASKET_X, p.y - BASKET_Y)


def beyond_arc(p: Vec2) -> bool:
    return dist_to_basket(p) > THREE_POINT_RADIUS


def heading(src: Vec2, dst: Vec2) -> float:
    """Angle in radians from src toward dst."""
    return math.atan2(dst.y - src.y, dst.x - src.x)


def step_toward(p: Vec2, target: Vec2, speed: float) -> None:
    """Move p up to `speed` meters toward target, stopping on arrival."""
    d = p.dist(target)
    if d <= speed or d == 0.0:
        p.x, p.y = target.x, target.y
        return
    f = speed / d
    p.x += (target.x - p.x) * f
    p.y += (target.y - p.y) * f
