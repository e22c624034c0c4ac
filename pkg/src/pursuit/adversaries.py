"""Fixed adversary suite used to exercise the strategies under test.

The theorems quantify over all opponent paths; a simulator cannot.  These
are the strongest natural opponents: greedy geodesic pursuit, predictive
pursuit toward the target's committed waypoint, and seeded random motion.
All of them work on any space (plane, region, metric graph) through the
space API, so the same classes serve every game.
"""

from __future__ import annotations

import math
import random

from .engine import Commitment, GameView


class GreedyLion:
    """Runs along the geodesic toward the man's current position."""

    def __init__(self, speed: float = 1.0):
        self.speed = speed

    def commit(self, view: GameView) -> Commitment:
        wp = view.space.move_toward(view.me, view.man, self.speed * view.dt)
        return Commitment(view.step + 1, wp)


class PredictiveLion:
    """Runs toward the man's committed waypoint instead of his position.

    Legal: the lions may know the man's strategy in advance.
    """

    def __init__(self, speed: float = 1.0):
        self.speed = speed

    def commit(self, view: GameView) -> Commitment:
        target = view.man_waypoint if view.man_waypoint is not None else view.man
        wp = view.space.move_toward(view.me, target, self.speed * view.dt)
        return Commitment(view.step + 1, wp)


class RandomLion:
    """Seeded random rambler re-targeting every `period` steps."""

    def __init__(self, seed: int, speed: float = 1.0, period: int = 25):
        self.rng = random.Random(seed)
        self.speed = speed
        self.period = period

    def commit(self, view: GameView) -> Commitment:
        reach = self.speed * view.dt * self.period
        target = view.space.random_target(self.rng, view.me, reach)
        wp = view.space.move_toward(view.me, target, reach)
        return Commitment(view.step + self.period, wp)


class StationaryAgent:
    def commit(self, view: GameView) -> Commitment:
        return Commitment(view.step + 1, view.me)


# ---------------------------------------------------------------------------
# man-side adversaries for the capture game


class GreedyEvader:
    """Steps in the sampled direction maximizing the distance to the
    nearest lion while staying inside the region."""

    def __init__(self, speed: float = 1.0, n_dirs: int = 16):
        self.speed = speed
        self.n_dirs = n_dirs

    def commit(self, view: GameView) -> Commitment:
        region = view.space.region
        step_len = self.speed * view.dt
        best = view.me
        best_score = -math.inf
        for k in range(self.n_dirs):
            ang = 2.0 * math.pi * k / self.n_dirs
            cand = (view.me[0] + step_len * math.cos(ang), view.me[1] + step_len * math.sin(ang))
            if not region.contains(cand, eps=0.0):
                continue
            score = min(math.dist(cand, lion) for lion in view.lions)
            if score > best_score:
                best_score = score
                best = cand
        return Commitment(view.step + 1, best)


class BoundaryHugger:
    """Runs to the exterior boundary, then cycles along it forever."""

    def __init__(self, speed: float = 1.0):
        self.speed = speed
        self._s = None

    def commit(self, view: GameView) -> Commitment:
        from .polyline import PolyPath

        region = view.space.region
        ring = PolyPath(list(region.exterior) + [region.exterior[0]])
        if self._s is None:
            self._s, d = ring.project(view.me)
            if d > 1e-9:
                wp = view.space.move_toward(view.me, ring.point_at(self._s), self.speed * view.dt)
                self._s = None if math.dist(wp, ring.point_at(self._s)) > 1e-9 else self._s
                return Commitment(view.step + 1, wp)
        self._s = (self._s + self.speed * view.dt) % ring.length
        return Commitment(view.step + 1, ring.point_at(self._s))


class RandomWalkMan:
    """Seeded random waypoints inside the region."""

    def __init__(self, seed: int, speed: float = 1.0, period: int = 20):
        self.rng = random.Random(seed)
        self.speed = speed
        self.period = period

    def commit(self, view: GameView) -> Commitment:
        reach = self.speed * view.dt * self.period
        target = view.space.random_target(self.rng, view.me, reach)
        wp = view.space.move_toward(view.me, target, reach)
        return Commitment(view.step + self.period, wp)
