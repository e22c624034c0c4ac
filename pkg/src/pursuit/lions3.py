"""Three unit-speed lions catching a man in a region with lakes.

The hunt has three stages:

1. Lake elimination.  Two lions guard paths bounding a strip containing
   the man; the idle third builds a new guarded path (a "cutting move")
   splitting the strip, and the man's side is kept.  The new path is found
   by sliding both endpoints along the coasts until the connecting
   geodesic is about to jump over a lake; the pre-jump geodesic wraps that
   lake, so in the sub-strip on the far side it becomes a boundary lake.
   Every cut removes lakes from the man's strip or turns an inner lake
   into a boundary lake, so at most 2L cuts reach a lake-free strip.
   Shrinking moves (bookkeeping only, no motion) restrict to the minimal
   strip when a lake spans both walls.

2. Peninsula halving.  In the lake-free strip the guards use
   nearest-point rules; the diagonal wall traps the man in a peninsula
   (two guarded geodesics from an apex plus a coast).  Each round builds
   the coast's chord: the man either lands in a pseudo-triangle or keeps a
   peninsula with half the coast.

3. Pseudo-triangle endgame.  The three guarded geodesics become three
   advancing line guards: each lion tracks the man's projection on its
   line and spends residual speed pushing the line toward him, shrinking
   the guarded triangle's inradius to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .engine import Commitment, GameConfig, GameOutcome, GameView, RegionSpace, run_game
from .geodesic import NearestGuard, NoPathError, PathSystem, RatioGuard
from .geom import (
    EPS,
    Point,
    dist,
    dot,
    lerp,
    segment_intersection_params,
    segments_properly_cross,
    sub,
    unit,
)
from .polyline import PolyPath
from .region import FeasibleRegion


class MinimalityViolation(RuntimeError):
    def __init__(self, lake_id: int):
        super().__init__(f"lake {lake_id} touches both strip walls")
        self.lake_id = lake_id


class ProgressStall(RuntimeError):
    pass


class CutFailure(RuntimeError):
    pass


TOUCH_EPS = 1e-7


# ---------------------------------------------------------------------------
# walls


@dataclass
class GuardedWall:
    """A guarded path plus the motion rule keeping the guard on it."""

    path: PolyPath
    system: PathSystem
    mode: str  # 'ratio' | 'nearest' | 'stand'
    lion: int
    arclength: float = 0.0
    live: bool = False

    def attach_rules(self) -> "GuardedWall":
        if self.path.is_degenerate:
            self.mode = "stand"
        elif self.mode == "ratio":
            self._rule = RatioGuard(self.path, self.system)
        elif self.mode == "nearest":
            self._rule = NearestGuard(self.path, self.system)
        return self

    def target_arclength(self, man: Point) -> float:
        if self.mode == "stand" or self.path.is_degenerate:
            return 0.0
        if self.mode == "ratio":
            return self._rule.target_arclength(man)
        return self._rule.target_arclength(man)[0]


# ---------------------------------------------------------------------------
# rings and membership


def _ring_points(*paths: Sequence[Point]) -> list[Point]:
    ring: list[Point] = []
    for pts in paths:
        for p in pts:
            if not ring or dist(ring[-1], p) > 1e-12:
                ring.append(p)
    if len(ring) > 1 and dist(ring[0], ring[-1]) <= 1e-12:
        ring.pop()
    return ring


def _point_in_ring(p: Point, ring: Sequence[Point]) -> bool:
    inside = False
    n = len(ring)
    for i in range(n):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % n]
        if (y1 > p[1]) != (y2 > p[1]):
            xint = x1 + (p[1] - y1) * (x2 - x1) / (y2 - y1)
            if p[0] < xint:
                inside = not inside
    return inside


# ---------------------------------------------------------------------------
# strips


@dataclass
class StripState:
    """The man's strip: two guarded walls and two coasts.

    coast_p runs path_a.start -> path_b.start along the region boundary
    (or along lake shores after shrinking); coast_q joins the far ends.
    path_a / path_b are the wall portions bounding this strip; the guards
    themselves may run on longer original paths after shrinking moves.
    """

    wall_a: GuardedWall
    wall_b: GuardedWall
    path_a: PolyPath
    path_b: PolyPath
    coast_p: PolyPath
    coast_q: PolyPath
    lake_ids: list[int]


def strip_ring(strip: StripState) -> list[Point]:
    return _ring_points(
        strip.path_a.vertices,
        strip.coast_q.vertices,
        tuple(reversed(strip.path_b.vertices)),
        tuple(reversed(strip.coast_p.vertices)),
    )


def lakes_inside_ring(region: FeasibleRegion, ring: Sequence[Point]) -> list[int]:
    return [
        k
        for k in range(len(region.lakes))
        if _point_in_ring(region.lake_interior_point(k), ring)
    ]


def classify_lakes(region: FeasibleRegion, strip: StripState) -> dict[int, str]:
    """Label each strip lake 'inner' / 'a' / 'b' by wall contact; raises
    MinimalityViolation when a lake touches both walls."""
    labels: dict[int, str] = {}
    for k in strip.lake_ids:
        lake = region.lakes[k]
        touch_a = min(strip.path_a.distance_to(v) for v in lake) <= TOUCH_EPS
        touch_b = min(strip.path_b.distance_to(v) for v in lake) <= TOUCH_EPS
        if touch_a and touch_b:
            raise MinimalityViolation(k)
        labels[k] = "a" if touch_a else ("b" if touch_b else "inner")
    return labels


def wall_contacts(path: PolyPath, lake: Sequence[Point]) -> list[Point]:
    return [v for v in lake if path.distance_to(v) <= TOUCH_EPS]


def strip_system(region: FeasibleRegion, strip: StripState, pinches=()) -> PathSystem:
    return PathSystem(
        region, barriers=[strip.path_a, strip.path_b], pinches=pinches
    )


def guard_system(region: FeasibleRegion, strip: StripState) -> PathSystem:
    """Guard context for a wall cut from this strip: the strip walls as
    barriers, with every boundary lake sealed to its wall at the contact
    points (the passage between lake and wall has zero width there)."""
    pinches: list[Point] = []
    for wall_path in (strip.path_a, strip.path_b):
        for k in strip.lake_ids:
            pinches.extend(wall_contacts(wall_path, region.lakes[k]))
    return strip_system(region, strip, pinches=pinches)


# ---------------------------------------------------------------------------
# cutting moves


@dataclass
class CutPlan:
    path: PolyPath
    system: PathSystem
    case: int
    s_p: float  # arclength of path.start along coast_p
    s_q: float
    touched: int | None


def _touching_lake(region: FeasibleRegion, path: PolyPath, lake_ids) -> int | None:
    for k in lake_ids:
        if min(path.distance_to(v) for v in region.lakes[k]) <= TOUCH_EPS:
            return k
    return None


def plan_cut_sliding(
    region: FeasibleRegion,
    strip: StripState,
    labels: dict[int, str],
    case: int,
    coarse: int = 48,
) -> CutPlan:
    """Cases 1 and 2: slide both endpoints along the coasts (away from the
    clean wall in case 2) and bisect to the last geodesic before one first
    jumps over a lake.  That pre-jump geodesic wraps the lake, keeping it
    on the far side, so the lake turns into a boundary lake of the cut."""
    from_a = True
    if case == 2:
        from_a = not any(side == "a" for side in labels.values())
    sys_ = strip_system(region, strip)
    lakes = list(strip.lake_ids)

    def probe(s: float):
        lp, lq = strip.coast_p.length, strip.coast_q.length
        sp = s * lp if from_a else (1.0 - s) * lp
        sq = s * lq if from_a else (1.0 - s) * lq
        p = strip.coast_p.point_at(sp)
        q = strip.coast_q.point_at(sq)
        path = sys_.shortest_path(p, q)
        if from_a:
            ring = _ring_points(
                strip.path_a.vertices,
                strip.coast_q.sub_path(0.0, sq).vertices,
                tuple(reversed(path.vertices)),
                tuple(reversed(strip.coast_p.sub_path(0.0, sp).vertices)),
            )
        else:
            ring = _ring_points(
                path.vertices,
                strip.coast_q.sub_path(sq, lq).vertices,
                tuple(reversed(strip.path_b.vertices)),
                tuple(reversed(strip.coast_p.sub_path(sp, lp).vertices)),
            )
        flipped = any(
            _point_in_ring(region.lake_interior_point(k), ring) for k in lakes
        )
        return path, sp, sq, flipped

    if strip.coast_p.length <= EPS and strip.coast_q.length <= EPS:
        # both coasts degenerate: nothing to slide; the geodesic between
        # the pinned endpoints must itself wrap a lake
        path, sp, sq, _ = probe(0.0)
        touched = _touching_lake(region, path, lakes)
        if touched is None:
            raise CutFailure("degenerate-coast strip: geodesic touches no lake")
        return CutPlan(path, guard_system(region, strip), case, sp, sq, touched)

    hi = None
    prev = 0.0
    for i in range(1, coarse + 1):
        s = i / coarse
        _, _, _, hit = probe(s)
        if hit:
            hi = s
            break
        prev = s
    if hi is None:
        raise CutFailure("sliding cut never jumps a lake")
    lo = prev
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        _, _, _, hit = probe(mid)
        if hit:
            hi = mid
        else:
            lo = mid
    path, sp, sq, _ = probe(lo)
    touched = _touching_lake(region, path, lakes)
    if touched is None:
        raise CutFailure("pre-jump geodesic does not touch a lake")
    return CutPlan(path, guard_system(region, strip), case, sp, sq, touched)


def plan_cut_separating(
    region: FeasibleRegion, strip: StripState, labels: dict[int, str]
) -> CutPlan:
    """Case 3: both walls own boundary lakes.  The new wall joins wall_a's
    endpoints and separates the classes; sealing every boundary lake to
    its wall (zero-width contacts) realizes the constraint."""
    sys_ = guard_system(region, strip)
    path = sys_.shortest_path(strip.path_a.start, strip.path_a.end)
    return CutPlan(path, sys_, 3, 0.0, 0.0, None)


def plan_cut(region: FeasibleRegion, strip: StripState) -> CutPlan:
    labels = classify_lakes(region, strip)
    if not strip.lake_ids:
        raise CutFailure("strip has no lakes: peninsula phase applies")
    has_a = any(s == "a" for s in labels.values())
    has_b = any(s == "b" for s in labels.values())
    if has_a and has_b:
        return plan_cut_separating(region, strip, labels)
    if has_a or has_b:
        return plan_cut_sliding(region, strip, labels, case=2)
    return plan_cut_sliding(region, strip, labels, case=1)


def split_strip(
    region: FeasibleRegion,
    strip: StripState,
    plan: CutPlan,
    new_wall: GuardedWall,
    man: Point,
) -> tuple[StripState, int]:
    """Keep the man's side of the cut; returns (new strip, freed lion)."""
    ring_a_side = _ring_points(
        strip.path_a.vertices,
        strip.coast_q.sub_path(0.0, plan.s_q).vertices,
        tuple(reversed(plan.path.vertices)),
        tuple(reversed(strip.coast_p.sub_path(0.0, plan.s_p).vertices)),
    )
    if _point_in_ring(man, ring_a_side):
        new = StripState(
            wall_a=strip.wall_a,
            wall_b=new_wall,
            path_a=strip.path_a,
            path_b=new_wall.path,
            coast_p=strip.coast_p.sub_path(0.0, plan.s_p),
            coast_q=strip.coast_q.sub_path(0.0, plan.s_q),
            lake_ids=[],
        )
        freed = strip.wall_b.lion
    else:
        new = StripState(
            wall_a=new_wall,
            wall_b=strip.wall_b,
            path_a=new_wall.path,
            path_b=strip.path_b,
            coast_p=strip.coast_p.sub_path(plan.s_p, strip.coast_p.length),
            coast_q=strip.coast_q.sub_path(plan.s_q, strip.coast_q.length),
            lake_ids=[],
        )
        freed = strip.wall_a.lion
    new.lake_ids = lakes_inside_ring(region, strip_ring(new))
    return new, freed


def shrinking_move(region: FeasibleRegion, strip: StripState, man: Point) -> StripState:
    """Restrict to the minimal strip containing the man; costs no time,
    since the existing guards already cover the retained sub-walls."""
    while True:
        try:
            classify_lakes(region, strip)
            return strip
        except MinimalityViolation as violation:
            k = violation.lake_id
            lake = region.lakes[k]
            contacts_a = wall_contacts(strip.path_a, lake)
            contacts_b = wall_contacts(strip.path_b, lake)
            ca = min(contacts_a, key=lambda v: strip.path_a.project(v)[0])
            cb = min(contacts_b, key=lambda v: strip.path_b.project(v)[0])
            s_a = strip.path_a.project(ca)[0]
            s_b = strip.path_b.project(cb)[0]
            probe = PathSystem(
                region, barriers=[strip.path_a, strip.path_b], pinches=[ca, cb]
            )

            def reachable(p: Point) -> bool:
                try:
                    probe.distance(man, p)
                    return True
                except NoPathError:
                    return False

            p_side = reachable(strip.coast_p.point_at(strip.coast_p.length / 2.0))
            ring = list(lake)
            ia, ib = ring.index(ca), ring.index(cb)
            lo_i, hi_i = min(ia, ib), max(ia, ib)
            arcs = [ring[lo_i : hi_i + 1], ring[hi_i:] + ring[: lo_i + 1]]
            arc = None
            for cand in arcs:
                mids = [lerp(cand[i], cand[i + 1], 0.5) for i in range(len(cand) - 1)]
                if mids and all(reachable(mp) for mp in mids):
                    arc = cand
                    break
            if arc is None:
                raise CutFailure("cannot attribute the blocking lake's shore")
            if dist(arc[0], ca) > dist(arc[-1], ca):
                arc = list(reversed(arc))
            # arc now runs from the wall_a contact to the wall_b contact
            if p_side:
                strip = StripState(
                    wall_a=strip.wall_a,
                    wall_b=strip.wall_b,
                    path_a=strip.path_a.sub_path(0.0, s_a),
                    path_b=strip.path_b.sub_path(0.0, s_b),
                    coast_p=strip.coast_p,
                    coast_q=PolyPath(arc),
                    lake_ids=[],
                )
            else:
                strip = StripState(
                    wall_a=strip.wall_a,
                    wall_b=strip.wall_b,
                    path_a=strip.path_a.sub_path(s_a, strip.path_a.length),
                    path_b=strip.path_b.sub_path(s_b, strip.path_b.length),
                    coast_p=PolyPath(arc),
                    coast_q=strip.coast_q,
                    lake_ids=[],
                )
            strip.lake_ids = lakes_inside_ring(region, strip_ring(strip))


# ---------------------------------------------------------------------------
# peninsulas


@dataclass
class PenSide:
    geom: PolyPath  # this stage's bounding path, oriented apex -> coast
    guard: GuardedWall


@dataclass
class PeninsulaState:
    apex: Point
    side_a: PenSide
    side_b: PenSide
    coast: PolyPath  # side_a's coast end -> side_b's coast end


def _oriented(path: PolyPath, start: Point) -> PolyPath:
    if dist(path.start, start) <= dist(path.end, start):
        return path
    return path.reversed()


def peninsula_ring(pen: PeninsulaState) -> list[Point]:
    return _ring_points(
        pen.side_a.geom.vertices,
        pen.coast.vertices,
        tuple(reversed(pen.side_b.geom.vertices)),
    )


# ---------------------------------------------------------------------------
# pseudo-triangle endgame


@dataclass
class LineGuard:
    normal: Point  # unit vector pointing from the line toward the man
    offset: float  # the line is { x : <x, normal> = offset }

    def gap(self, p: Point) -> float:
        return dot(p, self.normal) - self.offset

    def project(self, p: Point) -> Point:
        g = self.gap(p)
        return (p[0] - g * self.normal[0], p[1] - g * self.normal[1])


def triangle_inradius(lines: Sequence[LineGuard]) -> tuple[Point, float]:
    """Center and radius of the largest disk inside the three half-planes,
    from the linear system <x, n_i> - rho = offset_i."""
    import numpy as np

    a = np.array([[l.normal[0], l.normal[1], -1.0] for l in lines])
    b = np.array([l.offset for l in lines])
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        return (0.0, 0.0), 0.0
    return (float(x[0]), float(x[1])), float(x[2])


class EndgameDriver:
    """Advancing line guards: track the man's projection, spend residual
    speed pushing the line toward him."""

    def __init__(self, man: Point, lions: Sequence[Point]):
        self.lines: list[LineGuard] = []
        for lion in lions:
            d = dist(man, lion)
            n = (1.0, 0.0) if d <= 1e-12 else unit(sub(man, lion))
            self.lines.append(LineGuard(normal=n, offset=dot(lion, n)))
        self.stall_steps = 0

    def inradius(self) -> float:
        return triangle_inradius(self.lines)[1]

    def step_targets(self, man_next: Point, lions: Sequence[Point], dt: float) -> list[Point]:
        """Targets given where the man will stand at the end of the step
        (the lions may know his strategy, so they track without lag: a
        crossing attempt puts the guard exactly on him).

        Budget accounting allows the lion to be slightly off its line
        (after being clamped at the region boundary): tangential tracking
        first, leftover speed split between recovering the line and
        advancing it.
        """
        targets = []
        advanced = 0.0
        for line, lion in zip(self.lines, lions):
            q = line.project(man_next)
            tangential = dist(line.project(lion), q)
            g = line.gap(lion)  # lion's own normal offset (0 when on-line)
            max_normal = math.sqrt(max(0.0, dt * dt - min(tangential, dt) ** 2))
            # the line may only advance to a coordinate its lion can reach
            adv = min(max(0.0, g + max_normal), max(0.0, line.gap(man_next)))
            n_new = min(adv, g + max_normal)
            line.offset += adv
            advanced = max(advanced, adv)
            target = (q[0] + n_new * line.normal[0], q[1] + n_new * line.normal[1])
            d = dist(lion, target)
            if d > dt:  # degraded tracking; never exceed the speed cap
                f = dt / d
                target = lerp(lion, target, f)
            targets.append(target)
        if advanced <= 1e-15:
            self.stall_steps += 1
        else:
            self.stall_steps = 0
        return targets


# ---------------------------------------------------------------------------
# the team controller


@dataclass
class _Transit:
    """A lion walking to a pending wall, then chasing its guard target."""

    wall: GuardedWall
    approach: PolyPath

    def __post_init__(self):
        self.cursor = 0.0

    def done(self, man: Point) -> bool:
        if self.cursor < self.approach.length - 1e-12:
            return False
        s = self.cursor - self.approach.length
        return s >= self.wall.target_arclength(man) - 1e-12

    def advance(self, budget: float, man: Point) -> Point:
        total = self.approach.length + self.wall.path.length
        self.cursor = min(self.cursor + budget, total)
        if self.done(man):
            self.wall.arclength = min(
                max(0.0, self.cursor - self.approach.length), self.wall.path.length
            )
        if self.cursor <= self.approach.length:
            return self.approach.point_at(self.cursor)
        return self.wall.path.point_at(self.cursor - self.approach.length)


class LionTeamController:
    """State machine driving the three lions through the hunt."""

    def __init__(
        self,
        region: FeasibleRegion,
        space: RegionSpace,
        capture_radius: float,
        man_speed: float = 1.0,
    ):
        self.region = region
        self.space = space
        self.capture_radius = capture_radius
        self.man_speed = man_speed
        self.plain = PathSystem(region)
        self.phase = "init"
        self.strip: StripState | None = None
        self.pen: PeninsulaState | None = None
        self.transit: _Transit | None = None
        self.transit_lion: int | None = None
        self.idle_lion: int | None = None
        self.endgame: EndgameDriver | None = None
        self.endgame_lions: list[int] = []
        self.cut_count = 0
        self.halvings: list[float] = []  # coast length at each halving
        self._init_targets: list[Point] | None = None
        self._pending_plan: CutPlan | None = None
        self._pending_halving = None
        self._positions: list[Point] = []
        self._cached_step = -1
        self._cached: list[Point] = []

    # -- helpers -------------------------------------------------------------

    def live_walls(self) -> list[GuardedWall]:
        walls = []
        if self.strip is not None:
            walls.extend([self.strip.wall_a, self.strip.wall_b])
        if self.pen is not None:
            walls.extend([self.pen.side_a.guard, self.pen.side_b.guard])
        if self.transit is not None:
            walls.append(self.transit.wall)
        return [w for w in walls if w.live and not w.path.is_degenerate]

    def _clamp_inside(self, frompt: Point, to: Point) -> Point:
        """Furthest point toward `to` from an inside point that stays in
        the region (line guards stop at the boundary)."""
        if self.region.contains(to, eps=0.0) and self.region.segment_inside(frompt, to):
            return to
        lo, hi = 0.0, 1.0
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            cand = lerp(frompt, to, mid)
            if self.region.contains(cand, eps=0.0) and self.region.segment_inside(
                frompt, cand
            ):
                lo = mid
            else:
                hi = mid
        return lerp(frompt, to, lo)

    def _nearest_exterior_vertex(self, p: Point, taken: set[int]) -> int:
        order = sorted(
            range(len(self.region.exterior)),
            key=lambda i: (dist(p, self.region.exterior[i]), i),
        )
        for i in order:
            if i not in taken:
                return i
        return order[0]

    # -- phase: init -----------------------------------------------------------

    def _setup_initial_strip(self, lions: list[Point]) -> None:
        ext = self.region.exterior
        i0 = self._nearest_exterior_vertex(lions[0], set())
        i1 = self._nearest_exterior_vertex(lions[1], {i0})
        ring = PolyPath(list(ext) + [ext[0]])
        s0, s1 = ring.cum[i0], ring.cum[i1]
        lo, hi = min(s0, s1), max(s0, s1)
        arc1 = ring.sub_path(lo, hi)
        arc2 = ring.sub_path(hi, ring.length).concat(ring.sub_path(0.0, lo)).reversed()
        # orient both arcs v0 -> v1
        if s0 > s1:
            arc1 = arc1.reversed()
            arc2 = arc2.reversed()
        v0, v1 = ext[i0], ext[i1]
        wall_a = GuardedWall(PolyPath([v0]), self.plain, "stand", lion=0)
        wall_b = GuardedWall(PolyPath([v1]), self.plain, "stand", lion=1)
        self.strip = StripState(
            wall_a=wall_a,
            wall_b=wall_b,
            path_a=wall_a.path,
            path_b=wall_b.path,
            coast_p=arc1,
            coast_q=arc2,
            lake_ids=list(range(len(self.region.lakes))),
        )
        self.idle_lion = 2
        self._init_targets = [v0, v1]

    # -- phase: cutting ----------------------------------------------------------

    def _begin_cut(self, lions: list[Point], man: Point, emit) -> None:
        before = len(self.strip.lake_ids)
        strip = shrinking_move(self.region, self.strip, man)
        if len(strip.lake_ids) != before:
            emit("shrinking_move", {"lakes": len(strip.lake_ids)})
        self.strip = strip
        if not strip.lake_ids:
            self._begin_peninsula_transition(lions, emit)
            return
        plan = plan_cut(self.region, strip)
        wall = GuardedWall(plan.path, plan.system, "ratio", lion=self.idle_lion).attach_rules()
        approach = self.plain.shortest_path(lions[self.idle_lion], plan.path.start)
        self.transit = _Transit(wall=wall, approach=approach)
        self.transit_lion, self.idle_lion = self.idle_lion, None
        self._pending_plan = plan
        emit(
            "cutting_move",
            {"case": plan.case, "wall_len": plan.path.length, "lakes": len(strip.lake_ids)},
        )

    def _finish_cut(self, man: Point, emit) -> None:
        wall = self.transit.wall
        wall.live = True
        self.cut_count += 1
        new_strip, freed = split_strip(self.region, self.strip, self._pending_plan, wall, man)
        self.strip = new_strip
        self.idle_lion = freed
        self.transit = self.transit_lion = self._pending_plan = None
        emit("strip_reduced", {"lakes": len(new_strip.lake_ids), "cuts": self.cut_count})

    # -- phase: entering the peninsula stage ------------------------------------------

    def _begin_peninsula_transition(self, lions: list[Point], emit) -> None:
        strip = self.strip
        sys_ = strip_system(self.region, strip)
        diag = sys_.shortest_path(strip.path_a.start, strip.path_b.end)
        wall = GuardedWall(diag, sys_, "nearest", lion=self.idle_lion).attach_rules()
        approach = self.plain.shortest_path(lions[self.idle_lion], diag.start)
        self.transit = _Transit(wall=wall, approach=approach)
        self.transit_lion, self.idle_lion = self.idle_lion, None
        self.phase = "to_peninsula"
        emit("peninsula", {"diagonal_len": diag.length})

    def _finish_peninsula_transition(self, man: Point, emit) -> None:
        strip = self.strip
        diag_wall = self.transit.wall
        diag_wall.live = True
        self.transit = self.transit_lion = None
        diag = diag_wall.path  # path_a.start -> path_b.end
        ring_a = _ring_points(
            strip.path_a.vertices,
            strip.coast_q.vertices,
            tuple(reversed(diag.vertices)),
        )
        if _point_in_ring(man, ring_a):
            apex = strip.path_a.start
            self.pen = PeninsulaState(
                apex=apex,
                side_a=PenSide(_oriented(strip.path_a, apex), strip.wall_a),
                side_b=PenSide(_oriented(diag, apex), diag_wall),
                coast=strip.coast_q,
            )
            freed = strip.wall_b.lion
        else:
            apex = strip.path_b.end
            self.pen = PeninsulaState(
                apex=apex,
                side_a=PenSide(_oriented(diag, apex), diag_wall),
                side_b=PenSide(_oriented(strip.path_b, apex), strip.wall_b),
                coast=strip.coast_p.reversed(),
            )
            freed = strip.wall_a.lion
        self.idle_lion = freed
        self.strip = None
        self.phase = "halving"

    # -- phase: halving -------------------------------------------------------------

    def _begin_halving(self, lions: list[Point], emit) -> None:
        pen = self.pen
        barriers = [
            s.geom for s in (pen.side_a, pen.side_b) if not s.geom.is_degenerate
        ]
        sys_ = PathSystem(self.region, barriers=barriers)
        q0 = pen.coast.start
        q1 = pen.coast.end
        chord = sys_.shortest_path(q0, q1)
        wall = GuardedWall(chord, sys_, "nearest", lion=self.idle_lion).attach_rules()
        approach = self.plain.shortest_path(lions[self.idle_lion], chord.start)
        self.transit = _Transit(wall=wall, approach=approach)
        self.transit_lion, self.idle_lion = self.idle_lion, None
        emit("halving", {"coast_len": pen.coast.length, "chord_len": chord.length})

    def _finish_halving(self, man: Point, emit) -> None:
        pen = self.pen
        chord_wall = self.transit.wall
        chord_wall.live = True
        self.transit = self.transit_lion = None
        tri = _ring_points(
            pen.side_a.geom.vertices,
            chord_wall.path.vertices,
            tuple(reversed(pen.side_b.geom.vertices)),
        )
        if _point_in_ring(man, tri):
            self._begin_endgame(
                man, [pen.side_a.guard, pen.side_b.guard, chord_wall], emit
            )
            return
        # coastal pocket: both apex-side guards are free; halve the coast
        mid = pen.coast.length / 2.0
        self.halvings.append(pen.coast.length)
        q2 = pen.coast.point_at(mid)
        sys0 = PathSystem(self.region, barriers=[chord_wall.path])
        half = sys0.shortest_path(chord_wall.path.start, q2)
        freed_a = pen.side_a.guard.lion
        freed_b = pen.side_b.guard.lion
        wall3 = GuardedWall(half, sys0, "nearest", lion=freed_a).attach_rules()
        approach = self.plain.shortest_path(self._positions[freed_a], half.start)
        self.transit = _Transit(wall=wall3, approach=approach)
        self.transit_lion = freed_a
        self._pending_halving = (chord_wall, mid, freed_b)
        self.phase = "halving_split"
        emit("halved", {"new_coast": mid, "count": len(self.halvings)})

    def _finish_halving_split(self, man: Point, emit) -> None:
        pen = self.pen
        chord_wall, mid, freed_b = self._pending_halving
        wall3 = self.transit.wall
        wall3.live = True
        self.transit = self.transit_lion = None
        self._pending_halving = None
        near_ring = _ring_points(
            wall3.path.vertices,
            tuple(reversed(pen.coast.sub_path(0.0, mid).vertices)),
        )
        q0 = chord_wall.path.start
        if _point_in_ring(man, near_ring):
            stand = GuardedWall(PolyPath([q0]), self.plain, "stand", lion=freed_b)
            self.pen = PeninsulaState(
                apex=q0,
                side_a=PenSide(PolyPath([q0]), stand),
                side_b=PenSide(_oriented(wall3.path, q0), wall3),
                coast=pen.coast.sub_path(0.0, mid),
            )
            approach = self.plain.shortest_path(self._positions[freed_b], q0)
            self.transit = _Transit(wall=stand, approach=approach)
            self.transit_lion = freed_b
            self.idle_lion = chord_wall.lion
            self.phase = "stand_transit"
        else:
            self.pen = PeninsulaState(
                apex=q0,
                side_a=PenSide(_oriented(wall3.path, q0), wall3),
                side_b=PenSide(_oriented(chord_wall.path, q0), chord_wall),
                coast=pen.coast.sub_path(mid, pen.coast.length),
            )
            self.idle_lion = freed_b
            self.phase = "halving"

    # -- phase: endgame -----------------------------------------------------------

    def _begin_endgame(self, man: Point, walls: list[GuardedWall], emit) -> None:
        self.endgame_lions = [w.lion for w in walls]
        self.endgame = EndgameDriver(man, [self._positions[w.lion] for w in walls])
        self.pen = None
        self.phase = "endgame"
        emit("pseudo_triangle", {"inradius": self.endgame.inradius()})

    # -- per-step drive ---------------------------------------------------------------

    def waypoints(self, view: GameView) -> list[Point]:
        if view.step == self._cached_step:
            return self._cached
        man = view.man
        # guards aim where the man will stand at the end of this step; the
        # lions may know his strategy, and the engine enforces commitments,
        # so interception at a wall contact is exact
        man_next = man
        if view.man_waypoint is not None:
            man_next = self.space.move_toward(
                man, view.man_waypoint, self.man_speed * view.dt
            )
        lions = list(view.lions)
        self._positions = lions
        budget = view.dt  # unit lion speed

        if self.phase == "init":
            if self._init_targets is None:
                self._setup_initial_strip(lions)
            t0, t1 = self._init_targets
            if dist(lions[0], t0) <= 1e-9 and dist(lions[1], t1) <= 1e-9:
                self.phase = "cut"
                self.strip.wall_a.live = True
                self.strip.wall_b.live = True
            else:
                wps = [
                    self.space.move_toward(lions[0], t0, budget),
                    self.space.move_toward(lions[1], t1, budget),
                    lions[2],
                ]
                self._cached_step, self._cached = view.step, wps
                return wps

        if self.phase == "cut" and self.transit is None:
            self._begin_cut(lions, man, view.emit)
        if self.phase == "halving" and self.transit is None:
            self._begin_halving(lions, view.emit)

        wps: list[Point | None] = [None, None, None]

        if self.phase == "endgame":
            targets = self.endgame.step_targets(
                man_next, [lions[j] for j in self.endgame_lions], view.dt
            )
            if self.endgame.stall_steps * view.dt > 10.0:
                raise ProgressStall("no line guard advanced for 10 time units")
            for j, tgt in zip(self.endgame_lions, targets):
                wps[j] = self._clamp_inside(lions[j], tgt)
            out = [wps[j] if wps[j] is not None else lions[j] for j in range(3)]
            self._cached_step, self._cached = view.step, out
            return out

        if self.transit is not None:
            j = self.transit_lion
            wps[j] = self.transit.advance(budget, man_next)
            if self.transit.done(man_next):
                if self.phase == "cut":
                    self._finish_cut(man, view.emit)
                elif self.phase == "to_peninsula":
                    self._finish_peninsula_transition(man, view.emit)
                elif self.phase == "halving":
                    self._finish_halving(man, view.emit)
                elif self.phase == "halving_split":
                    self._finish_halving_split(man, view.emit)
                elif self.phase == "stand_transit":
                    self.transit.wall.live = True
                    self.transit = self.transit_lion = None
                    self.phase = "halving"

        guards: list[GuardedWall] = []
        if self.strip is not None:
            guards = [self.strip.wall_a, self.strip.wall_b]
        elif self.pen is not None:
            guards = [self.pen.side_a.guard, self.pen.side_b.guard]
        for wall in guards:
            j = wall.lion
            if wps[j] is not None or not wall.live:
                continue
            if wall.mode == "stand" or wall.path.is_degenerate:
                wps[j] = wall.path.start
                continue
            s_target = wall.target_arclength(man_next)
            ds = s_target - wall.arclength
            if abs(ds) > budget:
                ds = math.copysign(budget, ds)
            wall.arclength += ds
            wps[j] = wall.path.point_at(wall.arclength)

        out = [wps[j] if wps[j] is not None else lions[j] for j in range(3)]
        self._cached_step, self._cached = view.step, out
        return out


class TeamLion:
    def __init__(self, controller: LionTeamController, index: int):
        self.controller = controller
        self.index = index

    def commit(self, view: GameView) -> Commitment:
        return Commitment(view.step + 1, self.controller.waypoints(view)[self.index])


def crossing_capture_hook(controller: LionTeamController):
    """Capture when the man's step crosses a live guarded wall.  The guard
    stands at the wall point matched to the man's position, which equals
    the man's own point the moment he touches the wall, so contact at the
    crossing is certain; the game snaps both to the crossing point."""

    def hook(prev_man: Point, man: Point, step: int):
        for wall in controller.live_walls():
            for u, v in wall.path.segments():
                if segments_properly_cross(prev_man, man, u, v, 1e-12):
                    ts = segment_intersection_params(prev_man, man, u, v)
                    frac = ts[0] if ts else 1.0
                    return {
                        "lion": wall.lion,
                        "frac": max(frac, 1e-9),
                        "point": lerp(prev_man, man, frac),
                    }
            if wall.path.distance_to(man) <= controller.capture_radius:
                return {"lion": wall.lion, "frac": 1.0, "point": man}
        if controller.endgame is not None:
            for j, line in zip(controller.endgame_lions, controller.endgame.lines):
                g0 = line.gap(prev_man)
                g1 = line.gap(man)
                if g0 > 0.0 >= g1:
                    frac = g0 / (g0 - g1) if g0 != g1 else 1.0
                    return {
                        "lion": j,
                        "frac": max(frac, 1e-9),
                        "point": lerp(prev_man, man, frac),
                        "snap": False,
                    }
        return None

    return hook


def run_three_lions(
    region: FeasibleRegion,
    man_strategy,
    horizon: float,
    man0: Point,
    lions0: Sequence[Point] | None = None,
    dt: float = 1.0 / 64.0,
    capture_radius: float | None = None,
) -> tuple[GameOutcome, LionTeamController]:
    """Full three-lion hunt; the expected verdict is capture."""
    space = RegionSpace(region)
    if capture_radius is None:
        capture_radius = 1e-6 * region.diameter
    if lions0 is None:
        ext = region.exterior
        lions0 = [ext[0], ext[len(ext) // 2], ext[0]]
    controller = LionTeamController(region, space, capture_radius)
    cfg = GameConfig(
        space=space,
        man0=man0,
        lions0=list(lions0),
        man_speed=1.0,
        lion_speeds=[1.0, 1.0, 1.0],
        dt=dt,
        capture_radius=capture_radius,
    )
    outcome = run_game(
        cfg,
        man_strategy,
        [TeamLion(controller, j) for j in range(3)],
        horizon,
        capture_hooks=[crossing_capture_hook(controller)],
    )
    return outcome, controller
