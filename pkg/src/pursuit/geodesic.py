"""Geodesics in polygonal regions with lakes, with homotopy side constraints.

Shortest paths run on a visibility graph over region vertices.  A
PathSystem can additionally carry

* barriers -- one-sided walls (guarded paths): segments may touch or run
  along them but never cross, so queries stay on one side of the wall;
* slits   -- zero-width fences hung from a lake vertex to some other
  structure; forbidding slit crossings pins which side of that lake every
  path must use;
* pinches -- single points where a lake touches a wall: the only passage
  "between" them is through the point itself, so it is simply excluded.

Side-constrained shortest paths reduce to plain shortest paths in the
slitted system, which is how the lake-separating walls of the three-lion
strategy and their guard motions are computed.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .geom import (
    EPS,
    Point,
    dist,
    lerp,
    orient,
    point_segment_distance,
    project_to_segment,
    segment_intersection_params,
    segments_properly_cross,
    sub,
    norm,
)
from .polyline import PolyPath
from .region import FeasibleRegion


class NoPathError(RuntimeError):
    pass


class SlitError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# side assignments and slit construction


LEFT = "left"
RIGHT = "right"
FREE = "free"


@dataclass(frozen=True)
class SideAssignment:
    """Per-lake side labels for a directed path query.

    'left' means the finished path keeps that lake on its left when walked
    from a to b; 'free' lakes are unconstrained.
    """

    labels: tuple[str, ...]

    @classmethod
    def all_free(cls, region: FeasibleRegion) -> "SideAssignment":
        return cls(tuple(FREE for _ in region.lakes))

    @classmethod
    def of(cls, region: FeasibleRegion, **by_index: str) -> "SideAssignment":
        labels = [FREE] * len(region.lakes)
        for key, val in by_index.items():
            labels[int(key.removeprefix("lake"))] = val
        return cls(tuple(labels))

    def flipped(self) -> "SideAssignment":
        flip = {LEFT: RIGHT, RIGHT: LEFT, FREE: FREE}
        return SideAssignment(tuple(flip[s] for s in self.labels))

    @property
    def constrained(self) -> list[int]:
        return [k for k, s in enumerate(self.labels) if s != FREE]


def _vertical_slit(
    region: FeasibleRegion, lake_idx: int, upward: bool, chained: set[int]
) -> tuple[Point, Point] | None:
    """Fence from a vertex of the lake straight up (or down) to the first
    boundary hit.  The hit must land on the exterior or on a lake whose own
    fence is already in place (so fences chain to the blocked side)."""
    lake = region.lakes[lake_idx]
    span = region.bbox[3] - region.bbox[1] + 1.0
    order = sorted(range(len(lake)), key=lambda i: -lake[i][1] if upward else lake[i][1])
    for vi in order:
        vx, vy = lake[vi]
        tip = (vx, vy + span) if upward else (vx, vy - span)
        best_t = None
        best_ring = None
        for ring_idx, ring in enumerate([region.exterior, *region.lakes]):
            if ring_idx - 1 == lake_idx:
                continue
            n = len(ring)
            for i in range(n):
                for t in segment_intersection_params((vx, vy), tip, ring[i], ring[(i + 1) % n]):
                    if t > EPS and (best_t is None or t < best_t):
                        best_t = t
                        best_ring = ring_idx
        if best_t is not None and (best_ring == 0 or best_ring - 1 in chained):
            return (vx, vy), lerp((vx, vy), tip, best_t)
    return None


def slits_for_assignment(
    region: FeasibleRegion, a: Point, b: Point, sides: SideAssignment
) -> list[tuple[Point, Point]]:
    """Slit walls realizing a side assignment for a path from a to b.

    Interpreted for the direction of increasing x (ties by y); queries
    walked the other way flip every label first.
    """
    if (b[0], b[1]) < (a[0], a[1]):
        sides = sides.flipped()
    slits = []
    for upward in (True, False):
        pending = [
            k for k in sides.constrained if (sides.labels[k] == LEFT) == upward
        ]
        chained: set[int] = set()
        while pending:
            placed = False
            for k in list(pending):
                slit = _vertical_slit(region, k, upward, chained)
                if slit is not None:
                    slits.append(slit)
                    chained.add(k)
                    pending.remove(k)
                    placed = True
            if not placed:
                raise SlitError(
                    f"cannot fence lakes {pending} "
                    f"{'upward' if upward else 'downward'}: every vertical ray "
                    "hits an unconstrained or oppositely-constrained lake"
                )
    return slits


# ---------------------------------------------------------------------------
# the path system


def _crosses_wedge(s: Point, t: Point, u: Point, v: Point, w: Point, eps: float) -> bool:
    """Does segment st pass through chain vertex v from one local side of
    the chain u-v-w to the other?  Grazing (an endpoint on the chain)
    does not count."""
    def side(p: Point) -> int:
        o1 = orient(u, v, p)
        o2 = orient(v, w, p)
        s1 = norm(sub(v, u)) or 1.0
        s2 = norm(sub(w, v)) or 1.0
        o1 /= s1
        o2 /= s2
        if orient(u, v, w) >= 0.0:
            if o1 > eps and o2 > eps:
                return 1
            if o1 < -eps or o2 < -eps:
                return -1
        else:
            if o1 < -eps and o2 < -eps:
                return -1
            if o1 > eps or o2 > eps:
                return 1
        return 0

    return side(s) * side(t) < 0


class PathSystem:
    """Visibility-graph geodesics in a region, restricted by walls/slits."""

    def __init__(
        self,
        region: FeasibleRegion,
        barriers: Sequence[PolyPath] = (),
        slits: Sequence[tuple[Point, Point]] = (),
        pinches: Sequence[Point] = (),
        extra_nodes: Sequence[Point] = (),
        eps: float = EPS,
    ):
        self.region = region
        self.barriers = list(barriers)
        self.slits = [(tuple(a), tuple(b)) for a, b in slits]
        # A path hugging a constrained lake through either slit endpoint lies
        # in the blocked homotopy class, so both endpoints are impassable.
        self.pinches = (
            [tuple(p) for p in pinches]
            + [s[0] for s in self.slits]
            + [s[1] for s in self.slits]
        )
        # Where a wall meets the region boundary the junction is sealed:
        # never passable mid-segment, dropped as a graph node, but still a
        # legal query endpoint (guards measure from wall ends).
        self.seals: list[Point] = []
        for wall in self.barriers:
            for v in (wall.start, wall.end):
                if region.boundary_distance(v) <= 10.0 * eps:
                    self.seals.append(v)
        self.eps = eps

        nodes: list[Point] = []
        seen: set[tuple[float, float]] = set()

        def push(p: Point) -> None:
            key = (round(p[0], 9), round(p[1], 9))
            if key in seen:
                return
            if any(dist(p, pin) <= eps for pin in self.pinches):
                return
            if any(dist(p, s) <= eps for s in self.seals):
                return
            seen.add(key)
            nodes.append((float(p[0]), float(p[1])))

        for p in region.all_vertices:
            push(p)
        for wall in self.barriers:
            for p in wall.vertices:
                push(p)
        for p in extra_nodes:
            push(p)
        self.nodes: list[Point] = nodes
        self._nodes_arr = np.array(nodes) if nodes else np.zeros((0, 2))

        self._slit_arr = (
            np.array([[s[0][0], s[0][1], s[1][0], s[1][1]] for s in self.slits])
            if self.slits
            else np.zeros((0, 4))
        )
        bar_segs = []
        for wall in self.barriers:
            bar_segs.extend([(p[0], p[1], q[0], q[1]) for p, q in wall.segments()])
        self._barrier_arr = np.array(bar_segs) if bar_segs else np.zeros((0, 4))

        n = len(nodes)
        W = np.full((n, n), np.inf)
        np.fill_diagonal(W, 0.0)
        for i in range(n):
            for j in range(i + 1, n):
                if self.segment_allowed(nodes[i], nodes[j]):
                    d = dist(nodes[i], nodes[j])
                    W[i, j] = d
                    W[j, i] = d
        self._W = W
        D = W.copy()
        for k in range(n):
            np.minimum(D, D[:, k, None] + D[None, k, :], out=D)
        self._D = D

    # -- admissibility -------------------------------------------------------

    def _crosses_slit(self, a: Point, b: Point) -> bool:
        return any(
            segments_properly_cross(a, b, anchor, top, self.eps)
            for anchor, top in self.slits
        )

    def _crosses_barrier(self, a: Point, b: Point) -> bool:
        for wall in self.barriers:
            vs = wall.vertices
            for i in range(len(vs) - 1):
                if segments_properly_cross(a, b, vs[i], vs[i + 1], self.eps):
                    return True
            for i in range(1, len(vs) - 1):
                v = vs[i]
                if dist(v, a) <= self.eps or dist(v, b) <= self.eps:
                    continue
                if point_segment_distance(v, a, b) <= self.eps:
                    if _crosses_wedge(a, b, vs[i - 1], v, vs[i + 1], self.eps):
                        return True
        return False

    def _through_pinch(self, a: Point, b: Point) -> bool:
        for p in self.pinches:
            if dist(p, a) <= self.eps or dist(p, b) <= self.eps:
                return True
            if point_segment_distance(p, a, b) <= self.eps:
                return True
        return False

    def _through_seal(self, a: Point, b: Point) -> bool:
        for s in self.seals:
            if dist(s, a) <= self.eps or dist(s, b) <= self.eps:
                continue  # seals remain legal query endpoints
            if point_segment_distance(s, a, b) <= self.eps:
                return True
        return False

    def segment_allowed(self, a: Point, b: Point) -> bool:
        """Careful scalar admissibility: inside the region, not crossing any
        barrier or slit, not passing through a pinch or sealed junction."""
        if self._through_pinch(a, b) or self._through_seal(a, b):
            return False
        if self._crosses_slit(a, b) or self._crosses_barrier(a, b):
            return False
        return self.region.segment_inside(a, b, self.eps)

    def fast_vis_row(self, p: Point) -> np.ndarray:
        """Vectorized admissibility of segments from a generic interior
        point p to every static node."""
        if len(self.nodes) == 0:
            return np.zeros(0, dtype=bool)
        ok = self.region.segments_inside_fast(p, self._nodes_arr, self.eps)
        for arr in (self._slit_arr, self._barrier_arr):
            if len(arr) == 0 or not ok.any():
                continue
            px, py = p
            tx = self._nodes_arr[:, 0][:, None]
            ty = self._nodes_arr[:, 1][:, None]
            x1 = arr[None, :, 0]
            y1 = arr[None, :, 1]
            x2 = arr[None, :, 2]
            y2 = arr[None, :, 3]
            sl = np.hypot(tx - px, ty - py)
            sl = np.where(sl == 0.0, 1.0, sl)
            el = np.hypot(x2 - x1, y2 - y1)
            o1 = ((tx - px) * (y1 - py) - (ty - py) * (x1 - px)) / sl
            o2 = ((tx - px) * (y2 - py) - (ty - py) * (x2 - px)) / sl
            o3 = ((x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)) / el
            o4 = ((x2 - x1) * (ty - y1) - (y2 - y1) * (tx - x1)) / el
            e = self.eps
            cross_ = (((o1 > e) & (o2 < -e)) | ((o1 < -e) & (o2 > e))) & (
                ((o3 > e) & (o4 < -e)) | ((o3 < -e) & (o4 > e))
            )
            ok &= ~cross_.any(axis=1)
        blockers = list(self.pinches) + [
            s for s in self.seals if dist(s, p) > self.eps
        ]
        if blockers and ok.any():
            for pin in blockers:
                px0, py0 = pin
                dxs = self._nodes_arr[:, 0] - p[0]
                dys = self._nodes_arr[:, 1] - p[1]
                denom = dxs * dxs + dys * dys
                denom = np.where(denom == 0.0, 1.0, denom)
                t = np.clip(((px0 - p[0]) * dxs + (py0 - p[1]) * dys) / denom, 0.0, 1.0)
                d2 = (p[0] + t * dxs - px0) ** 2 + (p[1] + t * dys - py0) ** 2
                ok &= d2 > self.eps * self.eps
        return ok

    # -- distance queries ----------------------------------------------------

    def dist_field(self, p: Point, fast: bool = False) -> np.ndarray:
        """Geodesic distance from p to every static node."""
        n = len(self.nodes)
        if n == 0:
            return np.zeros(0)
        if fast:
            vis = self.fast_vis_row(p)
        else:
            vis = np.array([self.segment_allowed(p, q) for q in self.nodes])
        direct = np.hypot(self._nodes_arr[:, 0] - p[0], self._nodes_arr[:, 1] - p[1])
        start = np.where(vis, direct, np.inf)
        return np.min(start[:, None] + self._D, axis=0)

    def field_to_point(self, field: np.ndarray, p: Point, target: Point, fast: bool = False) -> float:
        """Distance realized through the node field, or direct if visible."""
        if fast:
            vis = self.fast_vis_row(target)
        else:
            vis = np.array([self.segment_allowed(target, q) for q in self.nodes])
        direct = np.hypot(self._nodes_arr[:, 0] - target[0], self._nodes_arr[:, 1] - target[1])
        best = np.min(np.where(vis, direct + field, np.inf)) if len(field) else np.inf
        if self.segment_allowed(p, target):
            best = min(best, dist(p, target))
        return float(best)

    def distance(self, a: Point, b: Point, fast: bool = False) -> float:
        d = self.field_to_point(self.dist_field(a, fast=fast), a, b, fast=fast)
        if not math.isfinite(d):
            raise NoPathError(f"no admissible path from {a} to {b}")
        return d

    # -- full shortest path ---------------------------------------------------

    def shortest_path(self, a: Point, b: Point) -> PolyPath:
        if not self.region.contains(a, self.eps) or not self.region.contains(b, self.eps):
            raise NoPathError("query endpoint outside the region")
        if dist(a, b) <= self.eps:
            return PolyPath([a])
        pts = [a, b] + self.nodes
        n = len(pts)
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        if self.segment_allowed(a, b):
            adj[0].append((1, dist(a, b)))
            adj[1].append((0, dist(a, b)))
        for qi, q in enumerate((a, b)):
            for j, node in enumerate(self.nodes):
                if self.segment_allowed(q, node):
                    d = dist(q, node)
                    adj[qi].append((j + 2, d))
                    adj[j + 2].append((qi, d))
        finite = np.argwhere(np.isfinite(self._W) & (self._W > 0.0))
        for i, j in finite:
            adj[i + 2].append((j + 2, self._W[i, j]))

        distv = [math.inf] * n
        prev = [-1] * n
        distv[0] = 0.0
        heap = [(0.0, 0)]
        while heap:
            d, i = heapq.heappop(heap)
            if d > distv[i] + 1e-12:
                continue
            if i == 1:
                break
            for j, w in adj[i]:
                nd = d + w
                if nd < distv[j] - 1e-12:
                    distv[j] = nd
                    prev[j] = i
                    heapq.heappush(heap, (nd, j))
        if not math.isfinite(distv[1]):
            raise NoPathError(f"no admissible path from {a} to {b}")
        chain = [1]
        while chain[-1] != 0:
            chain.append(prev[chain[-1]])
        chain.reverse()
        return PolyPath([pts[i] for i in chain])


# ---------------------------------------------------------------------------
# public geodesic operations


def _plain_system(region: FeasibleRegion) -> PathSystem:
    sys_ = getattr(region, "_plain_path_system", None)
    if sys_ is None:
        sys_ = PathSystem(region)
        region._plain_path_system = sys_  # type: ignore[attr-defined]
    return sys_


def shortest_path(region: FeasibleRegion, a: Point, b: Point) -> PolyPath:
    """Geodesic between two region points (corners only at boundary
    vertices)."""
    return _plain_system(region).shortest_path(a, b)


def shortest_path_separating(
    region: FeasibleRegion, a: Point, b: Point, sides: SideAssignment
) -> PolyPath:
    """Shortest a-b path keeping each labeled lake on its assigned side."""
    if not sides.constrained:
        return shortest_path(region, a, b)
    slits = slits_for_assignment(region, a, b, sides)
    return PathSystem(region, slits=slits).shortest_path(a, b)


@dataclass
class GuardState:
    """A lion pinned to a wall: position given by arclength along it."""

    path: PolyPath
    lion_arclength: float

    @property
    def position(self) -> Point:
        return self.path.point_at(self.lion_arclength)


class RatioGuard:
    """Wall guard by the proportional rule.

    The lion stands at the point of the wall splitting its length in the
    same ratio as the man's position splits the shortest side-respecting
    path through him.  The target moves at most as fast as the man.
    """

    def __init__(self, wall: PolyPath, system: PathSystem):
        self.wall = wall
        self.system = system
        self._field_p = system.dist_field(wall.start)
        self._field_q = system.dist_field(wall.end)

    def target_arclength(self, man: Point, fast: bool = True) -> float:
        if self.wall.is_degenerate:
            return 0.0
        vis = (
            self.system.fast_vis_row(man)
            if fast
            else np.array([self.system.segment_allowed(man, q) for q in self.system.nodes])
        )
        direct = np.hypot(
            self.system._nodes_arr[:, 0] - man[0], self.system._nodes_arr[:, 1] - man[1]
        )
        through = np.where(vis, direct, np.inf)
        dp = float(np.min(through + self._field_p)) if len(through) else math.inf
        dq = float(np.min(through + self._field_q)) if len(through) else math.inf
        if self.system.segment_allowed(man, self.wall.start):
            dp = min(dp, dist(man, self.wall.start))
        if self.system.segment_allowed(man, self.wall.end):
            dq = min(dq, dist(man, self.wall.end))
        if not (math.isfinite(dp) and math.isfinite(dq)):
            raise NoPathError("man position unreachable in the guard's system")
        total = dp + dq
        if total <= 0.0:
            return 0.0
        return self.wall.length * dp / total


def guard_point_ratio(guard: GuardState, man: Point, system: PathSystem) -> GuardState:
    s = RatioGuard(guard.path, system).target_arclength(man, fast=False)
    return GuardState(guard.path, s)


class NearestGuard:
    """Wall guard standing at the geodesically closest wall point."""

    def __init__(self, wall: PolyPath, system: PathSystem):
        self.wall = wall
        self.system = system

    def target_arclength(self, man: Point, fast: bool = True) -> tuple[float, float]:
        """(arclength, distance); ties toward the smaller arclength."""
        wall = self.wall
        if wall.is_degenerate:
            return 0.0, self.system.distance(man, wall.start, fast=fast)
        best_s = None
        best_d = math.inf
        # direct (straight-line) feet
        for i, (u, v) in enumerate(wall.segments()):
            q, t = project_to_segment(man, u, v)
            d = dist(man, q)
            if d < best_d - EPS and self.system.segment_allowed(man, q):
                best_d = d
                best_s = wall.cum[i] + t * (wall.cum[i + 1] - wall.cum[i])
        # feet reached around corners
        field = self.system.dist_field(man, fast=fast)
        order = np.argsort(field)
        for idx in order:
            base = field[idx]
            if not math.isfinite(base) or base >= best_d:
                break
            node = self.system.nodes[idx]
            for i, (u, v) in enumerate(wall.segments()):
                q, t = project_to_segment(node, u, v)
                d = base + dist(node, q)
                if d < best_d - EPS and self.system.segment_allowed(node, q):
                    best_d = d
                    best_s = wall.cum[i] + t * (wall.cum[i + 1] - wall.cum[i])
        # wall vertices themselves
        for i, v in enumerate(wall.vertices):
            d = self.system.field_to_point(field, man, v, fast=fast)
            if d < best_d - EPS:
                best_d = d
                best_s = wall.cum[i]
        if best_s is None:
            raise NoPathError("no wall point reachable from the man")
        return float(best_s), float(best_d)


def guard_point_closest(path: PolyPath, region: FeasibleRegion, man: Point) -> float:
    """Arclength of the wall point geodesically closest to the man."""
    s, _ = NearestGuard(path, _plain_system(region)).target_arclength(man, fast=False)
    return s
