"""Feasible regions: a simple-polygon exterior with disjoint polygonal lakes.

The region is a closed set; lake boundaries belong to it.  Predicates come
in two flavours: careful scalar ones used when building visibility graphs
(where segments run along boundaries and through vertices by construction),
and numpy-vectorized ones used per simulation step on generic interior
query points.
"""

from __future__ import annotations

import json
import math
from typing import Iterable, Sequence

import numpy as np

from .geom import (
    EPS,
    Point,
    dist,
    point_segment_distance,
    segment_intersection_params,
    segments_properly_cross,
)


class RegionError(ValueError):
    """Region invariant violation; `invariant` names the broken rule."""

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


def signed_area(ring: Sequence[Point]) -> float:
    total = 0.0
    n = len(ring)
    for i in range(n):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return 0.5 * total


def _ring_edges(ring: Sequence[Point]) -> list[tuple[Point, Point]]:
    n = len(ring)
    return [(ring[i], ring[(i + 1) % n]) for i in range(n)]


def _ring_is_simple(ring: Sequence[Point]) -> bool:
    n = len(ring)
    if n < 3:
        return False
    for i in range(n):
        if dist(ring[i], ring[(i + 1) % n]) <= EPS:
            return False
    edges = _ring_edges(ring)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = edges[i]
            c, d = edges[j]
            if j == i + 1 or (i == 0 and j == n - 1):
                continue  # adjacent edges share exactly one endpoint
            if segments_properly_cross(a, b, c, d):
                return False
            # non-adjacent edges may not touch at all
            hits = segment_intersection_params(a, b, c, d)
            if hits:
                return False
    return True


def _point_strictly_inside_ring(p: Point, ring: Sequence[Point]) -> bool:
    px, py = p
    inside = False
    n = len(ring)
    for i in range(n):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % n]
        if (y1 > py) != (y2 > py):
            xint = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if px < xint:
                inside = not inside
    return inside


class FeasibleRegion:
    """Exterior simple polygon (ccw) with pairwise-disjoint lakes (cw)."""

    def __init__(self, exterior: Sequence[Point], lakes: Sequence[Sequence[Point]] = ()):
        self.exterior: tuple[Point, ...] = tuple((float(x), float(y)) for x, y in exterior)
        self.lakes: tuple[tuple[Point, ...], ...] = tuple(
            tuple((float(x), float(y)) for x, y in lake) for lake in lakes
        )
        self._validate()
        self._rings: list[tuple[Point, ...]] = [self.exterior, *self.lakes]
        self._build_arrays()

    # -- validation ---------------------------------------------------------

    def _validate(self) -> None:
        if len(self.exterior) < 3:
            raise RegionError("exterior-simple", "exterior needs at least 3 vertices")
        if not _ring_is_simple(self.exterior):
            raise RegionError("exterior-simple", "exterior polygon is not simple")
        if signed_area(self.exterior) <= 0.0:
            raise RegionError("exterior-ccw", "exterior must be counterclockwise")
        for k, lake in enumerate(self.lakes):
            if len(lake) < 3 or not _ring_is_simple(lake):
                raise RegionError("lake-simple", f"lake {k} is not a simple polygon")
            if signed_area(lake) >= 0.0:
                raise RegionError("lake-cw", f"lake {k} must be clockwise")
            for v in lake:
                if not _point_strictly_inside_ring(v, self.exterior):
                    raise RegionError(
                        "lake-inside", f"lake {k} is not strictly inside the exterior"
                    )
        rings = [self.exterior, *self.lakes]
        for i in range(len(rings)):
            for j in range(i + 1, len(rings)):
                for a, b in _ring_edges(rings[i]):
                    for c, d in _ring_edges(rings[j]):
                        if segments_properly_cross(a, b, c, d) or segment_intersection_params(
                            a, b, c, d
                        ):
                            raise RegionError(
                                "boundaries-disjoint",
                                f"boundaries of rings {i} and {j} touch or cross",
                            )
        for i, lake in enumerate(self.lakes):
            probe = lake[0]
            for j, other in enumerate(self.lakes):
                if i != j and _point_strictly_inside_ring(probe, other):
                    raise RegionError(
                        "lakes-disjoint", f"lake {i} lies inside lake {j}"
                    )

    def _build_arrays(self) -> None:
        ax, ay, bx, by = [], [], [], []
        self._ring_slices: list[slice] = []
        pos = 0
        for ring in self._rings:
            n = len(ring)
            for i in range(n):
                x1, y1 = ring[i]
                x2, y2 = ring[(i + 1) % n]
                ax.append(x1)
                ay.append(y1)
                bx.append(x2)
                by.append(y2)
            self._ring_slices.append(slice(pos, pos + n))
            pos += n
        self._ax = np.array(ax)
        self._ay = np.array(ay)
        self._bx = np.array(bx)
        self._by = np.array(by)
        xs = [p[0] for p in self.exterior]
        ys = [p[1] for p in self.exterior]
        self.bbox = (min(xs), min(ys), max(xs), max(ys))
        self.diameter = math.hypot(self.bbox[2] - self.bbox[0], self.bbox[3] - self.bbox[1])

    # -- vertices -----------------------------------------------------------

    @property
    def all_vertices(self) -> list[Point]:
        out = list(self.exterior)
        for lake in self.lakes:
            out.extend(lake)
        return out

    def lake_interior_point(self, k: int) -> Point:
        """A point strictly inside lake k (for side-of-path tests)."""
        lake = self.lakes[k]
        cx = sum(p[0] for p in lake) / len(lake)
        cy = sum(p[1] for p in lake) / len(lake)
        if _point_strictly_inside_ring((cx, cy), lake):
            return (cx, cy)
        n = len(lake)
        for i in range(n):
            for j in range(i + 2, n):
                mx = 0.5 * (lake[i][0] + lake[j][0])
                my = 0.5 * (lake[i][1] + lake[j][1])
                if _point_strictly_inside_ring((mx, my), lake):
                    return (mx, my)
        raise RegionError("lake-simple", f"cannot find an interior point of lake {k}")

    # -- membership ---------------------------------------------------------

    def boundary_distance(self, p: Point) -> float:
        px, py = p
        dx = self._bx - self._ax
        dy = self._by - self._ay
        denom = dx * dx + dy * dy
        t = np.clip(((px - self._ax) * dx + (py - self._ay) * dy) / denom, 0.0, 1.0)
        qx = self._ax + t * dx
        qy = self._ay + t * dy
        return float(np.sqrt(np.min((px - qx) ** 2 + (py - qy) ** 2)))

    def contains(self, p: Point, eps: float = EPS) -> bool:
        if self.boundary_distance(p) <= eps:
            return True
        if not _point_strictly_inside_ring(p, self.exterior):
            return False
        return not any(_point_strictly_inside_ring(p, lake) for lake in self.lakes)

    def points_inside(self, pts: np.ndarray, eps: float = EPS) -> np.ndarray:
        """Vectorized closed membership for an (N, 2) array of points."""
        pts = np.asarray(pts, dtype=float)
        px = pts[:, 0][:, None]
        py = pts[:, 1][:, None]
        y1 = self._ay[None, :]
        y2 = self._by[None, :]
        x1 = self._ax[None, :]
        x2 = self._bx[None, :]
        cond = (y1 > py) != (y2 > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
        crossings = cond & (px < xint)
        inside = np.zeros(len(pts), dtype=bool)
        ext = crossings[:, self._ring_slices[0]].sum(axis=1) % 2 == 1
        in_lake = np.zeros(len(pts), dtype=bool)
        for sl in self._ring_slices[1:]:
            in_lake |= crossings[:, sl].sum(axis=1) % 2 == 1
        inside = ext & ~in_lake
        if eps > 0.0:
            # points on (or within eps of) the boundary count as inside
            dx = x2 - x1
            dy = y2 - y1
            denom = dx * dx + dy * dy
            t = np.clip(((px - x1) * dx + (py - y1) * dy) / denom, 0.0, 1.0)
            qx = x1 + t * dx
            qy = y1 + t * dy
            d2 = (px - qx) ** 2 + (py - qy) ** 2
            inside |= d2.min(axis=1) <= eps * eps
        return inside

    # -- segment predicates --------------------------------------------------

    def segment_inside(self, a: Point, b: Point, eps: float = EPS) -> bool:
        """Careful test: the closed segment ab stays inside the region.

        Touching and running along the boundary is allowed.  Used at
        construction time where segments legitimately pass through polygon
        vertices; O(edges) per call.
        """
        if not (self.contains(a, eps) and self.contains(b, eps)):
            return False
        if dist(a, b) <= eps:
            return True
        ts = {0.0, 1.0}
        n_edges = len(self._ax)
        for i in range(n_edges):
            c = (self._ax[i], self._ay[i])
            d = (self._bx[i], self._by[i])
            if segments_properly_cross(a, b, c, d, eps):
                return False
            for t in segment_intersection_params(a, b, c, d, eps):
                ts.add(min(max(t, 0.0), 1.0))
        svals = sorted(ts)
        for t0, t1 in zip(svals, svals[1:]):
            if t1 - t0 <= eps:
                continue
            tm = 0.5 * (t0 + t1)
            m = (a[0] + (b[0] - a[0]) * tm, a[1] + (b[1] - a[1]) * tm)
            if not self.contains(m, eps):
                return False
        return True

    def segments_inside_fast(self, p: Point, targets: np.ndarray, eps: float = EPS) -> np.ndarray:
        """Vectorized visibility of targets (N, 2) from a generic point p.

        Assumes p is not a boundary-contact point: checks proper crossings
        against every edge plus membership of three interior samples.
        Endpoint touches at the targets (polygon vertices) are tolerated.
        """
        targets = np.asarray(targets, dtype=float)
        n = len(targets)
        if n == 0:
            return np.zeros(0, dtype=bool)
        px, py = p
        tx = targets[:, 0][:, None]
        ty = targets[:, 1][:, None]
        x1 = self._ax[None, :]
        y1 = self._ay[None, :]
        x2 = self._bx[None, :]
        y2 = self._by[None, :]
        seg_len = np.hypot(tx - px, ty - py)
        seg_len = np.where(seg_len == 0.0, 1.0, seg_len)
        edge_len = np.hypot(x2 - x1, y2 - y1)
        o1 = ((tx - px) * (y1 - py) - (ty - py) * (x1 - px)) / seg_len
        o2 = ((tx - px) * (y2 - py) - (ty - py) * (x2 - px)) / seg_len
        o3 = ((x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)) / edge_len
        o4 = ((x2 - x1) * (ty - y1) - (y2 - y1) * (tx - x1)) / edge_len
        straddle1 = ((o1 > eps) & (o2 < -eps)) | ((o1 < -eps) & (o2 > eps))
        straddle2 = ((o3 > eps) & (o4 < -eps)) | ((o3 < -eps) & (o4 > eps))
        blocked = (straddle1 & straddle2).any(axis=1)
        ok = ~blocked
        if ok.any():
            fr = np.array([0.25, 0.5, 0.75])
            mids = np.empty((ok.sum() * 3, 2))
            sel = targets[ok]
            for k, f in enumerate(fr):
                mids[k::3, 0] = px + (sel[:, 0] - px) * f
                mids[k::3, 1] = py + (sel[:, 1] - py) * f
            mid_ok = self.points_inside(mids, eps).reshape(-1, 3).all(axis=1)
            res = np.zeros(n, dtype=bool)
            res[np.flatnonzero(ok)] = mid_ok
            return res
        return ok

    # -- I/O ------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "v": 1,
            "exterior": [list(p) for p in self.exterior],
            "lakes": [[list(p) for p in lake] for lake in self.lakes],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FeasibleRegion":
        if "exterior" not in obj:
            raise RegionError("schema", "region object needs an 'exterior' ring")
        return cls(obj["exterior"], obj.get("lakes", ()))

    @classmethod
    def load(cls, path: str) -> "FeasibleRegion":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def square_region(side: float = 1.0, lakes: Iterable[Sequence[Point]] = ()) -> FeasibleRegion:
    ext = [(0.0, 0.0), (side, 0.0), (side, side), (0.0, side)]
    return FeasibleRegion(ext, list(lakes))


def rect_lake(x0: float, y0: float, x1: float, y1: float) -> list[Point]:
    """Axis-aligned rectangular lake in clockwise order."""
    return [(x0, y0), (x0, y1), (x1, y1), (x1, y0)]
