"""Arclength-parameterized polylines.

PolyPath carries geodesics, guard walls, coast arcs and recorded agent
trajectories.  A single-point path is the legal degenerate case (a guard
standing on a point).
"""

from __future__ import annotations

from bisect import bisect_right
from typing import Iterable, Sequence

from .geom import EPS, Point, dist, lerp, point_segment_distance, project_to_segment


class PolyPath:
    __slots__ = ("vertices", "cum")

    def __init__(self, vertices: Iterable[Point]):
        vs = [(float(x), float(y)) for x, y in vertices]
        if not vs:
            raise ValueError("a path needs at least one vertex")
        pts: list[Point] = [vs[0]]
        for p in vs[1:]:
            if dist(p, pts[-1]) > 0.0:
                pts.append(p)
        self.vertices: tuple[Point, ...] = tuple(pts)
        cum = [0.0]
        for i in range(1, len(pts)):
            cum.append(cum[-1] + dist(pts[i - 1], pts[i]))
        self.cum: tuple[float, ...] = tuple(cum)

    # -- basic queries ------------------------------------------------------

    @property
    def length(self) -> float:
        return self.cum[-1]

    @property
    def start(self) -> Point:
        return self.vertices[0]

    @property
    def end(self) -> Point:
        return self.vertices[-1]

    @property
    def is_degenerate(self) -> bool:
        return len(self.vertices) == 1

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"PolyPath({len(self.vertices)} pts, len={self.length:.6g})"

    def point_at(self, s: float, eps: float = 1e-7) -> Point:
        """Point at arclength s from the start."""
        if s < -eps or s > self.length + eps:
            raise ValueError(f"arclength {s} outside [0, {self.length}]")
        s = min(max(s, 0.0), self.length)
        if self.is_degenerate:
            return self.vertices[0]
        i = bisect_right(self.cum, s) - 1
        if i >= len(self.vertices) - 1:
            return self.vertices[-1]
        seg = self.cum[i + 1] - self.cum[i]
        t = (s - self.cum[i]) / seg
        return lerp(self.vertices[i], self.vertices[i + 1], t)

    def sub_path(self, s0: float, s1: float) -> "PolyPath":
        """Portion between arclengths s0 <= s1 (reversed when s0 > s1)."""
        if s0 > s1:
            return self.sub_path(s1, s0).reversed()
        s0 = min(max(s0, 0.0), self.length)
        s1 = min(max(s1, 0.0), self.length)
        pts = [self.point_at(s0)]
        for i, v in enumerate(self.vertices):
            if s0 < self.cum[i] < s1:
                pts.append(v)
        pts.append(self.point_at(s1))
        return PolyPath(pts)

    def reversed(self) -> "PolyPath":
        return PolyPath(tuple(reversed(self.vertices)))

    def concat(self, other: "PolyPath") -> "PolyPath":
        return PolyPath(self.vertices + other.vertices)

    # -- proximity ----------------------------------------------------------

    def distance_to(self, p: Point) -> float:
        if self.is_degenerate:
            return dist(p, self.vertices[0])
        return min(
            point_segment_distance(p, self.vertices[i], self.vertices[i + 1])
            for i in range(len(self.vertices) - 1)
        )

    def project(self, p: Point) -> tuple[float, float]:
        """(arclength of the Euclidean-closest path point, distance).

        Ties break toward the smaller arclength.
        """
        if self.is_degenerate:
            return 0.0, dist(p, self.vertices[0])
        best_s = 0.0
        best_d = float("inf")
        for i in range(len(self.vertices) - 1):
            q, t = project_to_segment(p, self.vertices[i], self.vertices[i + 1])
            d = dist(p, q)
            if d < best_d - EPS:
                best_d = d
                best_s = self.cum[i] + t * (self.cum[i + 1] - self.cum[i])
        return best_s, best_d

    def segments(self) -> list[tuple[Point, Point]]:
        return [
            (self.vertices[i], self.vertices[i + 1])
            for i in range(len(self.vertices) - 1)
        ]


def path_length(vertices: Sequence[Point]) -> float:
    return PolyPath(vertices).length
