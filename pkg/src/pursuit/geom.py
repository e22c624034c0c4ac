"""Planar primitives shared by every game module.

Points are plain ``(x, y)`` tuples; all predicates use an absolute length
tolerance (default ``EPS``).  No exact arithmetic: every quantity the games
produce is bounded away from degeneracy by explicit margins, so a fixed
absolute tolerance is enough at the scales we simulate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

Point = tuple[float, float]

# Default absolute tolerance for geometric predicates.
EPS = 1e-9


class Circle(NamedTuple):
    center: Point
    radius: float


class Segment(NamedTuple):
    a: Point
    b: Point


# ---------------------------------------------------------------------------
# vector helpers


def add(a: Point, b: Point) -> Point:
    return (a[0] + b[0], a[1] + b[1])


def sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def scale(a: Point, s: float) -> Point:
    return (a[0] * s, a[1] * s)


def dot(a: Point, b: Point) -> float:
    return a[0] * b[0] + a[1] * b[1]


def cross(a: Point, b: Point) -> float:
    return a[0] * b[1] - a[1] * b[0]


def norm(a: Point) -> float:
    return math.hypot(a[0], a[1])


def dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def unit(a: Point) -> Point:
    n = norm(a)
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return (a[0] / n, a[1] / n)


def perp(a: Point) -> Point:
    """Counterclockwise perpendicular."""
    return (-a[1], a[0])


def lerp(a: Point, b: Point, t: float) -> Point:
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    a = math.fmod(a, 2.0 * math.pi)
    if a <= -math.pi:
        a += 2.0 * math.pi
    elif a > math.pi:
        a -= 2.0 * math.pi
    return a


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    ab = sub(b, a)
    denom = dot(ab, ab)
    if denom == 0.0:
        return dist(p, a)
    t = dot(sub(p, a), ab) / denom
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return dist(p, lerp(a, b, t))


def project_to_segment(p: Point, a: Point, b: Point) -> tuple[Point, float]:
    """Closest point of segment ab to p and its parameter t in [0, 1]."""
    ab = sub(b, a)
    denom = dot(ab, ab)
    if denom == 0.0:
        return a, 0.0
    t = dot(sub(p, a), ab) / denom
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return lerp(a, b, t), t


# ---------------------------------------------------------------------------
# circle-circle intersection


@dataclass(frozen=True)
class CircleHit:
    """Outcome of intersecting two circles.

    kind is one of 'two', 'tangent', 'disjoint', 'contained'.  For 'two',
    (p, q) are ordered so that the arc of the second circle running
    counterclockwise from p to q lies inside the first circle.  For
    'tangent' both points coincide.
    """

    kind: str
    p: Point | None = None
    q: Point | None = None

    @property
    def hit(self) -> bool:
        return self.kind in ("two", "tangent")


def circle_circle_intersection(c1: Circle, c2: Circle, eps: float = EPS) -> CircleHit:
    """Intersect two circles of positive radius.

    The ordering convention for two transversal hits: starting at p and
    walking counterclockwise along c2 to q, the traversed arc stays inside
    c1 (it contains the point of c2 nearest to c1's center).
    """
    if c1.radius <= 0.0 or c2.radius <= 0.0:
        raise ValueError("circle radii must be positive")
    d = dist(c1.center, c2.center)
    rsum = c1.radius + c2.radius
    rdiff = abs(c1.radius - c2.radius)
    if d > rsum + eps:
        return CircleHit("disjoint")
    if d < rdiff - eps:
        return CircleHit("contained")
    if d < eps and rdiff < eps:
        raise ValueError("coincident circles have no canonical intersection")
    u = unit(sub(c2.center, c1.center))
    a = (d * d + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * d)
    if abs(d - rsum) <= eps or abs(d - rdiff) <= eps:
        t = add(c1.center, scale(u, a))
        return CircleHit("tangent", t, t)
    h2 = c1.radius * c1.radius - a * a
    h = math.sqrt(max(h2, 0.0))
    base = add(c1.center, scale(u, a))
    off = scale(perp(u), h)
    # +off lies on the counterclockwise side of the center line: walking ccw
    # on c2 from it passes the point of c2 nearest c1, which is inside c1.
    return CircleHit("two", add(base, off), sub(base, off))


# ---------------------------------------------------------------------------
# escape witness


def escape_witness_exists(
    m: Point, b: Point, lion: Point, r: float, delta: float, eps: float = EPS
) -> bool:
    """Does a direction w certify that running from m to b outruns the lion?

    True iff some unit vector w satisfies <b-m, w> >= delta and
    <m-lion, w> >= r - delta.  Each constraint admits a closed angular
    interval of directions; the test intersects the two intervals.
    """
    req = ((sub(b, m), delta), (sub(m, lion), r - delta))
    centers = []
    half_widths = []
    for u, c in req:
        n = norm(u)
        if n + eps < c:
            return False
        if c <= -n:
            continue  # constraint holds for every direction
        ratio = c / n
        ratio = 1.0 if ratio > 1.0 else (-1.0 if ratio < -1.0 else ratio)
        centers.append(math.atan2(u[1], u[0]))
        half_widths.append(math.acos(ratio))
    if len(centers) < 2:
        return True
    gap = abs(wrap_angle(centers[0] - centers[1]))
    return gap <= half_widths[0] + half_widths[1] + eps


# ---------------------------------------------------------------------------
# inscribed equilateral triangle with neighbour labeling


def _cyclic_adjacent(order: list[str], x: str, y: str) -> bool:
    n = len(order)
    i = order.index(x)
    return order[(i - 1) % n] == y or order[(i + 1) % n] == y


def _labeling(input_angles: Sequence[float], corner_angles: Sequence[float]):
    """Permutation assigning corners to inputs so each input neighbours its
    primed corner in the cyclic order of all six points, or None."""
    tagged = [(a % (2 * math.pi), f"i{k}") for k, a in enumerate(input_angles)]
    perms = (
        (0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0),
    )
    for perm in perms:
        pts = list(tagged)
        for k, c in enumerate(perm):
            pts.append((corner_angles[c] % (2 * math.pi), f"c{k}"))
        pts.sort()
        order = [tag for _, tag in pts]
        if all(_cyclic_adjacent(order, f"i{k}", f"c{k}") for k in range(3)):
            return perm
    return None


def equilateral_on_circle(
    circle: Circle, a: Point, b: Point, c: Point, eps: float = 1e-6
) -> tuple[Point, Point, Point]:
    """Inscribe an equilateral triangle avoiding three marked circle points.

    Returns corners (a', b', c') disjoint from {a, b, c} and labeled so
    that in the circular order of all six points a neighbours a', b
    neighbours b' and c neighbours c'.  Among admissible rotations the one
    maximizing the smallest angular gap to the marked points is chosen,
    which makes the output deterministic.
    """
    pts = (a, b, c)
    for p in pts:
        if abs(dist(p, circle.center) - circle.radius) > eps:
            raise ValueError(f"point {p} is not on the circle")
    angles = [math.atan2(p[1] - circle.center[1], p[0] - circle.center[0]) for p in pts]

    third = 2.0 * math.pi / 3.0
    steps = 3600
    best = None  # (min_gap, -offset, corner_angles, perm)
    for i in range(steps):
        off = (i + 0.5) * third / steps
        corners = [off, off + third, off + 2 * third]
        min_gap = min(
            abs(wrap_angle(ca - ia)) for ca in corners for ia in angles
        )
        if min_gap <= 10.0 * eps:
            continue
        perm = _labeling(angles, corners)
        if perm is None:
            continue
        key = (min_gap, -off)
        if best is None or key > best[0]:
            best = (key, corners, perm)
    if best is None:
        raise ValueError("no admissible inscribed triangle found")
    _, corners, perm = best
    out = []
    for k in range(3):
        ang = corners[perm[k]]
        out.append(
            (
                circle.center[0] + circle.radius * math.cos(ang),
                circle.center[1] + circle.radius * math.sin(ang),
            )
        )
    return out[0], out[1], out[2]


# ---------------------------------------------------------------------------
# convex hull and membership


def convex_hull(points: Sequence[Point]) -> list[Point]:
    """Convex hull in counterclockwise order (monotone chain).

    Collinear boundary points are dropped.  Degenerate inputs yield hulls
    of one or two points.
    """
    if not points:
        raise ValueError("convex_hull needs at least one point")
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) == 1:
        return [pts[0]]
    if len(pts) == 2:
        return [pts[0], pts[1]]

    def chain(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and cross(sub(out[-1], out[-2]), sub(p, out[-2])) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 2:  # all input points collinear
        return [pts[0], pts[-1]]
    return hull


def point_in_hull(p: Point, hull: Sequence[Point], eps: float = EPS) -> bool:
    """Closed membership with slack toward 'inside'.

    Points within eps outside the hull still count as inside, which is the
    conservative direction for an evader checking whether he has escaped.
    """
    n = len(hull)
    if n == 1:
        return dist(p, hull[0]) <= eps
    if n == 2:
        return point_segment_distance(p, hull[0], hull[1]) <= eps
    for i in range(n):
        a_, b_ = hull[i], hull[(i + 1) % n]
        e = sub(b_, a_)
        le = norm(e)
        if le == 0.0:
            continue
        if cross(e, sub(p, a_)) / le < -eps:
            return False
    return True


def distance_to_hull(p: Point, hull: Sequence[Point], eps: float = EPS) -> float:
    """Euclidean distance from p to the hull; 0 for points inside."""
    if point_in_hull(p, hull, eps=0.0):
        return 0.0
    n = len(hull)
    if n == 1:
        return dist(p, hull[0])
    return min(
        point_segment_distance(p, hull[i], hull[(i + 1) % n]) for i in range(n)
    )


# ---------------------------------------------------------------------------
# segment predicates (shared by the region module and slit walls)


def orient(a: Point, b: Point, c: Point) -> float:
    """Twice the signed area of triangle abc (>0 when c is left of ab)."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def segments_properly_cross(a: Point, b: Point, c: Point, d: Point, eps: float = EPS) -> bool:
    """True when open segments ab and cd cross at a single interior point.

    Touching at endpoints or collinear overlap does not count.  The eps
    guard is scaled by segment length so the test means 'clears the other
    segment by more than eps'.
    """
    lab = dist(a, b)
    lcd = dist(c, d)
    if lab == 0.0 or lcd == 0.0:
        return False
    o1 = orient(a, b, c) / lab
    o2 = orient(a, b, d) / lab
    o3 = orient(c, d, a) / lcd
    o4 = orient(c, d, b) / lcd
    return (
        ((o1 > eps and o2 < -eps) or (o1 < -eps and o2 > eps))
        and ((o3 > eps and o4 < -eps) or (o3 < -eps and o4 > eps))
    )


def segment_intersection_params(
    a: Point, b: Point, c: Point, d: Point, eps: float = EPS
) -> list[float]:
    """Parameters t on ab (0..1) where ab meets closed segment cd.

    Proper crossings give one t; endpoint touches give their t; collinear
    overlap contributes both overlap endpoints.
    """
    r = sub(b, a)
    s = sub(d, c)
    denom = cross(r, s)
    lr = norm(r)
    if lr == 0.0:
        return []
    if abs(denom) > eps * lr * max(norm(s), 1.0):
        t = cross(sub(c, a), s) / denom
        u = cross(sub(c, a), r) / denom
        if -eps <= t <= 1.0 + eps and -eps <= u <= 1.0 + eps:
            return [min(max(t, 0.0), 1.0)]
        return []
    # parallel: collinear?
    if abs(cross(sub(c, a), r)) > eps * lr:
        return []
    rr = dot(r, r)
    t0 = dot(sub(c, a), r) / rr
    t1 = dot(sub(d, a), r) / rr
    lo, hi = min(t0, t1), max(t0, t1)
    lo = max(lo, 0.0)
    hi = min(hi, 1.0)
    if lo > hi + eps:
        return []
    return [lo, hi] if hi - lo > eps else [0.5 * (lo + hi)]
