"""Evasion against two lions on the metric dodecahedron.

The graph is the dodecahedron with every edge of length 4, built from
three concentric rings (outer pentagon, middle 10-cycle, inner pentagon),
which doubles as its canonical planar drawing.  The man lives on the
quarters: points at distance 1 from the nearest vertex.  From a quarter he
measures two directional distances to the lions: along his edge toward the
near vertex, and toward the far vertex, each over simple paths only.  The
safe-state predicate and the quarter-to-quarter rule keep the nearest lion
at distance at least 1 forever.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .engine import Commitment, GameView

EDGE_LEN = 4.0
QUARTER = 1.0


class InvariantViolated(RuntimeError):
    pass


@dataclass(frozen=True)
class GraphPoint:
    u: int
    v: int
    offset: float  # distance from u along edge (u, v); u < v

    def __post_init__(self):
        if self.u >= self.v:
            raise ValueError("edge endpoints must satisfy u < v")
        if not -1e-9 <= self.offset <= EDGE_LEN + 1e-9:
            raise ValueError(f"offset {self.offset} outside [0, {EDGE_LEN}]")

    @property
    def at_vertex(self) -> int | None:
        if abs(self.offset) <= 1e-9:
            return self.u
        if abs(self.offset - EDGE_LEN) <= 1e-9:
            return self.v
        return None

    def key(self):
        vid = self.at_vertex
        if vid is not None:
            return ("v", vid)
        return ("e", self.u, self.v, round(self.offset, 9))


class MetricGraph:
    """3-regular graph with unit-speed motion; all edges length 4."""

    def __init__(self, n: int, edges: Sequence[tuple[int, int]], layout=None):
        self.n = n
        self.edges = tuple(tuple(sorted(e)) for e in edges)
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        adj: dict[int, list[int]] = {v: [] for v in range(n)}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        self.adj = {v: tuple(sorted(ws)) for v, ws in adj.items()}
        self.layout = layout or {}
        # hop distances, scaled by the edge length
        INF = float("inf")
        D = [[INF] * n for _ in range(n)]
        for s in range(n):
            D[s][s] = 0.0
            frontier = [s]
            while frontier:
                nxt = []
                for x in frontier:
                    for y in self.adj[x]:
                        if D[s][y] == INF:
                            D[s][y] = D[s][x] + EDGE_LEN
                            nxt.append(y)
                frontier = nxt
        self.D = D

    def has_edge(self, a: int, b: int) -> bool:
        return tuple(sorted((a, b))) in self.edge_index

    def vertex_point(self, v: int) -> GraphPoint:
        w = self.adj[v][0]
        a, b = sorted((v, w))
        return GraphPoint(a, b, 0.0 if v == a else EDGE_LEN)

    def point(self, a: int, b: int, offset_from_a: float) -> GraphPoint:
        if a < b:
            return GraphPoint(a, b, offset_from_a)
        return GraphPoint(b, a, EDGE_LEN - offset_from_a)

    def offset_from(self, p: GraphPoint, v: int) -> float:
        if v == p.u:
            return p.offset
        if v == p.v:
            return EDGE_LEN - p.offset
        raise ValueError(f"{v} is not an endpoint of edge {(p.u, p.v)}")

    def distance(self, p: GraphPoint, q: GraphPoint) -> float:
        best = math.inf
        if (p.u, p.v) == (q.u, q.v):
            best = abs(p.offset - q.offset)
        for x in (p.u, p.v):
            for y in (q.u, q.v):
                d = self.offset_from(p, x) + self.D[x][y] + self.offset_from(q, y)
                best = min(best, d)
        return best

    def girth_through_edge(self, a: int, b: int) -> int:
        """Edges of the shortest cycle containing edge ab (BFS avoiding ab)."""
        INF = float("inf")
        d = {v: INF for v in range(self.n)}
        d[a] = 0
        frontier = [a]
        while frontier:
            nxt = []
            for x in frontier:
                for y in self.adj[x]:
                    if {x, y} == {a, b}:
                        continue
                    if d[y] == INF:
                        d[y] = d[x] + 1
                        nxt.append(y)
            frontier = nxt
        return int(d[b]) + 1


def build_dodecahedron() -> MetricGraph:
    """Canonical labeled dodecahedron: outer pentagon 0-4, middle ring
    5-14, inner pentagon 15-19; deterministic ids and layout."""
    edges = []
    for i in range(5):
        edges.append((i, (i + 1) % 5))
        edges.append((15 + i, 15 + (i + 1) % 5))
        edges.append((i, 5 + 2 * i))
        edges.append((15 + i, 5 + (2 * i + 1) % 10))
    for i in range(10):
        edges.append((5 + i, 5 + (i + 1) % 10))
    layout = {}
    for i in range(5):
        a = math.pi / 2 + 2 * math.pi * i / 5
        layout[i] = (math.cos(a), math.sin(a))
    for i in range(10):
        a = math.pi / 2 + 2 * math.pi * i / 10
        layout[5 + i] = (0.72 * math.cos(a), 0.72 * math.sin(a))
    for i in range(5):
        a = math.pi / 2 + 2 * math.pi * (2 * i + 1) / 10
        layout[15 + i] = (0.4 * math.cos(a), 0.4 * math.sin(a))
    return MetricGraph(20, edges, layout)


# ---------------------------------------------------------------------------
# directional distances over simple paths


def directional_distance(g: MetricGraph, x: GraphPoint, toward: int, p: GraphPoint) -> float:
    """Length of the shortest simple path from x to p whose first step runs
    along x's edge toward the given endpoint.

    Exact branch-and-bound DFS over vertex sequences with an admissible
    lower bound (plain graph distance), feasible at this graph size.
    """
    if toward not in (x.u, x.v):
        raise ValueError("direction must be an endpoint of the point's edge")
    if x.key() == p.key():
        raise ValueError("target coincides with the source")
    other = x.v if toward == x.u else x.u
    entry = g.offset_from(x, toward)
    x_edge = (x.u, x.v)
    best = math.inf

    # target on the initial segment, before the first vertex
    if (p.u, p.v) == x_edge:
        s_x = g.offset_from(x, toward)
        s_p = g.offset_from(p, toward)
        if s_p <= s_x:
            best = s_x - s_p

    p_vertex = p.at_vertex

    def lb(cur: int) -> float:
        if p_vertex is not None:
            return g.D[cur][p_vertex]
        return min(
            g.D[cur][p.u] + p.offset,
            g.D[cur][p.v] + (EDGE_LEN - p.offset),
        )

    def dfs(cur: int, visited: set[int], cost: float) -> None:
        nonlocal best
        if cost + lb(cur) >= best - 1e-12:
            return
        if p_vertex is not None and cur == p_vertex:
            best = cost
            return
        for w in g.adj[cur]:
            e = tuple(sorted((cur, w)))
            if p_vertex is None and (p.u, p.v) == e:
                d_p = g.offset_from(p, cur)
                if e == x_edge:
                    # entering the start edge from the far end: must stop
                    # before running over the source point
                    if d_p <= g.offset_from(x, cur):
                        best = min(best, cost + d_p)
                else:
                    best = min(best, cost + d_p)
            if e == x_edge:
                continue  # a full traversal would pass through the source
            if w not in visited:
                visited.add(w)
                dfs(w, visited, cost + EDGE_LEN)
                visited.remove(w)

    if p_vertex == toward:
        best = min(best, entry)
    dfs(toward, {toward}, entry)
    return best


# ---------------------------------------------------------------------------
# quarters and the safe-state predicate


@dataclass(frozen=True)
class QuarterState:
    point: GraphPoint
    near: int
    far: int

    def __post_init__(self):
        d_near = abs(self.point.offset) if self.near == self.point.u else EDGE_LEN - self.point.offset
        if abs(d_near - QUARTER) > 1e-6:
            raise InvariantViolated(f"not a quarter: {self.point}")


def quarter_state(g: MetricGraph, p: GraphPoint) -> QuarterState:
    if abs(p.offset - QUARTER) <= 1e-6:
        return QuarterState(p, near=p.u, far=p.v)
    if abs(p.offset - (EDGE_LEN - QUARTER)) <= 1e-6:
        return QuarterState(p, near=p.v, far=p.u)
    raise InvariantViolated(f"{p} is not on a quarter")


def all_quarters(g: MetricGraph) -> list[QuarterState]:
    out = []
    for u, v in g.edges:
        out.append(QuarterState(GraphPoint(u, v, QUARTER), near=u, far=v))
        out.append(QuarterState(GraphPoint(u, v, EDGE_LEN - QUARTER), near=v, far=u))
    return out


@dataclass(frozen=True)
class InvariantReport:
    ok: bool
    d_near: float
    d_far: float
    clause_quarter: bool
    clause_min_gap: bool
    clause_lead: bool
    witness: int | None  # lion index violating the gap clause, if any


def quarter_invariant(
    g: MetricGraph, state: QuarterState, lions: Sequence[GraphPoint]
) -> InvariantReport:
    """The safe-state predicate at a quarter: both directional distances at
    least 1, and near-side lead >= 3 or far-side lead >= 7."""
    dn = [directional_distance(g, state.point, state.near, p) for p in lions]
    df = [directional_distance(g, state.point, state.far, p) for p in lions]
    d_near = min(dn)
    d_far = min(df)
    c2 = min(d_near, d_far) >= 1.0 - 1e-9
    c3 = d_near >= 3.0 - 1e-9 or d_far >= 7.0 - 1e-9
    witness = None
    if not c2:
        vals = [min(a, b) for a, b in zip(dn, df)]
        witness = vals.index(min(vals))
    return InvariantReport(
        ok=c2 and c3,
        d_near=d_near,
        d_far=d_far,
        clause_quarter=True,
        clause_min_gap=c2,
        clause_lead=c3,
        witness=witness,
    )


def quarter_strategy_move(
    g: MetricGraph, state: QuarterState, lions: Sequence[GraphPoint]
) -> tuple[QuarterState, int]:
    """The 2-time-unit move keeping the safe state: returns (target, case).

    Case 1 (far lead >= 7): cross to the other quarter of the same edge.
    Case 2 (near lead >= 3): step past the near vertex to the quarter, among
    the two other edges at the near vertex, furthest from the nearer lion;
    ties break toward the lower edge id.
    """
    rep = quarter_invariant(g, state, lions)
    if not rep.ok:
        raise InvariantViolated(
            f"safe-state predicate fails at {state.point}: "
            f"d_near={rep.d_near}, d_far={rep.d_far}"
        )
    if rep.d_far >= 7.0 - 1e-9:
        target = g.point(state.near, state.far, EDGE_LEN - QUARTER)
        return quarter_state(g, target), 1
    df = [directional_distance(g, state.point, state.far, p) for p in lions]
    far_idx = df.index(min(df))
    near_lion = lions[1 - far_idx] if len(lions) > 1 else lions[far_idx]
    a = state.near
    cands = []
    for w in g.adj[a]:
        if w == state.far:
            continue
        q = g.point(a, w, QUARTER)
        d = g.distance(q, near_lion)
        eid = g.edge_index[tuple(sorted((a, w)))]
        cands.append((-d, eid, q))
    cands.sort()
    target = cands[0][2]
    return quarter_state(g, target), 2


# ---------------------------------------------------------------------------
# engine integration


class GraphSpace:
    name = "dodeca"

    def __init__(self, graph: MetricGraph):
        self.graph = graph

    def dist(self, a: GraphPoint, b: GraphPoint) -> float:
        return self.graph.distance(a, b)

    def move_toward(self, pos: GraphPoint, target: GraphPoint, budget: float) -> GraphPoint:
        g = self.graph
        guard = 0
        while budget > 1e-12 and pos.key() != target.key():
            guard += 1
            if guard > 200:
                break
            if (pos.u, pos.v) == (target.u, target.v):
                direct = abs(pos.offset - target.offset)
                via = min(
                    g.offset_from(pos, x) + g.D[x][y] + g.offset_from(target, y)
                    for x in (pos.u, pos.v)
                    for y in (target.u, target.v)
                )
                if direct <= via:
                    step = min(budget, direct)
                    sign = 1.0 if target.offset > pos.offset else -1.0
                    return GraphPoint(pos.u, pos.v, pos.offset + sign * step)
            # head for the best endpoint of the current edge
            best = None
            for x in (pos.u, pos.v):
                d = g.offset_from(pos, x) + min(
                    g.D[x][y] + g.offset_from(target, y) for y in (target.u, target.v)
                )
                if best is None or (d, x) < best:
                    best = (d, x)
            x = best[1]
            d_to_x = g.offset_from(pos, x)
            if d_to_x > 1e-12:
                if budget < d_to_x:
                    sign = 1.0 if x == pos.v else -1.0
                    return GraphPoint(pos.u, pos.v, pos.offset + sign * budget)
                budget -= d_to_x
                pos = g.vertex_point(x)
                continue
            # standing on vertex x: enter the best next edge
            v = pos.at_vertex
            cands = []
            for w in g.adj[v]:
                e = tuple(sorted((v, w)))
                if e == (target.u, target.v):
                    rest = g.offset_from(target, w)
                    cands.append((g.offset_from(target, v), w))
                    continue
                d = EDGE_LEN + min(
                    g.D[w][y] + g.offset_from(target, y) for y in (target.u, target.v)
                )
                cands.append((d, w))
            cands.sort()
            w = cands[0][1]
            e_target_is_here = tuple(sorted((v, w))) == (target.u, target.v)
            span = (
                g.offset_from(target, v) if e_target_is_here else EDGE_LEN
            )
            step = min(budget, span)
            pos = g.point(v, w, step)
            budget -= step
        return pos

    def random_target(self, rng: random.Random, me: GraphPoint, reach: float) -> GraphPoint:
        u, v = self.graph.edges[rng.randrange(len(self.graph.edges))]
        return GraphPoint(u, v, rng.uniform(0.0, EDGE_LEN))

    def serialize(self, pos: GraphPoint):
        return {"edge": [pos.u, pos.v], "offset": round(pos.offset, 12)}

    def deserialize(self, obj) -> GraphPoint:
        return GraphPoint(obj["edge"][0], obj["edge"][1], obj["offset"])


class QuarterStrategy:
    """Runs quarter to quarter, two time units per move."""

    def __init__(self, graph: MetricGraph):
        self.graph = graph
        self.arrivals: list[dict] = []
        self._last_case: int | None = None

    def commit(self, view: GameView) -> Commitment:
        g = self.graph
        state = quarter_state(g, view.me)
        rep = quarter_invariant(g, state, view.lions)
        self.arrivals.append(
            {
                "t": view.t,
                "d_near": rep.d_near,
                "d_far": rep.d_far,
                "ok": rep.ok,
                "after_case": self._last_case,
            }
        )
        view.emit(
            "arrival",
            {
                "d_near": rep.d_near,
                "d_far": rep.d_far,
                "ok": rep.ok,
                "after_case": self._last_case,
            },
        )
        target, case = quarter_strategy_move(g, state, view.lions)
        self._last_case = case
        steps = int(round(2.0 / view.dt))
        return Commitment(view.step + steps, target.point)


def compliant_placement(g: MetricGraph) -> tuple[GraphPoint, list[GraphPoint]]:
    """Deterministic start satisfying the safe-state predicate with slack:
    the man on the first edge's quarter, lions on the vertex pair
    maximizing his directional leads."""
    man = GraphPoint(*g.edges[0], QUARTER)
    state = quarter_state(g, man)
    best = None
    for v1 in range(g.n):
        for v2 in range(v1 + 1, g.n):
            lions = [g.vertex_point(v1), g.vertex_point(v2)]
            rep = quarter_invariant(g, state, lions)
            score = (min(rep.d_near, rep.d_far), rep.d_far, -v1, -v2)
            if rep.ok and (best is None or score > best[0]):
                best = (score, lions)
    if best is None:
        raise InvariantViolated("no compliant lion placement found")
    return man, best[1]
