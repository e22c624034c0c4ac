"""Game clock, motion integration, strategy contract and trace recording.

Time is discretized at dt; every strategy commits to a waypoint for a whole
number of steps ("I run there until step k"), matching the class of
strategies where decisions happen at multiples of a fixed period.  Agents
move toward their waypoints along space geodesics at their speed caps, so
a commitment is only legal if the waypoint is reachable in time.

Positions are space-dependent: planar points or graph points.  A Space
supplies distance, geodesic stepping and serialization; the engine itself
never looks inside a position.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .geom import Point, dist, lerp, sub, unit
from .geodesic import PathSystem
from .region import FeasibleRegion

SPEED_TOL = 1e-9


class StrategyFault(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# spaces


class PlaneSpace:
    """The unbounded plane; geodesics are straight segments."""

    name = "plane"

    def dist(self, a, b) -> float:
        return dist(a, b)

    def move_toward(self, pos, target, budget: float):
        d = dist(pos, target)
        if d <= budget:
            return target
        u = unit(sub(target, pos))
        return (pos[0] + budget * u[0], pos[1] + budget * u[1])

    def random_target(self, rng, me, reach: float):
        ang = rng.uniform(0.0, 2.0 * math.pi)
        return (me[0] + reach * math.cos(ang), me[1] + reach * math.sin(ang))

    def serialize(self, pos) -> Any:
        return [pos[0], pos[1]]

    def deserialize(self, obj) -> Any:
        return (float(obj[0]), float(obj[1]))


class RegionSpace:
    """A feasible region; geodesics bend around lakes."""

    name = "region"

    def __init__(self, region: FeasibleRegion):
        self.region = region
        self.system = PathSystem(region)

    def dist(self, a, b) -> float:
        if self.region.segment_inside(a, b):
            return dist(a, b)
        return self.system.distance(a, b)

    def move_toward(self, pos, target, budget: float):
        remaining = budget
        cur = pos
        guard = 0
        while remaining > SPEED_TOL:
            guard += 1
            if guard > 64:
                break
            if self.region.segment_inside(cur, target):
                step = min(remaining, dist(cur, target))
                if dist(cur, target) <= remaining:
                    return target
                u = unit(sub(target, cur))
                return (cur[0] + step * u[0], cur[1] + step * u[1])
            path = self.system.shortest_path(cur, target)
            nxt = path.vertices[1]
            d = dist(cur, nxt)
            if d >= remaining:
                u = unit(sub(nxt, cur))
                return (cur[0] + remaining * u[0], cur[1] + remaining * u[1])
            cur = nxt
            remaining -= d
        return cur

    def random_target(self, rng, me, reach: float):
        x0, y0, x1, y1 = self.region.bbox
        for _ in range(64):
            p = (rng.uniform(x0, x1), rng.uniform(y0, y1))
            if self.region.contains(p, eps=0.0):
                return p
        return me

    def serialize(self, pos) -> Any:
        return [pos[0], pos[1]]

    def deserialize(self, obj) -> Any:
        return (float(obj[0]), float(obj[1]))


# ---------------------------------------------------------------------------
# traces


@dataclass
class Trace:
    dt: float
    samples: list[tuple[float, Any, list[Any]]] = field(default_factory=list)
    events: list[tuple[float, str, Any]] = field(default_factory=list)

    @property
    def times(self) -> list[float]:
        return [s[0] for s in self.samples]

    def man_positions(self) -> list[Any]:
        return [s[1] for s in self.samples]

    def lion_positions(self, j: int) -> list[Any]:
        return [s[2][j] for s in self.samples]

    def write_jsonl(self, path: str, space) -> None:
        with open(path, "w") as fh:
            fh.write(json.dumps({"v": 1, "dt": self.dt, "space": space.name}) + "\n")
            ev = sorted(self.events, key=lambda e: e[0])
            ei = 0
            for t, man, lions in self.samples:
                while ei < len(ev) and ev[ei][0] <= t + 1e-12:
                    fh.write(
                        json.dumps(
                            {"t": round(ev[ei][0], 12), "event": ev[ei][1], "data": ev[ei][2]}
                        )
                        + "\n"
                    )
                    ei += 1
                fh.write(
                    json.dumps(
                        {
                            "t": round(t, 12),
                            "man": space.serialize(man),
                            "lions": [space.serialize(p) for p in lions],
                        }
                    )
                    + "\n"
                )
            for e in ev[ei:]:
                fh.write(json.dumps({"t": round(e[0], 12), "event": e[1], "data": e[2]}) + "\n")

    @classmethod
    def read_jsonl(cls, path: str, space) -> "Trace":
        samples = []
        events = []
        dt = None
        with open(path) as fh:
            for line in fh:
                obj = json.loads(line)
                if "dt" in obj and "man" not in obj:
                    dt = obj["dt"]
                elif "event" in obj:
                    events.append((obj["t"], obj["event"], obj.get("data")))
                else:
                    samples.append(
                        (
                            obj["t"],
                            space.deserialize(obj["man"]),
                            [space.deserialize(p) for p in obj["lions"]],
                        )
                    )
        if dt is None:
            raise ValueError("trace file missing header line with dt")
        return cls(dt=dt, samples=samples, events=events)


def verify_trace_speeds(trace: Trace, caps: Sequence[float], space=None) -> list[dict]:
    """Flag every step whose displacement/dt exceeds the agent's cap.

    caps[0] is the man's, caps[1:] the lions'.  Returns violation records.
    """
    space = space or PlaneSpace()
    bad = []
    for k in range(1, len(trace.samples)):
        t0, man0, lions0 = trace.samples[k - 1]
        t1, man1, lions1 = trace.samples[k]
        dt = t1 - t0
        if dt <= 0:
            bad.append({"step": k, "agent": "clock", "speed": math.inf})
            continue
        v = space.dist(man0, man1) / dt
        if v > caps[0] + SPEED_TOL:
            bad.append({"step": k, "agent": "man", "speed": v})
        for j, (a, b) in enumerate(zip(lions0, lions1)):
            v = space.dist(a, b) / dt
            if v > caps[1 + j] + SPEED_TOL:
                bad.append({"step": k, "agent": f"lion{j}", "speed": v})
    return bad


# ---------------------------------------------------------------------------
# the game loop


@dataclass
class Commitment:
    until_step: int
    waypoint: Any


@dataclass
class GameView:
    """What a strategy sees when asked to commit: the present state.

    ``man_waypoint`` exposes the man's current commitment; adversaries may
    use it because the lions are allowed to know the man's strategy.
    """

    step: int
    t: float
    dt: float
    space: Any
    me: Any
    man: Any
    lions: list[Any]
    man_waypoint: Any
    emit: Callable[[str, Any], None]


@dataclass
class GameConfig:
    space: Any
    man0: Any
    lions0: list[Any]
    man_speed: float
    lion_speeds: Sequence[float]
    dt: float
    capture_radius: float


@dataclass
class GameOutcome:
    verdict: str  # 'capture' | 'survived' | 'escaped-hull'
    time: float
    trace: Trace
    lion_index: int | None = None

    @property
    def captured(self) -> bool:
        return self.verdict == "capture"


def run_game(
    config: GameConfig,
    man_strategy,
    lion_strategies: Sequence,
    horizon: float,
    capture_hooks: Iterable[Callable] = (),
    step_monitors: Iterable[Callable] = (),
) -> GameOutcome:
    """Advance the game to the horizon or to capture.

    Every strategy is asked to commit whenever its previous commitment
    expires; commitments must respect the agent's speed cap.  Capture is
    distance <= capture_radius, checked after every step; capture_hooks
    may report additional capture events (e.g. wall crossings).
    """
    space = config.space
    dt = config.dt
    n_steps = int(round(horizon / dt))
    man = config.man0
    lions = list(config.lions0)
    if len(lion_strategies) != len(lions):
        raise ValueError("one strategy per lion required")
    for j, lion in enumerate(lions):
        if space.dist(man, lion) <= config.capture_radius:
            raise ValueError(f"lion {j} starts on top of the man")

    trace = Trace(dt=dt)

    def emit(tag: str, payload: Any) -> None:
        trace.events.append((step * dt, tag, payload))

    step = 0
    trace.samples.append((0.0, man, list(lions)))
    man_commit: Commitment | None = None
    lion_commits: list[Commitment | None] = [None] * len(lions)

    def ask(strategy, pos, speed, name):
        view = GameView(
            step=step,
            t=step * dt,
            dt=dt,
            space=space,
            me=pos,
            man=man,
            lions=list(lions),
            man_waypoint=man_commit.waypoint if man_commit else None,
            emit=emit,
        )
        c = strategy.commit(view)
        duration = (c.until_step - step) * dt
        if duration <= 0:
            raise StrategyFault(f"{name}: empty commitment")
        if space.dist(pos, c.waypoint) > speed * duration + 1e-7:
            raise StrategyFault(
                f"{name}: waypoint unreachable at speed {speed} in {duration}"
            )
        return c

    while step < n_steps:
        if man_commit is None or man_commit.until_step <= step:
            man_commit = ask(man_strategy, man, config.man_speed, "man")
        for j, strat in enumerate(lion_strategies):
            if lion_commits[j] is None or lion_commits[j].until_step <= step:
                lion_commits[j] = ask(strat, lions[j], config.lion_speeds[j], f"lion{j}")

        prev_man = man
        man = space.move_toward(man, man_commit.waypoint, config.man_speed * dt)
        prev_lions = lions
        lions = [
            space.move_toward(lions[j], lion_commits[j].waypoint, config.lion_speeds[j] * dt)
            for j in range(len(lions))
        ]
        step += 1
        t = step * dt
        trace.samples.append((t, man, list(lions)))

        for mon in step_monitors:
            mon(step, t, prev_man, man, prev_lions, lions, emit)

        caught = None
        for j in range(len(lions)):
            if space.dist(man, lions[j]) <= config.capture_radius:
                caught = j
                break
        if caught is not None:
            trace.events.append((t, "capture", {"lion": caught}))
            return GameOutcome("capture", t, trace, lion_index=caught)
        for hook in capture_hooks:
            res = hook(prev_man, man, step)
            if res is None:
                continue
            # mid-step interception: rewind everyone to the crossing instant
            frac = res.get("frac", 1.0)
            j = res["lion"]
            z = res["point"]
            t_c = (step - 1 + frac) * dt
            lions_c = [
                space.move_toward(
                    prev_lions[i],
                    lion_commits[i].waypoint,
                    config.lion_speeds[i] * dt * frac,
                )
                for i in range(len(lions))
            ]
            budget_j = config.lion_speeds[j] * dt * frac
            if res.get("snap", True):
                # the guard rule pins the lion to the crossing point exactly
                lions_c[j] = z
            else:
                lions_c[j] = space.move_toward(prev_lions[j], z, budget_j)
            trace.samples[-1] = (t_c, z, lions_c)
            trace.events.append(
                (
                    t_c,
                    "capture",
                    {"lion": j, "crossing": True, "miss": space.dist(z, lions_c[j])},
                )
            )
            return GameOutcome("capture", t_c, trace, lion_index=j)

    return GameOutcome("survived", n_steps * dt, trace)
