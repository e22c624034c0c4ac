"""Recursive escape strategy for a man slightly faster than the lions.

Level k of the strategy handles the first k lions.  Level 1 runs along a
fixed ray.  Level k > 1 chases the next corner of level k-1 (its goal) at
speed 1 + eps_k, spending its speed surplus on detours around lion k:

* free move      -- straight at the goal while lion k is far;
* escape move    -- straight at the goal, certified by a separating pair
                    of parallel lines so lion k cannot close in again;
* avoidance move -- counterclockwise around lion k on the circle of
                    radius r, when neither of the above applies.

Every move covers exactly (1 + eps_k) * delta_k in delta_k time, so all
levels share one dyadic clock.  The parameter stack (orbit radius r,
standoff rho, dash cone theta, alignment threshold phi, decision period
delta, orbit budget tau, goal radius rho', clearance table c) is derived
bottom-up so each level eats only a bounded slice of the clearances
guaranteed by the level below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .engine import Commitment, GameView
from .geom import (
    Circle,
    Point,
    add,
    circle_circle_intersection,
    convex_hull,
    dist,
    distance_to_hull,
    escape_witness_exists,
    point_in_hull,
    point_segment_distance,
    scale,
    sub,
    unit,
    wrap_angle,
)


class ParameterInfeasible(ValueError):
    pass


class GeometryFault(RuntimeError):
    pass


PI = math.pi
DELTA_FLOOR = 1e-12


@dataclass(frozen=True)
class LevelParams:
    """All constants of one strategy level (k = 1 has only the ray data)."""

    k: int
    eps_k: float
    delta: float
    safety: tuple[float, ...]  # clearance to lions 1..k under this level
    big_c: float | None = None  # slack eaten from lower-level clearances
    r: float | None = None  # orbit radius around lion k
    rho: float | None = None  # lion-to-goal standoff while orbiting
    theta: float | None = None  # half-angle of the winning dash cone
    phi: float | None = None  # angular alignment that certifies a dash
    tau: float | None = None  # orbit time budget
    rho_prime: float | None = None  # goal proximity radius

    @property
    def step_len(self) -> float:
        return (1.0 + self.eps_k) * self.delta


@dataclass(frozen=True)
class FastManParams:
    n: int
    eps: float
    levels: tuple[LevelParams, ...]

    def level(self, k: int) -> LevelParams:
        return self.levels[k - 1]

    @property
    def top(self) -> LevelParams:
        return self.levels[-1]

    def clearance(self, j: int) -> float:
        """Guaranteed distance to lion j under the full strategy."""
        return self.top.safety[j - 1]

    def validate(self) -> list[str]:
        """Every derived inequality, re-checked by direct substitution."""
        bad: list[str] = []
        eps_prev = 0.0
        for lv in self.levels:
            k = lv.k
            want = (1.0 - 2.0 ** (-k)) * self.eps
            if abs(lv.eps_k - want) > 1e-12:
                bad.append(f"eps_{k} != (1-2^-{k})*eps")
            if not (eps_prev < lv.eps_k < self.eps):
                bad.append(f"eps ladder broken at {k}")
            eps_prev = lv.eps_k
            if any(c <= 0.0 for c in lv.safety):
                bad.append(f"nonpositive clearance at level {k}")
            if k == 1:
                continue
            prev = self.levels[k - 2]
            diag = [self.levels[j - 1].safety[j - 1] for j in range(1, k)]
            want_c = min(c / 2.0 ** (k - j + 1) for j, c in enumerate(diag, start=1))
            if abs(lv.big_c - want_c) > 1e-12 * max(1.0, want_c):
                bad.append(f"C_{k} mismatch")
            for j in range(1, k):
                if abs(lv.safety[j - 1] - (prev.safety[j - 1] - lv.big_c)) > 1e-12:
                    bad.append(f"clearance recursion broken at ({k},{j})")
            ratio = prev.delta / lv.delta
            if abs(ratio - round(ratio)) > 1e-9:
                bad.append(f"delta_{k-1}/delta_{k} not integral")
            if not lv.delta < lv.r / (3.0 + lv.eps_k):
                bad.append(f"delta_{k} too large vs r")
            turn = 2.0 * math.asin(
                (1.0 + lv.eps_k) * lv.delta / (2.0 * (lv.r - lv.delta))
            ) + lv.delta / lv.rho
            if not turn <= lv.phi + 1e-12:
                bad.append(f"angle-step bound fails at {k}")
            lhs = math.tan(lv.theta)
            rhs = lv.rho * math.sin(lv.phi) / (lv.rho * math.cos(lv.phi) - 2.0 * lv.r)
            if abs(lhs - rhs) > 1e-6 * max(1.0, abs(lhs)):
                bad.append(f"phi equation off at {k}")
            if abs(lv.rho - 2.0 * lv.r / lv.eps_k) > 1e-9 * lv.rho:
                bad.append(f"rho != 2r/eps at {k}")
            if abs(lv.tau - 6.0 * PI * lv.r / lv.eps_k) > 1e-9 * lv.tau:
                bad.append(f"tau != 6*pi*r/eps at {k}")
            want_rp = lv.rho + lv.r + (3.0 + lv.eps_k) * lv.delta
            if abs(lv.rho_prime - want_rp) > 1e-9 * want_rp:
                bad.append(f"rho' mismatch at {k}")
            if not lv.rho_prime + 2.0 * (1.0 + lv.eps_k) * lv.tau <= lv.big_c + 1e-9:
                bad.append(f"shadow bound rho'+2(1+eps)tau > C at {k}")
            catch = prev.delta * (lv.eps_k - prev.eps_k)
            if not catch >= lv.rho + 2.0 * lv.r + 3.0 * (1.0 + lv.eps_k) * lv.tau - 1e-9:
                bad.append(f"catch-up bound fails at {k}")
            if not prev.delta * (1.0 + self.eps) <= lv.big_c + 1e-12:
                bad.append(f"goal-step bound delta_{k-1}(1+eps) > C_{k} at {k}")
        return bad


def _solve_phi(rho: float, r: float, tan_theta: float) -> float:
    """Largest phi in (0, arccos(2r/rho)) with
    rho*sin(phi)/(rho*cos(phi) - 2r) = tan(theta); the quotient rises from 0
    to +inf on that interval, so bisection applies."""
    hi = math.acos(min(1.0, 2.0 * r / rho)) - 1e-15
    lo = 0.0

    def f(phi: float) -> float:
        return rho * math.sin(phi) / (rho * math.cos(phi) - 2.0 * r) - tan_theta

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return lo


def derive_params(
    n: int, eps: float, m0: Point, lions0: Sequence[Point]
) -> FastManParams:
    """Build the full parameter stack for n lions, bottom-up.

    Free choices at the base: delta_1 = 1 and c_11 = |m0 - l1(0)|, shrunk
    dyadically when a higher level needs a finer goal step.  Each delta_k
    is the largest value delta_{k-1} / 2^i compatible with its level's
    constraints, which keeps all levels on one dyadic clock.
    """
    if not 0.0 < eps < 1.0:
        raise ParameterInfeasible("eps must be in (0, 1)")
    if len(lions0) < n:
        raise ParameterInfeasible(f"need {n} initial lion positions")
    for j in range(n):
        if dist(m0, lions0[j]) == 0.0:
            raise ParameterInfeasible(f"lion {j + 1} starts at the man's position")

    eps_of = lambda k: (1.0 - 2.0 ** (-k)) * eps
    c11 = dist(m0, lions0[0])

    # base level: a ray, subdivided into unit (or dyadically smaller) steps
    delta1 = 1.0
    if n >= 2:
        # the goal step of level 2 must stay under C_2 = c11 / 4
        while delta1 * (1.0 + eps) > c11 / 4.0:
            delta1 /= 2.0
            if delta1 < DELTA_FLOOR:
                raise ParameterInfeasible("delta_1 underflow")
    levels = [LevelParams(k=1, eps_k=eps_of(1), delta=delta1, safety=(c11,))]

    for k in range(2, n + 1):
        eps_k = eps_of(k)
        eps_prev = eps_of(k - 1)
        prev = levels[-1]
        diag = [lv.safety[lv.k - 1] for lv in levels]  # c_jj for j < k
        big_c = min(c / 2.0 ** (k - j + 1) for j, c in enumerate(diag, start=1))
        r = min(
            prev.delta * eps_k * (eps_k - eps_prev)
            / (2.0 + 2.0 * eps_k + 18.0 * PI * (1.0 + eps_k)),
            eps_k * big_c / (2.0 + 2.0 * eps_k + 12.0 * PI * (1.0 + eps_k)),
            dist(m0, lions0[k - 1]),
        )
        rho = 2.0 * r / eps_k
        theta = math.acos(1.0 / (1.0 + eps_k))
        tan_theta = math.sqrt((1.0 + eps_k) ** 2 - 1.0)
        phi = _solve_phi(rho, r, tan_theta)

        delta = prev.delta
        while True:
            if delta < DELTA_FLOOR:
                raise ParameterInfeasible(f"delta_{k} underflow (eps too small?)")
            ok = delta < r / (3.0 + eps_k)
            if ok:
                s = (1.0 + eps_k) * delta / (2.0 * (r - delta))
                ok = s <= 1.0 and 2.0 * math.asin(s) + delta / rho <= phi
            if ok and k < n:
                # the next level needs goal steps below C_{k+1}, which
                # depends on c_kk = r - (3+eps_k)*delta
                next_c = min(
                    min(c / 2.0 ** (k + 2 - j) for j, c in enumerate(diag, start=1)),
                    (r - (3.0 + eps_k) * delta) / 4.0,
                )
                ok = delta * (1.0 + eps) <= next_c
            if ok:
                break
            delta /= 2.0

        safety = tuple(c - big_c for c in prev.safety) + (r - (3.0 + eps_k) * delta,)
        levels.append(
            LevelParams(
                k=k,
                eps_k=eps_k,
                delta=delta,
                safety=safety,
                big_c=big_c,
                r=r,
                rho=rho,
                theta=theta,
                phi=phi,
                tau=6.0 * PI * r / eps_k,
                rho_prime=rho + r + (3.0 + eps_k) * delta,
            )
        )

    params = FastManParams(n=n, eps=eps, levels=tuple(levels))
    bad = params.validate()
    if bad:
        raise ParameterInfeasible("; ".join(bad))
    return params


# ---------------------------------------------------------------------------
# the move automaton


def choose_move(m: Point, lion: Point, goal: Point, lv: LevelParams) -> tuple[str, Point]:
    """One decision of level k: returns ('free'|'escape'|'avoid', waypoint).

    The waypoint is always exactly step_len away from m.
    """
    step_len = lv.step_len
    d = dist(m, lion)
    at_goal = dist(m, goal) <= 1e-12
    if d >= lv.r + step_len:
        direction = (1.0, 0.0) if at_goal else unit(sub(goal, m))
        return "free", add(m, scale(direction, step_len))
    if not at_goal:
        b = add(m, scale(unit(sub(goal, m)), step_len))
        if escape_witness_exists(m, b, lion, lv.r, lv.delta):
            return "escape", b
    hit = circle_circle_intersection(Circle(m, step_len), Circle(lion, lv.r))
    if hit.kind not in ("two", "tangent"):
        raise GeometryFault(
            f"avoidance circles do not intersect: |m lion| = {d}, r = {lv.r}, "
            f"step = {step_len}"
        )
    return "avoid", hit.q


class StrategyStack:
    """Lazy evaluation of every strategy level on one shared clock.

    ``lion_at(j, t)`` must return lion j's position at time t; levels only
    query it at multiples of their decision periods, all of which are
    dyadic, so the times are exact floats.
    """

    def __init__(self, params: FastManParams, m0: Point, lion_at: Callable[[int, float], Point]):
        self.params = params
        self.m0 = m0
        self.lion_at = lion_at
        self.corners: list[list[Point]] = [[m0] for _ in range(params.n)]
        self.kinds: list[list[str]] = [[] for _ in range(params.n)]
        u = unit(sub(m0, lion_at(1, 0.0)))
        self._ray_dir = u

    def corner(self, k: int, i: int) -> Point:
        lv = self.params.level(k)
        if k == 1:
            return add(self.m0, scale(self._ray_dir, lv.step_len * i))
        cs = self.corners[k - 1]
        while len(cs) <= i:
            j = len(cs) - 1  # decide the move leaving corner j
            t = j * lv.delta
            kind, wp = choose_move(cs[j], self.lion_at(k, t), self.goal(k, j), lv)
            cs.append(wp)
            self.kinds[k - 1].append(kind)
        return cs[i]

    def goal(self, k: int, i: int) -> Point:
        """Goal of level k at its i-th decision: the next corner of level
        k-1 strictly after time i * delta_k."""
        prev = self.params.level(k - 1)
        ratio = int(round(prev.delta / self.params.level(k).delta))
        return self.corner(k - 1, i // ratio + 1)

    def kind(self, k: int, i: int) -> str:
        if k == 1:
            return "ray"
        self.corner(k, i + 1)
        return self.kinds[k - 1][i]

    def position(self, k: int, t: float) -> Point:
        lv = self.params.level(k)
        i = int(math.floor(t / lv.delta + 1e-12))
        frac = (t - i * lv.delta) / lv.delta
        a = self.corner(k, i)
        if frac <= 1e-12:
            return a
        b = self.corner(k, i + 1)
        return (a[0] + (b[0] - a[0]) * frac, a[1] + (b[1] - a[1]) * frac)


class FastManStrategy:
    """Engine adapter: commits one top-level move per decision period."""

    def __init__(self, params: FastManParams, m0: Point, lions0: Sequence[Point]):
        self.params = params
        self._history: dict[float, tuple[Point, ...]] = {0.0: tuple(lions0)}
        self.stack = StrategyStack(params, m0, self._lion_at)

    def _lion_at(self, j: int, t: float) -> Point:
        snap = self._history.get(t)
        if snap is None:
            raise KeyError(f"no lion snapshot at t={t}; dt must divide delta_n")
        return snap[j - 1]

    def commit(self, view: GameView) -> Commitment:
        lv = self.params.top
        self._history[view.t] = tuple(view.lions)
        ticks_per = int(round(lv.delta / view.dt))
        i = view.step // ticks_per
        wp = self.stack.corner(self.params.n, i + 1)
        view.emit("move", {"level": self.params.n, "i": i, "kind": self.stack.kind(self.params.n, i)})
        return Commitment((i + 1) * ticks_per, wp)


def strategy_m1(t: float, m0: Point, l1_0: Point, eps: float) -> Point:
    """Base strategy: run along the ray away from the lion's start."""
    if dist(m0, l1_0) == 0.0:
        raise ValueError("man and lion coincide")
    u = unit(sub(m0, l1_0))
    return add(m0, scale(u, (1.0 + eps / 2.0) * t))


# ---------------------------------------------------------------------------
# runtime monitors


@dataclass
class CheckResult:
    violations: list = field(default_factory=list)
    worst: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def hit(self, margin: float, info) -> None:
        if margin > self.worst:
            self.worst = margin
            self.violations.insert(0, info)
        else:
            self.violations.append(info)


@dataclass
class ClaimsReport:
    checks: dict[str, CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks.values())

    def summary(self) -> dict:
        return {
            name: {"ok": c.ok, "violations": len(c.violations), "worst": c.worst}
            for name, c in self.checks.items()
        }


def monitor_claims(trace, params: FastManParams, tol: float = 1e-7) -> ClaimsReport:
    """Re-check the strategy's guarantees on a recorded trace.

    Geometry is evaluated from the trace samples themselves; only the goal
    sequence is reconstructed from the recorded lion positions, so sample
    tampering shows up as violations rather than being rationalized away.
    """
    lv = params.top
    n = params.n
    dt = trace.dt
    ticks_per = int(round(lv.delta / dt))
    samples = trace.samples
    n_moves = (len(samples) - 1) // ticks_per

    def lion_at(j: int, t: float) -> Point:
        k = int(round(t / dt))
        return samples[k][2][j - 1]

    stack = StrategyStack(params, samples[0][1], lion_at)

    checks = {
        name: CheckResult()
        for name in (
            "lion_gap",
            "move_order",
            "orbit_timeout",
            "goal_tracking",
            "angle_steps",
            "safety",
        )
    }
    if n == 1:
        return ClaimsReport(checks)  # ray level: nothing to monitor

    man_tick = [samples[i * ticks_per][1] for i in range(n_moves + 1)]
    lion_tick = [samples[i * ticks_per][2][n - 1] for i in range(n_moves + 1)]
    kinds = []
    for i in range(n_moves):
        try:
            kinds.append(
                choose_move(man_tick[i], lion_tick[i], stack.goal(n, i), lv)[0]
            )
        except GeometryFault:
            # impossible state under the strategy's guarantees: flag and
            # keep scanning
            checks["lion_gap"].hit(
                lv.r, {"tick": i, "d": dist(man_tick[i], lion_tick[i]), "bound": "geometry"}
            )
            kinds.append("free")
    goals = [stack.goal(n, i) for i in range(n_moves)]

    # -- gap band around lion n (decision instants and whole-move windows)
    gap = checks["lion_gap"]
    for i in range(n_moves + 1):
        d = dist(man_tick[i], lion_tick[i])
        if d < lv.r - lv.delta - tol:
            gap.hit(lv.r - lv.delta - d, {"tick": i, "d": d, "bound": "r-delta"})
        if i >= 1 and kinds[i - 1] == "avoid" and d > lv.r + lv.delta + tol:
            gap.hit(d - lv.r - lv.delta, {"tick": i, "d": d, "bound": "r+delta"})
    wide = (3.0 + lv.eps_k) * lv.delta
    for i in range(n_moves):
        lo = i * ticks_per
        hi = (i + 1) * ticks_per
        pts = [samples[k][1] for k in range(lo, hi + 1)]
        lions_w = [samples[k][2][n - 1] for k in range(lo, hi + 1)]
        for mp in pts:
            for lp in lions_w:
                d = dist(mp, lp)
                if d < lv.r - wide - tol:
                    gap.hit(lv.r - wide - d, {"move": i, "d": d, "bound": "in-move low"})
                if kinds[i] == "avoid" and d > lv.r + wide + tol:
                    gap.hit(d - lv.r - wide, {"move": i, "d": d, "bound": "in-move high"})

    # -- move ordering automaton
    order = checks["move_order"]
    blocked = False  # escape issued; avoidance forbidden until release
    for i in range(n_moves):
        if i >= 1 and kinds[i - 1] == "avoid" and kinds[i] == "free":
            order.hit(1.0, {"tick": i, "got": "free", "after": "avoid"})
        if kinds[i] == "avoid" and blocked:
            order.hit(1.0, {"tick": i, "got": "avoid", "after": "escape"})
        if kinds[i] == "escape":
            blocked = True
        if blocked:
            reached = (
                point_segment_distance(goals[i], man_tick[i], man_tick[i + 1]) <= 1e-7
            )
            moved = i + 1 < n_moves and goals[i + 1] != goals[i]
            if reached or moved:
                blocked = False

    # -- every avoidance move sees one of three events within tau
    timeout = checks["orbit_timeout"]
    tau_ticks = int(math.ceil(lv.tau / lv.delta - 1e-9))
    for i in range(n_moves):
        if kinds[i] != "avoid":
            continue
        ok = False
        for j in range(i, min(i + tau_ticks + 1, n_moves)):
            if goals[j] != goals[i] or kinds[j] == "escape":
                ok = True
                break
            in_lo = j * ticks_per
            in_hi = min((j + 1) * ticks_per, len(samples) - 1)
            if any(
                dist(samples[kk][1], goals[j]) < lv.rho_prime
                for kk in range(in_lo, in_hi + 1)
            ):
                ok = True
                break
        if not ok and i + tau_ticks < n_moves:
            timeout.hit(1.0, {"tick": i})

    # -- the man shadows the lower level's segments
    track = checks["goal_tracking"]
    sub_lv = params.level(n - 1)
    sub_ticks = int(round(sub_lv.delta / dt))
    n_intervals = (len(samples) - 1) // sub_ticks
    lim_seg = lv.rho_prime + 2.0 * (1.0 + lv.eps_k) * lv.tau
    lim_end = lv.rho_prime + (1.0 + lv.eps_k) * lv.tau
    for i in range(n_intervals):
        a = stack.corner(n - 1, i)
        b = stack.corner(n - 1, i + 1)
        for k in range(i * sub_ticks, (i + 1) * sub_ticks + 1):
            d = point_segment_distance(samples[k][1], a, b)
            if d > lim_seg + tol:
                track.hit(d - lim_seg, {"interval": i, "sample": k, "d": d})
        d_end = dist(samples[(i + 1) * sub_ticks][1], b)
        if d_end > lim_end + tol:
            track.hit(d_end - lim_end, {"interval": i, "end": True, "d": d_end})

    # -- angular progress bounds while orbiting (diagnostic)
    angles = checks["angle_steps"]
    xi_lim = 2.0 * math.asin(min(1.0, (2.0 + lv.eps_k) * lv.delta / (2.0 * (lv.r - lv.delta))))
    eta_lim = lv.delta / lv.rho
    for i in range(1, n_moves):
        if not (kinds[i] == "avoid" and kinds[i - 1] == "avoid" and goals[i] == goals[i - 1]):
            continue
        v0 = sub(man_tick[i - 1], lion_tick[i - 1])
        v1 = sub(man_tick[i], lion_tick[i])
        dxi = wrap_angle(math.atan2(v1[1], v1[0]) - math.atan2(v0[1], v0[0]))
        if dxi > xi_lim + tol:
            angles.hit(dxi - xi_lim, {"tick": i, "dxi": dxi})
        g0 = sub(goals[i], lion_tick[i - 1])
        g1 = sub(goals[i], lion_tick[i])
        deta = wrap_angle(math.atan2(g1[1], g1[0]) - math.atan2(g0[1], g0[0]))
        if deta > eta_lim + tol:
            angles.hit(deta - eta_lim, {"tick": i, "deta": deta})

    # -- clearance floor to every lion
    safety = checks["safety"]
    for j in range(1, n + 1):
        c = params.clearance(j)
        for k, (_, man, lions) in enumerate(samples):
            d = dist(man, lions[j - 1])
            if d < c - 1e-6:
                safety.hit(c - d, {"lion": j, "sample": k, "d": d})

    return ClaimsReport(checks)


def hull_escape_sample(trace) -> int | None:
    """First sample index after which the man stays outside the lions'
    hull with nondecreasing hull distance, or None."""
    samples = trace.samples
    n = len(samples)
    outside = []
    hull_d = []
    for _, man, lions in samples:
        hull = convex_hull(lions)
        outside.append(not point_in_hull(man, hull))
        hull_d.append(distance_to_hull(man, hull))
    best = None
    k = n - 1
    while k >= 0 and outside[k]:
        if k < n - 1 and hull_d[k] > hull_d[k + 1] + 1e-9:
            break
        best = k
        k -= 1
    return best


# ---------------------------------------------------------------------------
# approximating the limit strategy


def m_infinity_approx(
    t: float,
    m0: Point,
    lion_paths: Sequence[Callable[[float], Point]],
    eps: float,
    tol: float,
) -> tuple[Point, float]:
    """Position of the limit strategy at time t, within tol.

    Level n and level m > n differ by at most sum_{i>n} 2 C_i, which the
    geometric majorant bounds by 2 c_11 2^-N; the smallest sufficient N is
    simulated.  Fails when N exceeds the number of supplied lion paths.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    c11 = dist(m0, lion_paths[0](0.0))
    n_needed = 1
    while 2.0 * c11 * 2.0 ** (-n_needed) > tol:
        n_needed += 1
    if n_needed > len(lion_paths):
        raise ValueError(
            f"need {n_needed} lion paths for tolerance {tol}, got {len(lion_paths)}"
        )
    lions0 = [p(0.0) for p in lion_paths[:n_needed]]
    params = derive_params(n_needed, eps, m0, lions0)
    stack = StrategyStack(params, m0, lambda j, tt: lion_paths[j - 1](tt))
    return stack.position(n_needed, t), 2.0 * c11 * 2.0 ** (-n_needed)


# ---------------------------------------------------------------------------
# canned game setup


def standard_lions(m0: Point, n: int, distance: float = 10.0) -> list[Point]:
    return [
        (
            m0[0] + distance * math.cos(2.0 * PI * j / n),
            m0[1] + distance * math.sin(2.0 * PI * j / n),
        )
        for j in range(n)
    ]
