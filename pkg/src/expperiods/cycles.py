"""Rapid-decay integration cycles and their continuation in the parameter.

A rapid-decay cycle is a polyline in the u-plane whose non-compact ends run
into valleys where Re g -> -infinity (at u = infinity, and at u = 0 for the
punctured line).  The basis consists of

* paths between consecutive valleys at infinity,
* paths between consecutive valleys at zero (punctured line),
* one path from a valley at zero to a valley at infinity (punctured line),
* one closed loop around u = 0 (punctured line).

Each cycle carries a symbolic skeleton (radius kind, angle family, unwrapped
angle) from which the concrete polyline is regenerated at any parameter value.
Continuation moves the skeleton angles with the rotation of the relevant
leading coefficient, so cycles deform continuously — including their winding —
rather than jumping between branch choices.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .cohomology import FiberType, ProblemSpec, fiber_basis
from .errors import (
    AtSingularT,
    NonDecayingTail,
    RankZero,
    SingularProximity,
    StepCollision,
)

TWO_PI = 2.0 * math.pi
# maximum angular sweep between realized polyline nodes
_MAX_SWEEP = math.pi / 8.0
# extra decay demanded at cycle endpoints beyond the design tolerance (nats)
_DECAY_MARGIN = 40.0


@dataclass(frozen=True)
class Sector(object):
    """An angular valley sector: rays with |angle - center| <= half_width."""

    index: int
    center: float
    half_width: float

    def contains(self, angle: float) -> bool:
        delta = (angle - self.center + math.pi) % TWO_PI - math.pi
        return abs(delta) <= self.half_width + 1e-12


@dataclass(frozen=True)
class ValleyConfig(object):
    """Valley sectors of Re g at u = infinity and (punctured line) u = 0."""

    t: complex
    at_infinity: tuple
    at_zero: tuple  # empty tuple on the affine line


@dataclass(frozen=True)
class EndTag(object):
    """Where a cycle end lives: a valley sector, or the compact interior."""

    kind: str  # "valley_inf" | "valley_zero" | "interior"
    index: int  # sector index; -1 for interior


@dataclass(frozen=True)
class SkeletonNode(object):
    """Symbolic polyline vertex: a named radius and an unwrapped angle.

    ``family`` says which leading coefficient drags the angle during
    continuation: "inf" (top coefficient), "zero" (bottom coefficient) or
    "fixed" (never moves).
    """

    radius_kind: str  # R_inf | R_zero | rho_w | rho_in | rho_entry | loop
    family: str  # inf | zero | fixed
    angle: float


@dataclass(frozen=True)
class RapidDecayCycle(object):
    nodes: tuple  # realized polyline vertices (complex)
    skeleton: tuple  # SkeletonNode tuple
    start: EndTag
    end: EndTag
    closed: bool
    r_inf: float  # truncation radius at infinity (0.0 if no such end)
    r_zero: float  # truncation radius at zero (0.0 if no such end)
    tol: float  # decay tolerance the truncation radii were designed for


@dataclass(frozen=True)
class CycleBasis(object):
    t: complex
    config: ValleyConfig
    cycles: tuple
    tol: float

    @property
    def rank(self) -> int:
        return len(self.cycles)

    def to_json_dict(self) -> dict:
        def tag(e):
            return {"kind": e.kind, "index": e.index}

        return {
            "t": [self.t.real, self.t.imag],
            "tol": self.tol,
            "config": {
                "at_infinity": [
                    {"index": s.index, "center": s.center, "half_width": s.half_width}
                    for s in self.config.at_infinity
                ],
                "at_zero": [
                    {"index": s.index, "center": s.center, "half_width": s.half_width}
                    for s in self.config.at_zero
                ],
            },
            "cycles": [
                {
                    "start": tag(c.start),
                    "end": tag(c.end),
                    "closed": c.closed,
                    "r_inf": c.r_inf,
                    "r_zero": c.r_zero,
                    "tol": c.tol,
                    "skeleton": [
                        {"radius_kind": n.radius_kind, "family": n.family, "angle": n.angle}
                        for n in c.skeleton
                    ],
                    "nodes": [[z.real, z.imag] for z in c.nodes],
                }
                for c in self.cycles
            ],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "CycleBasis":
        cfg = ValleyConfig(
            t=complex(data["t"][0], data["t"][1]),
            at_infinity=tuple(
                Sector(s["index"], s["center"], s["half_width"])
                for s in data["config"]["at_infinity"]
            ),
            at_zero=tuple(
                Sector(s["index"], s["center"], s["half_width"])
                for s in data["config"]["at_zero"]
            ),
        )
        cycles = []
        for c in data["cycles"]:
            cycles.append(
                RapidDecayCycle(
                    nodes=tuple(complex(x, y) for x, y in c["nodes"]),
                    skeleton=tuple(
                        SkeletonNode(n["radius_kind"], n["family"], n["angle"])
                        for n in c["skeleton"]
                    ),
                    start=EndTag(c["start"]["kind"], c["start"]["index"]),
                    end=EndTag(c["end"]["kind"], c["end"]["index"]),
                    closed=c["closed"],
                    r_inf=c["r_inf"],
                    r_zero=c["r_zero"],
                    tol=c["tol"],
                )
            )
        return CycleBasis(
            t=complex(data["t"][0], data["t"][1]),
            config=cfg,
            cycles=tuple(cycles),
            tol=data["tol"],
        )


# ---------------------------------------------------------------------------
# Valley geometry at a fixed parameter value
# ---------------------------------------------------------------------------


def _leading_coefficients(spec: ProblemSpec, t: complex):
    """(lc_inf, lc_zero) at t; AtSingularT if either vanishes numerically."""
    t = complex(t)
    scale = 1.0 + max(
        (abs(c.eval(t)) for c in spec.g.terms.values()), default=0.0
    )
    lc_inf = complex(spec.g.top_coeff().eval(t))
    if abs(lc_inf) <= 1e-13 * scale:
        raise AtSingularT(f"top leading coefficient vanishes at t={t}")
    lc_zero = None
    if spec.fiber is FiberType.PUNCTURED_LINE:
        lc_zero = complex(spec.g.bottom_coeff().eval(t))
        if abs(lc_zero) <= 1e-13 * scale:
            raise AtSingularT(f"bottom leading coefficient vanishes at t={t}")
    return lc_inf, lc_zero


def _inf_centers(lc: complex, d: int):
    """Valley-center angles at infinity, sorted in [0, 2*pi)."""
    base = (math.pi - cmath.phase(lc)) / d
    return sorted((base + TWO_PI * j / d) % TWO_PI for j in range(d))


def _zero_centers(lc: complex, e: int):
    """Valley-center angles at zero, sorted in [0, 2*pi)."""
    base = (cmath.phase(lc) - math.pi) / e
    return sorted((base + TWO_PI * j / e) % TWO_PI for j in range(e))


def valley_config(spec: ProblemSpec, t: complex) -> ValleyConfig:
    """Valley sectors of e^{g(u, t)} at the given parameter value.

    Raises:
        AtSingularT: if a leading coefficient vanishes at t, so the valley
            structure is not defined.
    """
    t = complex(t)
    lc_inf, lc_zero = _leading_coefficients(spec, t)
    d = spec.top_degree
    inf_sectors = tuple(
        Sector(index=j, center=c, half_width=math.pi / (2 * d))
        for j, c in enumerate(_inf_centers(lc_inf, d))
    )
    zero_sectors = ()
    if lc_zero is not None:
        e = -spec.bottom_order
        zero_sectors = tuple(
            Sector(index=j, center=c, half_width=math.pi / (2 * e))
            for j, c in enumerate(_zero_centers(lc_zero, e))
        )
    return ValleyConfig(t=t, at_infinity=inf_sectors, at_zero=zero_sectors)


class _FiberGeometry(object):
    """Concrete radii and numeric g-evaluation at a fixed parameter value."""

    def __init__(self, spec: ProblemSpec, t: complex, tol: float):
        t = complex(t)
        self.t = t
        self.tol = tol
        self.d = spec.top_degree
        self.lc_inf, self.lc_zero = _leading_coefficients(spec, t)
        self.e = -spec.bottom_order if spec.fiber is FiberType.PUNCTURED_LINE else 0
        self.gmap = spec.g.coeffs_at(t)

        # critical points of g in the fiber (poles cleared)
        gp = spec.g.partial_u()
        lo = min(min(gp.terms), 0)
        hi = max(gp.terms)
        coeffs = [complex(gp.coeff(k).eval(t)) for k in range(hi, lo - 1, -1)]
        self.crit = []
        if len(coeffs) > 1:
            self.crit = [complex(z) for z in np.roots(coeffs)]

        self.rho_w = 1.0 + max((abs(c) for c in self.crit), default=0.0)
        self.rho_entry = 2.0 * self.rho_w
        self.rho_in = min(1.0, min((abs(c) / 2.0 for c in self.crit), default=1.0))
        self.loop_radius = self.rho_in

        target = -math.log(tol) + _DECAY_MARGIN
        self.inf_centers = _inf_centers(self.lc_inf, self.d)
        r = max((2.0 * target / abs(self.lc_inf)) ** (1.0 / self.d), 2.5 * self.rho_w + 1.0)
        for _ in range(200):
            if all(self.eval_g(r * cmath.exp(1j * c)).real <= -target for c in self.inf_centers):
                break
            r *= 1.25
        else:
            raise NonDecayingTail("no radius gives the demanded decay at infinity")
        self.r_inf = r

        self.zero_centers = []
        self.r_zero = 0.0
        if self.lc_zero is not None:
            self.zero_centers = _zero_centers(self.lc_zero, self.e)
            r0 = min(self.rho_in / 2.0, (abs(self.lc_zero) / (2.0 * target)) ** (1.0 / self.e))
            for _ in range(200):
                if all(
                    self.eval_g(r0 * cmath.exp(1j * c)).real <= -target
                    for c in self.zero_centers
                ):
                    break
                r0 *= 0.6
            else:
                raise NonDecayingTail("no radius gives the demanded decay at zero")
            self.r_zero = r0

    def eval_g(self, u: complex) -> complex:
        return sum(c * u ** k for k, c in self.gmap.items())

    def radius_of(self, kind: str) -> float:
        return {
            "R_inf": self.r_inf,
            "R_zero": self.r_zero,
            "rho_w": self.rho_w,
            "rho_in": self.rho_in,
            "rho_entry": self.rho_entry,
            "loop": self.loop_radius,
        }[kind]


def _realize(skeleton, geom: _FiberGeometry, closed: bool):
    """Interpolate a skeleton into polyline vertices (log-radius + angle)."""
    pts = []
    prev = None
    for node in skeleton:
        r = geom.radius_of(node.radius_kind)
        lr = math.log(r)
        if prev is None:
            pts.append(cmath.rect(r, node.angle))
        else:
            plr, pang = prev
            sweep = max(abs(node.angle - pang), abs(lr - plr))
            nsub = max(1, int(math.ceil(sweep / _MAX_SWEEP)))
            for s in range(1, nsub + 1):
                frac = s / nsub
                ang = pang + (node.angle - pang) * frac
                rad = math.exp(plr + (lr - plr) * frac)
                pts.append(cmath.rect(rad, ang))
        prev = (lr, node.angle)
    if closed:
        pts[-1] = pts[0]
    return tuple(pts)


def _segment_distance(a: complex, b: complex, p: complex) -> float:
    """Distance from point p to the segment [a, b]."""
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0.0:
        return abs(p - a)
    s = ((p - a) * ab.conjugate()).real / denom
    s = min(1.0, max(0.0, s))
    return abs(p - (a + s * ab))


def _check_cycle_invariants(cycle: RapidDecayCycle, geom: _FiberGeometry, punctured: bool):
    target = -math.log(cycle.tol)
    for tag, node in ((cycle.start, cycle.nodes[0]), (cycle.end, cycle.nodes[-1])):
        if tag.kind in ("valley_inf", "valley_zero"):
            decay = geom.eval_g(node).real
            assert decay < -target, (
                "cycle endpoint must sit deep in a decay valley "
                f"(Re g = {decay:.3g} at {node})"
            )
    if punctured:
        mind = min(
            _segment_distance(a, b, 0.0)
            for a, b in zip(cycle.nodes, cycle.nodes[1:])
        )
        assert mind > 1e-12, "cycle must stay away from the puncture at u = 0"


def cycle_basis(spec: ProblemSpec, t: complex, tol: float = 1e-12) -> CycleBasis:
    """Construct the standard rapid-decay cycle basis at parameter t.

    The number of cycles equals the cohomology rank.  Truncation radii are
    chosen so that |e^{g}| < tol * e^{-40} at every non-compact endpoint.

    Raises:
        RankZero: if the cohomology rank is zero (no cycles to build).
        AtSingularT: if a leading coefficient vanishes at t.
    """
    t = complex(t)
    rank = fiber_basis(spec).rank
    if rank == 0:
        raise RankZero("the family has rank zero; there is no cycle basis")
    geom = _FiberGeometry(spec, t, tol)
    cfg = valley_config(spec, t)
    punctured = spec.fiber is FiberType.PUNCTURED_LINE
    d = spec.top_degree
    ic = [s.center for s in cfg.at_infinity]
    zc = [s.center for s in cfg.at_zero]

    cycles = []

    def make(skeleton, start, end, closed=False, r_inf=0.0, r_zero=0.0):
        nodes = _realize(skeleton, geom, closed)
        cyc = RapidDecayCycle(
            nodes=nodes,
            skeleton=tuple(skeleton),
            start=start,
            end=end,
            closed=closed,
            r_inf=r_inf,
            r_zero=r_zero,
            tol=tol,
        )
        _check_cycle_invariants(cyc, geom, punctured)
        cycles.append(cyc)

    if not punctured:
        pairs = [(d - 1, 0)] + [(j - 1, j) for j in range(1, d - 1)]
    else:
        pairs = [(j - 1, j) for j in range(1, d)]
    for i0, i1 in pairs:
        a = ic[i0]
        b = ic[i1] + (TWO_PI if i1 <= i0 else 0.0)
        make(
            [
                SkeletonNode("R_inf", "inf", a),
                SkeletonNode("rho_entry", "inf", a),
                SkeletonNode("rho_w", "inf", 0.5 * (a + b)),
                SkeletonNode("rho_entry", "inf", b),
                SkeletonNode("R_inf", "inf", b),
            ],
            EndTag("valley_inf", i0),
            EndTag("valley_inf", i1),
            r_inf=geom.r_inf,
        )

    if punctured:
        e = -spec.bottom_order
        for j in range(1, e):
            a, b = zc[j - 1], zc[j]
            make(
                [
                    SkeletonNode("R_zero", "zero", a),
                    SkeletonNode("rho_in", "zero", a),
                    SkeletonNode("rho_in", "zero", b),
                    SkeletonNode("R_zero", "zero", b),
                ],
                EndTag("valley_zero", j - 1),
                EndTag("valley_zero", j),
                r_zero=geom.r_zero,
            )
        # one path from a valley at zero to a valley at infinity
        phi = zc[0]
        delta = (ic[0] - phi + math.pi) % TWO_PI - math.pi
        if delta <= -math.pi + 1e-9:
            delta += TWO_PI
        theta = phi + delta
        make(
            [
                SkeletonNode("R_zero", "zero", phi),
                SkeletonNode("rho_in", "zero", phi),
                SkeletonNode("rho_entry", "inf", theta),
                SkeletonNode("R_inf", "inf", theta),
            ],
            EndTag("valley_zero", 0),
            EndTag("valley_inf", 0),
            r_inf=geom.r_inf,
            r_zero=geom.r_zero,
        )
        # counterclockwise loop around the puncture
        make(
            [SkeletonNode("loop", "fixed", 0.0), SkeletonNode("loop", "fixed", TWO_PI)],
            EndTag("interior", -1),
            EndTag("interior", -1),
            closed=True,
        )

    assert len(cycles) == rank, "cycle count must match the cohomology rank"
    return CycleBasis(t=t, config=cfg, cycles=tuple(cycles), tol=tol)


# ---------------------------------------------------------------------------
# Continuation of a basis along a parameter path
# ---------------------------------------------------------------------------


def track_cycles(spec: ProblemSpec, basis: CycleBasis, path, singular=None) -> CycleBasis:
    """Continue a cycle basis along a polyline path in the t-plane.

    The angles of each valley family rotate with -arg(lc_inf)/d and
    +arg(lc_zero)/e respectively; steps are bisected until each leading
    coefficient turns by at most pi/4 per step, so the argument is tracked
    continuously and windings accumulate geometrically.

    Args:
        singular: optional SingularSet; legs must keep a distance of at least
            twice the certified radius from every *hard* ball (vanishing
            leading coefficients and connection poles).  Balls that only mark
            critical-point degeneration are not obstacles to continuation.

    Raises:
        SingularProximity: if the path passes too close to a singular ball.
        StepCollision: if step bisection fails to converge.
        AtSingularT: if a leading coefficient vanishes along the path.
    """
    path = [complex(p) for p in path]
    if not path:
        return basis
    if abs(path[0] - basis.t) > 1e-9 * (1.0 + abs(basis.t)):
        raise ValueError("continuation path must start at the basis parameter")

    d = spec.top_degree
    e = -spec.bottom_order if spec.fiber is FiberType.PUNCTURED_LINE else 0

    def lcs(t):
        return _leading_coefficients(spec, t)

    drift_inf = 0.0
    drift_zero = 0.0
    cur = path[0]
    cur_lc = lcs(cur)
    steps = 0
    for target in path[1:]:
        stack = [(cur, target, cur_lc, 0)]
        while stack:
            ta, tb, lca, depth = stack.pop()
            if singular is not None:
                for ball in singular.hard_balls():
                    if _segment_distance(ta, tb, ball.center) <= 2.0 * ball.radius:
                        raise SingularProximity(
                            f"path leg [{ta}, {tb}] passes within twice the "
                            f"certified radius of the singular ball at {ball.center}"
                        )
            lcb = lcs(tb)
            da = cmath.phase(lcb[0] / lca[0])
            dz = cmath.phase(lcb[1] / lca[1]) if e else 0.0
            if max(abs(da), abs(dz)) > math.pi / 4.0:
                if depth >= 60:
                    raise StepCollision(
                        "leading-coefficient rotation does not settle under bisection"
                    )
                mid = 0.5 * (ta + tb)
                stack.append((mid, tb, lcs(mid), depth + 1))
                stack.append((ta, mid, lca, depth + 1))
                continue
            drift_inf += -da / d
            if e:
                drift_zero += dz / e
            steps += 1
            if steps > 20000:
                raise StepCollision("continuation exceeded the step budget")
            cur, cur_lc = tb, lcb

    t1 = path[-1]
    geom = _FiberGeometry(spec, t1, basis.tol)
    punctured = spec.fiber is FiberType.PUNCTURED_LINE

    def shift(angle: float, family: str) -> float:
        if family == "inf":
            return angle + drift_inf
        if family == "zero":
            return angle + drift_zero
        return angle

    new_cycles = []
    for c in basis.cycles:
        skel = tuple(
            SkeletonNode(n.radius_kind, n.family, shift(n.angle, n.family))
            for n in c.skeleton
        )
        nodes = _realize(skel, geom, c.closed)
        nc = RapidDecayCycle(
            nodes=nodes,
            skeleton=skel,
            start=c.start,
            end=c.end,
            closed=c.closed,
            r_inf=geom.r_inf if c.r_inf else 0.0,
            r_zero=geom.r_zero if c.r_zero else 0.0,
            tol=c.tol,
        )
        _check_cycle_invariants(nc, geom, punctured)
        new_cycles.append(nc)

    cfg = ValleyConfig(
        t=t1,
        at_infinity=tuple(
            replace(s, center=s.center + drift_inf) for s in basis.config.at_infinity
        ),
        at_zero=tuple(
            replace(s, center=s.center + drift_zero) for s in basis.config.at_zero
        ),
    )
    return CycleBasis(t=t1, config=cfg, cycles=tuple(new_cycles), tol=basis.tol)
