"""Exact Lorentzian geometry of double cones in n-dimensional Minkowski space.

Signature is (-,+,...,+); all coordinates are rationals kept in lowest
terms, so causal predicates, inclusion tests, light-cone intersections and
quadratic positivity certificates are decided exactly.  Light-cone roots
are generally irrational: they are rounded to nearby rationals on the
timelike side and every downstream condition, being a strict inequality,
is re-verified exactly after rounding (with retries at finer resolution).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .reports import PreconditionError, SchemaError
from .linalg import format_rational, parse_rational

__all__ = [
    "MPoint",
    "DoubleCone",
    "SpatialConvex",
    "WitnessDiagram",
    "NoHit",
    "ExhaustedRetries",
    "LightconeHit",
    "sq_interval",
    "minkowski_sq",
    "minkowski_inner",
    "chron_after",
    "causally_precedes",
    "cone_contains",
    "cone_included",
    "causally_disjoint",
    "in_closure",
    "outside_causal_hull",
    "project_cone",
    "check_projection_inequality",
    "segment_lightcone_hit",
    "build_witness",
    "cauchy_lift",
    "homotopy_point",
    "certify_segment_spacelike",
    "segment_spacelike_data",
    "point_to_json",
    "point_from_json",
    "cone_to_json",
    "cone_from_json",
]

_F = Fraction


class NoHit(ValueError):
    """The segment does not meet the requested light-cone branch."""


class ExhaustedRetries(RuntimeError):
    """No verified witness diagram found within the retry budget."""


@dataclass(frozen=True)
class MPoint:
    """Point (or difference vector) of M^n: time coordinate and spatial tuple."""

    t: Fraction
    x: tuple[Fraction, ...]

    @staticmethod
    def of(t, *xs) -> "MPoint":
        return MPoint(_F(t), tuple(_F(v) for v in xs))

    @property
    def dim(self) -> int:
        return 1 + len(self.x)

    def __add__(self, other: "MPoint") -> "MPoint":
        self._check(other)
        return MPoint(self.t + other.t, tuple(a + b for a, b in zip(self.x, other.x)))

    def __sub__(self, other: "MPoint") -> "MPoint":
        self._check(other)
        return MPoint(self.t - other.t, tuple(a - b for a, b in zip(self.x, other.x)))

    def scale(self, c) -> "MPoint":
        c = _F(c)
        return MPoint(self.t * c, tuple(v * c for v in self.x))

    def _check(self, other: "MPoint") -> None:
        if len(self.x) != len(other.x):
            raise PreconditionError("dimension mismatch")

    def __str__(self) -> str:
        xs = ";".join(format_rational(v) for v in self.x)
        return f"({format_rational(self.t)};{xs})"


def minkowski_inner(u: MPoint, v: MPoint) -> Fraction:
    u._check(v)
    return -u.t * v.t + sum(a * b for a, b in zip(u.x, v.x))


def minkowski_sq(v: MPoint) -> Fraction:
    return minkowski_inner(v, v)


def sq_interval(p: MPoint, q: MPoint) -> Fraction:
    """Squared Minkowski interval -(dt)^2 + sum (dx_i)^2, exact."""
    return minkowski_sq(q - p)


def chron_after(q: MPoint, p: MPoint) -> bool:
    """q in I+({p}): strictly timelike separated and later."""
    return q.t > p.t and sq_interval(p, q) < 0


def causally_precedes(p: MPoint, q: MPoint) -> bool:
    """p in J-({q}): causal (timelike or null) and not later."""
    return p.t <= q.t and sq_interval(p, q) <= 0


@dataclass(frozen=True)
class DoubleCone:
    """Open region I-({p+}) cap I+({p-}); tips must be chronologically related."""

    pminus: MPoint
    pplus: MPoint

    def __post_init__(self):
        self.pminus._check(self.pplus)
        if not chron_after(self.pplus, self.pminus):
            raise PreconditionError(
                f"future tip {self.pplus} is not chronologically after {self.pminus}"
            )

    @property
    def dim(self) -> int:
        return self.pminus.dim

    @property
    def center(self) -> MPoint:
        return self.pminus + (self.pplus - self.pminus).scale(_F(1, 2))

    @property
    def axis(self) -> MPoint:
        return self.pplus - self.pminus

    def __str__(self) -> str:
        return f"Cone[{self.pminus}..{self.pplus}]"


def cone_contains(cone: DoubleCone, p: MPoint) -> bool:
    return chron_after(cone.pplus, p) and chron_after(p, cone.pminus)


def cone_included(inner: DoubleCone, outer: DoubleCone) -> bool:
    """Tip criterion for subset inclusion of open double cones."""
    return causally_precedes(inner.pplus, outer.pplus) and causally_precedes(
        outer.pminus, inner.pminus
    )


def causally_disjoint(u1: DoubleCone, u2: DoubleCone) -> bool:
    """Tip criterion for J(U1) cap U2 = empty; symmetric by its form."""
    return not chron_after(u2.pplus, u1.pminus) and not chron_after(
        u1.pplus, u2.pminus
    )


def in_closure(cone: DoubleCone, p: MPoint) -> bool:
    """p in cl(U) = J-({p+}) cap J+({p-})."""
    return causally_precedes(p, cone.pplus) and causally_precedes(cone.pminus, p)


def outside_causal_hull(cone: DoubleCone, p: MPoint) -> bool:
    """p outside J(cl U) = J+({p-}) union J-({p+})."""
    in_future = p.t >= cone.pminus.t and sq_interval(cone.pminus, p) <= 0
    in_past = p.t <= cone.pplus.t and sq_interval(p, cone.pplus) <= 0
    return not in_future and not in_past


# ---------------------------------------------------------------------------
# Spatial shadows
# ---------------------------------------------------------------------------


def _euclid_sq(x: tuple[Fraction, ...], y: tuple[Fraction, ...]) -> Fraction:
    if len(x) != len(y):
        raise PreconditionError("dimension mismatch")
    return sum((a - b) ** 2 for a, b in zip(x, y))


def _sqrt_sum_lt(a2: Fraction, b2: Fraction, c: Fraction) -> bool:
    """sqrt(a2) + sqrt(b2) < c decided exactly by staged squaring."""
    if c <= 0:
        return False
    rhs = c * c - a2 - b2
    if rhs <= 0:
        return False
    return 4 * a2 * b2 < rhs * rhs


@dataclass(frozen=True)
class SpatialConvex:
    """Convex open subset of the spatial slice with a marked interior point.

    kind "ball": {x : |x - center| < radius}; kind "shadow": the projected
    double cone {x : |x - focus_plus| + |x - focus_minus| < length}.
    """

    kind: str
    marked: tuple[Fraction, ...]
    center: tuple[Fraction, ...] | None = None
    radius: Fraction | None = None
    focus_minus: tuple[Fraction, ...] | None = None
    focus_plus: tuple[Fraction, ...] | None = None
    length: Fraction | None = None

    def __post_init__(self):
        if self.kind == "ball":
            if self.radius is None or self.radius <= 0 or self.center is None:
                raise PreconditionError("ball needs a positive radius and a center")
        elif self.kind == "shadow":
            if self.focus_minus is None or self.focus_plus is None or self.length is None:
                raise PreconditionError("shadow needs both foci and a length")
            if not self.length ** 2 > _euclid_sq(self.focus_plus, self.focus_minus):
                raise PreconditionError("shadow is empty: length too small for foci")
        else:
            raise PreconditionError(f"unknown spatial region kind {self.kind}")
        if not self.contains(self.marked):
            raise PreconditionError("marked point lies outside the region")

    @staticmethod
    def ball(center, radius, marked=None) -> "SpatialConvex":
        center = tuple(_F(v) for v in center)
        return SpatialConvex(
            kind="ball",
            marked=tuple(_F(v) for v in (marked if marked is not None else center)),
            center=center,
            radius=_F(radius),
        )

    def contains(self, x: Sequence[Fraction]) -> bool:
        x = tuple(_F(v) for v in x)
        if self.kind == "ball":
            return _euclid_sq(x, self.center) < self.radius ** 2
        return _sqrt_sum_lt(
            _euclid_sq(x, self.focus_plus),
            _euclid_sq(x, self.focus_minus),
            self.length,
        )

    def to_json(self) -> dict:
        doc = {"kind": self.kind, "marked": [format_rational(v) for v in self.marked]}
        if self.kind == "ball":
            doc["center"] = [format_rational(v) for v in self.center]
            doc["radius"] = format_rational(self.radius)
        else:
            doc["focus_minus"] = [format_rational(v) for v in self.focus_minus]
            doc["focus_plus"] = [format_rational(v) for v in self.focus_plus]
            doc["length"] = format_rational(self.length)
        return doc


def project_cone(cone: DoubleCone) -> SpatialConvex:
    """Spatial image of a double cone: the open region where the two foci
    (tip projections) are jointly closer than the cone height; the marked
    point is the projected center."""
    xm, xp = cone.pminus.x, cone.pplus.x
    return SpatialConvex(
        kind="shadow",
        marked=tuple((a + b) / 2 for a, b in zip(xm, xp)),
        focus_minus=xm,
        focus_plus=xp,
        length=cone.pplus.t - cone.pminus.t,
    )


def check_projection_inequality(p: MPoint, q: MPoint) -> bool:
    """sq_interval(p,q) <= squared Euclidean distance of the projections."""
    return sq_interval(p, q) <= _euclid_sq(p.x, q.x)


# ---------------------------------------------------------------------------
# Light-cone intersections
# ---------------------------------------------------------------------------


def _rational_sqrt(f: Fraction) -> Fraction | None:
    if f < 0:
        return None
    n, d = f.numerator, f.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return _F(rn, rd)
    return None


def _sqrt_floor(f: Fraction, k: int) -> Fraction:
    """Dyadic lower bound of sqrt(f) within 2^(1-k)."""
    if f <= 0:
        return _F(0)
    scaled = (f.numerator << (2 * k)) // f.denominator
    return _F(math.isqrt(scaled), 1 << k)


@dataclass(frozen=True)
class LightconeHit:
    point: MPoint
    s: Fraction
    exact: bool
    certificate: dict


def segment_lightcone_hit(
    a: MPoint,
    b: MPoint,
    tip: MPoint,
    branch: str = "future",
    denom_log2: int = 16,
) -> LightconeHit:
    """Intersection of the segment a->b with the light cone of `tip`.

    The intersection parameter solves an exact rational quadratic; branch
    "future" selects the larger root, "past" the smaller.  When the root is
    irrational the returned point is a nearby rational on the timelike side
    of the cone (sq_interval to the tip strictly negative), certified in
    the result; all strict inequalities downstream survive this rounding.
    """
    if branch not in ("future", "past"):
        raise PreconditionError("branch must be 'future' or 'past'")
    d = a - tip
    e = b - a
    A = minkowski_sq(e)
    if A <= 0:
        raise PreconditionError("segment direction must be spacelike")
    B = minkowski_inner(d, e)
    C = minkowski_sq(d)
    disc = B * B - A * C
    if disc < 0:
        raise NoHit("segment misses the light cone: negative discriminant")
    sign = 1 if branch == "future" else -1
    root = _rational_sqrt(disc)
    if root is not None:
        s = (-B + sign * root) / A
        if not (0 <= s <= 1):
            raise NoHit(f"root {s} outside the segment")
        pt = a + e.scale(s)
        q_at = A * s * s + 2 * B * s + C
        return LightconeHit(
            point=pt,
            s=s,
            exact=True,
            certificate={"exact": True, "sq_to_tip": format_rational(q_at)},
        )
    # irrational root: rational approximation on the timelike side (q < 0)
    for k in (denom_log2, denom_log2 + 8, denom_log2 + 16, denom_log2 + 32):
        approx = _sqrt_floor(disc, k)
        s0 = (-B + sign * approx) / A
        step = _F(sign, 1 << k) / A
        for j in range(4):
            s = s0 - step * j
            if not (0 < s < 1):
                continue
            q_at = A * s * s + 2 * B * s + C
            if q_at < 0:
                return LightconeHit(
                    point=a + e.scale(s),
                    s=s,
                    exact=False,
                    certificate={
                        "exact": False,
                        "sq_to_tip": format_rational(q_at),
                        "side": "timelike",
                        "denominator_log2": k,
                    },
                )
    raise NoHit("could not certify a timelike-side rational approximation")


# ---------------------------------------------------------------------------
# Witness construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessDiagram:
    """Regions witnessing the extension property for a causally disjoint
    pair inside a containing cone, with exact per-invariant verdicts."""

    V1: DoubleCone
    V2: DoubleCone
    W: DoubleCone
    U1p: DoubleCone
    U2p: DoubleCone
    trace: dict = field(default_factory=dict, compare=False)

    def verify(
        self, u1: DoubleCone, u2: DoubleCone, utilde: DoubleCone
    ) -> dict[str, bool]:
        checks = {
            "U1_in_V1": cone_included(u1, self.V1),
            "U2_in_V2": cone_included(u2, self.V2),
            "Ut_in_W": cone_included(utilde, self.W),
            "V1_in_W": cone_included(self.V1, self.W),
            "V2_in_W": cone_included(self.V2, self.W),
            "V1_perp_V2": causally_disjoint(self.V1, self.V2),
            "U1p_in_V1": cone_included(self.U1p, self.V1),
            "U2p_in_V2": cone_included(self.U2p, self.V2),
            "U1p_perp_Ut": causally_disjoint(self.U1p, utilde),
            "U2p_perp_Ut": causally_disjoint(self.U2p, utilde),
            # implied by the above on disjointness models; checked defensively
            "U1p_perp_U1": causally_disjoint(self.U1p, u1),
            "U2p_perp_U2": causally_disjoint(self.U2p, u2),
        }
        return checks

    def verified(self, u1, u2, utilde) -> bool:
        return all(self.verify(u1, u2, utilde).values())

    def to_json(self, u1=None, u2=None, utilde=None) -> dict:
        doc = {
            "V1": cone_to_json(self.V1),
            "V2": cone_to_json(self.V2),
            "W": cone_to_json(self.W),
            "U1p": cone_to_json(self.U1p),
            "U2p": cone_to_json(self.U2p),
        }
        if u1 is not None:
            doc["invariants"] = self.verify(u1, u2, utilde)
        if self.trace:
            doc["trace"] = self.trace
        return doc


def _ray_exit_closure(
    cone: DoubleCone, base: MPoint, direction: MPoint, k: int
) -> Fraction:
    """Smallest dyadic multiple of 2^-k along base + s*direction that exits
    cl(cone); the ray starts inside, so the exit is a single crossing."""
    lo, hi = _F(0), _F(1)
    guard = 0
    while in_closure(cone, base + direction.scale(hi)):
        lo, hi = hi, hi * 2
        guard += 1
        if guard > 64:
            raise ExhaustedRetries("ray never exits the closure")
    grid = _F(1, 1 << k)
    while hi - lo > grid:
        mid = (lo + hi) / 2
        if in_closure(cone, base + direction.scale(mid)):
            lo = mid
        else:
            hi = mid
    # snap hi to the dyadic grid just beyond the crossing
    num = hi / grid
    hi = grid * (num.numerator // num.denominator)
    while in_closure(cone, base + direction.scale(hi)):
        hi += grid
    return hi


def _ray_exit_hull(
    cone: DoubleCone, base: MPoint, spatial_dir: tuple[Fraction, ...], k: int
) -> Fraction | None:
    """Dyadic parameter r with base + (0, r*dir) outside J(cl cone).

    Along a purely spatial ray both causal lobes cut out bounded intervals,
    so beyond their upper roots the predicate stays true; doubling plus
    bisection finds a verified boundary point."""
    direction = MPoint(_F(0), spatial_dir)
    lo, hi = _F(0), _F(1)
    guard = 0
    while not outside_causal_hull(cone, base + direction.scale(hi)):
        lo, hi = hi, hi * 2
        guard += 1
        if guard > 48:
            return None
    grid = _F(1, 1 << (k + 3))
    while hi - lo > grid:
        mid = (lo + hi) / 2
        if outside_causal_hull(cone, base + direction.scale(mid)):
            hi = mid
        else:
            lo = mid
    return hi


def build_witness(
    u1: DoubleCone,
    u2: DoubleCone,
    utilde: DoubleCone,
    retry_budget: int = 8,
) -> WitnessDiagram:
    """Geometric witness for the extension property of a causally disjoint
    cospan U1, U2 inside Utilde.

    The spacelike segment between the two centers meets each tip's light
    cone once; pushing the tips outward along (roundings of) those null
    directions produces enlarged cones V1, V2 that stay causally disjoint,
    an enclosing cone W, and primed cones U1', U2' placed in the causal
    complement of Utilde inside V1, V2.  Every invariant is re-verified
    exactly before returning; failures retry with finer dyadic resolution.
    """
    for u, nm in ((u1, "U1"), (u2, "U2")):
        if not cone_included(u, utilde):
            raise PreconditionError(f"{nm} is not included in the containing cone")
    if not causally_disjoint(u1, u2):
        raise PreconditionError("U1 and U2 are not causally disjoint")

    a, b = u1.center, u2.center
    failures = []
    for round_idx in range(retry_budget):
        k = 6 + 2 * round_idx
        # smallest push past the closure exit that verifies wins; larger
        # factors enlarge V1, V2 along the same (near-)null directions,
        # which leaves their facing boundaries essentially in place
        for push in (0, 1, 2, 4, 8):
            try:
                diagram = _attempt_witness(u1, u2, utilde, a, b, k, push)
            except (NoHit, PreconditionError, ExhaustedRetries) as exc:
                failures.append(f"round {round_idx} push {push}: {exc}")
                continue
            if diagram is None:
                failures.append(
                    f"round {round_idx} push {push}: construction fell outside a region"
                )
                continue
            if diagram.verified(u1, u2, utilde):
                return diagram
            bad = [kk for kk, v in diagram.verify(u1, u2, utilde).items() if not v]
            failures.append(f"round {round_idx} push {push}: failed invariants {bad}")
    raise ExhaustedRetries(
        "no verified witness within the retry budget: " + "; ".join(failures[-6:])
    )


def _attempt_witness(u1, u2, utilde, a, b, k, push=0) -> WitnessDiagram | None:
    n_spatial = len(a.x)
    trace: dict = {"denominator_log2": k, "push": push}
    scale_time = (utilde.pplus.t - utilde.pminus.t) / 4

    def hits_for(cone: DoubleCone, branch: str):
        hp = segment_lightcone_hit(a, b, cone.pplus, branch=branch, denom_log2=k)
        hm = segment_lightcone_hit(a, b, cone.pminus, branch=branch, denom_log2=k)
        return hp, hm

    h1p, h1m = hits_for(u1, "future")
    h2p, h2m = hits_for(u2, "past")

    # the push direction tip - hit must be future/past causal: exact hits give
    # null directions, timelike-side roundings give timelike ones; either way
    # displacing a tip along its own causal direction only enlarges the cone
    for hit, tip, future in (
        (h1p, u1.pplus, True),
        (h1m, u1.pminus, False),
        (h2p, u2.pplus, True),
        (h2m, u2.pminus, False),
    ):
        causal = sq_interval(hit.point, tip) <= 0
        oriented = tip.t > hit.point.t if future else tip.t < hit.point.t
        if not (causal and oriented):
            return None

    def pushed_tip(hit: LightconeHit, tip: MPoint, label: str) -> MPoint:
        direction = tip - hit.point  # timelike after rounding; exact null when exact
        lam = _ray_exit_closure(utilde, tip, direction, k)
        if push:
            lam = lam + push * scale_time / abs(direction.t)
        trace[label] = format_rational(1 + lam)  # parameter along the half-line
        return tip + direction.scale(lam)

    l1p = pushed_tip(h1p, u1.pplus, "exit_H1_plus")
    l1m = pushed_tip(h1m, u1.pminus, "exit_H1_minus")
    l2p = pushed_tip(h2p, u2.pplus, "exit_H2_plus")
    l2m = pushed_tip(h2m, u2.pminus, "exit_H2_minus")

    v1 = DoubleCone(l1m, l1p)
    v2 = DoubleCone(l2m, l2p)

    # enclosing cone around Utilde, V1, V2 via a 1-norm time bound
    cones = (utilde, v1, v2)
    cx = utilde.center.x
    tp = max(
        c.pplus.t + sum(abs(xi - ci) for xi, ci in zip(c.pplus.x, cx)) for c in cones
    ) + 1
    tm = min(
        c.pminus.t - sum(abs(xi - ci) for xi, ci in zip(c.pminus.x, cx)) for c in cones
    ) - 1
    w = DoubleCone(MPoint(tm, cx), MPoint(tp, cx))

    # primed regions: walk from each V_i center away from the other cone,
    # leave the causal hull of Utilde, then shrink an upright cone into place
    def primed(vi: DoubleCone, own: DoubleCone, other: DoubleCone, label: str):
        base = vi.center
        dirs = []
        d_main = tuple(p - q for p, q in zip(own.center.x, other.center.x))
        if any(d_main):
            dirs.append(d_main)
        d_alt = tuple(p - q for p, q in zip(base.x, utilde.center.x))
        if any(d_alt):
            dirs.append(d_alt)
        grid = _F(1, 1 << (k + 3))
        for d in dirs:
            r0 = _ray_exit_hull(utilde, base, d, k)
            if r0 is None:
                continue
            for j in range(4):  # scan slightly past the hull boundary
                r = r0 + j * grid
                xi = base + MPoint(_F(0), d).scale(r)
                if not cone_contains(vi, xi) or not outside_causal_hull(utilde, xi):
                    continue
                eps = (vi.pplus.t - vi.pminus.t) / 8
                for _ in range(28):
                    up = MPoint(eps, tuple(_F(0) for _ in range(n_spatial)))
                    cand = DoubleCone(xi - up, xi + up)
                    if cone_included(cand, vi) and causally_disjoint(cand, utilde):
                        trace[label] = format_rational(r)
                        return cand
                    eps /= 2
        return None

    u1p = primed(v1, u1, u2, "primed_1_offset")
    if u1p is None:
        return None
    u2p = primed(v2, u2, u1, "primed_2_offset")
    if u2p is None:
        return None
    return WitnessDiagram(V1=v1, V2=v2, W=w, U1p=u1p, U2p=u2p, trace=trace)


# ---------------------------------------------------------------------------
# Cauchy surface, section, homotopy
# ---------------------------------------------------------------------------


def cauchy_lift(cone: DoubleCone, q: Sequence[Fraction]) -> MPoint:
    """The unique point of the canonical Cauchy surface over the spatial
    point q: Minkowski-orthogonal to the tip axis through the center."""
    q = tuple(_F(v) for v in q)
    shadow = project_cone(cone)
    if not shadow.contains(q):
        raise PreconditionError(f"spatial point {q} outside the cone shadow")
    center = cone.center
    axis = cone.axis
    dt = axis.t
    t = center.t + sum((qi - ci) * di for qi, ci, di in zip(q, center.x, axis.x)) / dt
    p = MPoint(t, q)
    assert minkowski_inner(p - center, axis) == 0
    assert cone_contains(cone, p), "section left the cone"
    return p


def homotopy_point(cone: DoubleCone, p: MPoint, s) -> MPoint:
    """Straight-line homotopy between the Cauchy projection (s=0) and p (s=1)."""
    s = _F(s)
    if not 0 <= s <= 1:
        raise PreconditionError("homotopy parameter must lie in [0,1]")
    if not cone_contains(cone, p):
        raise PreconditionError("point outside the cone")
    base = cauchy_lift(cone, p.x)
    return base + (p - base).scale(s)


def segment_spacelike_data(v: MPoint, w: MPoint) -> dict:
    """Quadratic data for ||(1-s)v + s w||^2 on [0,1] and the exact verdict."""
    sv, sw = minkowski_sq(v), minkowski_sq(w)
    if sv <= 0 or sw <= 0:
        raise PreconditionError("both vectors must be spacelike")
    diff = w - v
    a = minkowski_sq(diff)
    bb = 2 * minkowski_inner(v, diff)
    c = sv
    data = {
        "a": format_rational(a),
        "b": format_rational(bb),
        "c": format_rational(c),
        "q0": format_rational(c),
        "q1": format_rational(sw),
    }
    if a <= 0:
        # concave or linear: minimum at the endpoints, both positive
        data["vertex"] = None
        data["positive"] = True
        return data
    vertex = _F(-bb, 2 * a)
    data["vertex"] = format_rational(vertex)
    if 0 < vertex < 1:
        vval = c - _F(bb * bb, 4 * a)
        data["vertex_value"] = format_rational(vval)
        data["positive"] = vval > 0
    else:
        data["positive"] = True
    return data


def certify_segment_spacelike(v: MPoint, w: MPoint) -> bool:
    """Exactly decide ||(1-s)v + s w||^2 > 0 for all s in [0,1]."""
    return segment_spacelike_data(v, w)["positive"]


# ---------------------------------------------------------------------------
# JSON interchange: rationals as "p/q" strings
# ---------------------------------------------------------------------------


def point_to_json(p: MPoint) -> dict:
    return {"t": format_rational(p.t), "x": [format_rational(v) for v in p.x]}


def point_from_json(doc: dict) -> MPoint:
    try:
        return MPoint(parse_rational(doc["t"]), tuple(parse_rational(v) for v in doc["x"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed point document: {exc}") from exc


def cone_to_json(cone: DoubleCone) -> dict:
    return {"pminus": point_to_json(cone.pminus), "pplus": point_to_json(cone.pplus)}


def cone_from_json(doc: dict) -> DoubleCone:
    try:
        return DoubleCone(point_from_json(doc["pminus"]), point_from_json(doc["pplus"]))
    except (KeyError, TypeError, ValueError) as exc:
        # PreconditionError (invalid tips) is a ValueError: bad files exit as schema problems
        raise SchemaError(f"malformed cone document: {exc}") from exc
