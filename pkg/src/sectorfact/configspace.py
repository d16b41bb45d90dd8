"""Configuration spaces of (causally) disjoint points in double cones.

Configurations live inside a fixed double cone with pairwise spacelike
points; the spatial counterpart has pairwise distinct points inside the
cone's shadow.  The projection and Cauchy-surface section are exact, and
the straight-line homotopy between a configuration and its surface
projection is certified spacelike for all intermediate times by exact
quadratic sign analysis (not sampling).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .minkowski import (
    DoubleCone,
    MPoint,
    SpatialConvex,
    cauchy_lift,
    cone_contains,
    certify_segment_spacelike,
    point_to_json,
    project_cone,
    segment_spacelike_data,
    sq_interval,
    _euclid_sq,
)
from .linalg import format_rational
from .reports import PreconditionError

__all__ = [
    "CausalConfig",
    "SpatialConfig",
    "SamplingExhausted",
    "sample_causal_config",
    "sample_spatial_config",
    "project_config",
    "lift_config",
    "certify_homotopy",
    "CertReport",
]

_F = Fraction


class SamplingExhausted(RuntimeError):
    """Rejection sampling hit its budget before filling the configuration."""


@dataclass(frozen=True)
class CausalConfig:
    """Tuple of pairwise causally disjoint points in a double cone."""

    cone: DoubleCone
    points: tuple[MPoint, ...]

    def __post_init__(self):
        for p in self.points:
            if not cone_contains(self.cone, p):
                raise PreconditionError(f"configuration point {p} outside the cone")
        for i in range(len(self.points)):
            for j in range(i + 1, len(self.points)):
                if not sq_interval(self.points[i], self.points[j]) > 0:
                    raise PreconditionError(
                        f"points {i} and {j} are not causally disjoint"
                    )

    @property
    def size(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        from .minkowski import cone_to_json

        return {
            "cone": cone_to_json(self.cone),
            "points": [point_to_json(p) for p in self.points],
        }


@dataclass(frozen=True)
class SpatialConfig:
    """Tuple of pairwise distinct points in a convex spatial region."""

    shadow: SpatialConvex
    points: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        for q in self.points:
            if not self.shadow.contains(q):
                raise PreconditionError(f"spatial point {q} outside the region")
        for i in range(len(self.points)):
            for j in range(i + 1, len(self.points)):
                if self.points[i] == self.points[j]:
                    raise PreconditionError(f"points {i} and {j} coincide")

    @property
    def size(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        return {
            "shadow": self.shadow.to_json(),
            "points": [[format_rational(v) for v in q] for q in self.points],
        }


def _grid_point_in_cone(
    cone: DoubleCone, rng: random.Random, denom: int
) -> MPoint | None:
    """One rejection draw from the rational grid inside the cone's box."""
    half = (cone.pplus.t - cone.pminus.t) / 2
    c = cone.center
    t = c.t + _F(rng.randint(-denom, denom), denom) * half
    xs = tuple(
        ci + _F(rng.randint(-denom, denom), denom) * half for ci in c.x
    )
    p = MPoint(t, xs)
    return p if cone_contains(cone, p) else None


def sample_causal_config(
    cone: DoubleCone, m: int, seed: int, denom: int = 64, budget: int = 20000
) -> CausalConfig:
    """Rejection-sample m pairwise causally disjoint points, deterministically
    per seed; the grid denominator doubles (up to 1024) when the budget runs
    out at the current resolution."""
    if m < 0:
        raise PreconditionError("configuration size must be nonnegative")
    rng = random.Random(seed)
    d = denom
    while True:
        points: list[MPoint] = []
        for _ in range(budget):
            if len(points) == m:
                break
            p = _grid_point_in_cone(cone, rng, d)
            if p is None:
                continue
            if all(sq_interval(p, q) > 0 for q in points):
                points.append(p)
        if len(points) == m:
            return CausalConfig(cone=cone, points=tuple(points))
        if d >= 1024:
            raise SamplingExhausted(
                f"could not place {m} causally disjoint points (denominator {d})"
            )
        d *= 2


def sample_spatial_config(
    cone: DoubleCone, m: int, seed: int, denom: int = 64, budget: int = 20000
) -> SpatialConfig:
    """Rejection-sample m distinct spatial points in the cone's shadow."""
    if m < 0:
        raise PreconditionError("configuration size must be nonnegative")
    shadow = project_cone(cone)
    rng = random.Random(seed)
    half = (cone.pplus.t - cone.pminus.t) / 2
    marked = shadow.marked
    d = denom
    while True:
        points: list[tuple[Fraction, ...]] = []
        for _ in range(budget):
            if len(points) == m:
                break
            q = tuple(
                ci + _F(rng.randint(-d, d), d) * half for ci in marked
            )
            if shadow.contains(q) and all(q != r for r in points):
                points.append(q)
        if len(points) == m:
            return SpatialConfig(shadow=shadow, points=tuple(points))
        if d >= 1024:
            raise SamplingExhausted(
                f"could not place {m} distinct spatial points (denominator {d})"
            )
        d *= 2


def project_config(config: CausalConfig) -> SpatialConfig:
    """Pointwise spatial projection; distinctness of the images follows from
    the exact projection inequality and is asserted."""
    shadow = project_cone(config.cone)
    points = tuple(p.x for p in config.points)
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            gap = sq_interval(config.points[i], config.points[j])
            assert _euclid_sq(points[i], points[j]) >= gap > 0
    return SpatialConfig(shadow=shadow, points=points)


def lift_config(cone: DoubleCone, spatial: SpatialConfig) -> CausalConfig:
    """Pointwise section onto the canonical Cauchy surface.

    The input shadow must be the cone's own shadow; the lifted points are
    pairwise spacelike (they lie in a spacelike hyperplane), re-verified by
    the CausalConfig constructor, and project back to the input exactly.
    """
    if spatial.shadow != project_cone(cone):
        raise PreconditionError("spatial configuration lives in a different shadow")
    lifted = tuple(cauchy_lift(cone, q) for q in spatial.points)
    config = CausalConfig(cone=cone, points=lifted)
    assert project_config(config).points == spatial.points
    return config


@dataclass
class CertReport:
    """Per-pair exact certificates that the projection homotopy stays inside
    the configuration space for every intermediate parameter."""

    certified: bool = True
    size: int = 0
    pairs: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "check": "homotopy-certification",
            "certified": self.certified,
            "size": self.size,
            "pairs": self.pairs,
        }


def certify_homotopy(config: CausalConfig) -> CertReport:
    """For every pair i<j certify that (1-s)*(surface difference) + s*(original
    difference) is spacelike for all s in [0,1], by exact quadratic analysis."""
    report = CertReport(size=config.size)
    base = {p: cauchy_lift(config.cone, p.x) for p in config.points}
    pts = config.points
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            v = base[pts[i]] - base[pts[j]]
            w = pts[i] - pts[j]
            data = segment_spacelike_data(v, w)
            data["pair"] = [i, j]
            report.pairs.append(data)
            if not data["positive"]:
                report.certified = False
    return report
