import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sectorfact.minkowski import (
    DoubleCone,
    ExhaustedRetries,
    MPoint,
    NoHit,
    build_witness,
    cauchy_lift,
    causally_disjoint,
    certify_segment_spacelike,
    check_projection_inequality,
    chron_after,
    cone_contains,
    cone_from_json,
    cone_included,
    cone_to_json,
    homotopy_point,
    minkowski_inner,
    point_from_json,
    point_to_json,
    project_cone,
    segment_lightcone_hit,
    segment_spacelike_data,
    sq_interval,
)
from sectorfact.reports import PreconditionError

P = MPoint.of

UNIT = DoubleCone(P(-1, 0), P(1, 0))
TILTED = DoubleCone(P(-1, 0), P(1, 1))


def grid_points_in(cone, denom=8):
    """All rational grid points strictly inside the cone's bounding box."""
    half = (cone.pplus.t - cone.pminus.t) / 2
    c = cone.center
    pts = []
    ranges = [
        [c.t + F(k, denom) * half for k in range(-denom + 1, denom)]
    ] + [
        [xi + F(k, denom) * half for k in range(-denom + 1, denom)]
        for xi in c.x
    ]
    if len(c.x) == 1:
        for t in ranges[0]:
            for x in ranges[1]:
                p = MPoint(t, (x,))
                if cone_contains(cone, p):
                    pts.append(p)
    return pts


# -- interval and order predicates ------------------------------------------------


def test_sq_interval_signature():
    assert sq_interval(P(0, 0), P(1, 0)) == -1
    assert sq_interval(P(0, 0), P(0, 1)) == 1
    assert sq_interval(P(0, 0), P(1, 1)) == 0


def test_dimension_mismatch():
    with pytest.raises(PreconditionError):
        sq_interval(P(0, 0), P(0, 1, 2))


def test_chronology():
    assert chron_after(P(1, 0), P(0, 0))
    assert not chron_after(P(1, 2), P(0, 0))
    assert not chron_after(P(1, 1), P(0, 0))  # null is excluded


def test_cone_membership():
    assert cone_contains(UNIT, P(0, 0))
    assert not cone_contains(UNIT, P(0, 1))
    assert cone_contains(UNIT, P(0, F(1, 2)))


def test_invalid_cone_rejected():
    with pytest.raises(PreconditionError):
        DoubleCone(P(0, 0), P(1, 2))  # spacelike tips
    with pytest.raises(PreconditionError):
        DoubleCone(P(1, 0), P(0, 0))  # reversed


# -- inclusion with sampling oracle --------------------------------------------------


def test_inclusion_examples():
    assert cone_included(DoubleCone(P(F(-1, 2), 0), P(F(1, 2), 0)), UNIT)
    assert not cone_included(DoubleCone(P(F(-1, 2), 1), P(F(1, 2), 1)), UNIT)
    assert cone_included(UNIT, UNIT)


def test_inclusion_against_sampling_oracle():
    rng = random.Random(2024)
    agree = 0
    for _ in range(60):
        x0 = F(rng.randint(-12, 12), 8)
        r = F(rng.randint(1, 10), 8)
        tilt = F(rng.randint(-8, 8), 16) * r
        inner = DoubleCone(P(-r, x0), MPoint(r, (x0 + tilt,)))
        decision = cone_included(inner, UNIT)
        if decision:
            # tip criterion implies set inclusion: dense sampling finds no escape
            assert all(cone_contains(UNIT, p) for p in grid_points_in(inner, 6))
        else:
            # converse: refine the grid until an escaping point appears
            escaped = any(
                not cone_contains(UNIT, p)
                for denom in (6, 12, 24, 48)
                for p in grid_points_in(inner, denom)
            )
            assert escaped, f"verdict not-included but no escape found: {inner}"
            agree += 1
    assert agree > 0


# -- causal disjointness with sampling oracle -------------------------------------------


def test_disjointness_examples():
    u2 = DoubleCone(P(-1, 4), P(1, 4))
    assert causally_disjoint(UNIT, u2)
    u3 = DoubleCone(P(-1, F(3, 2)), P(1, F(3, 2)))
    assert not causally_disjoint(UNIT, u3)
    assert not causally_disjoint(UNIT, UNIT)


def test_disjointness_sampling_oracle():
    u2 = DoubleCone(P(-1, 4), P(1, 4))
    for p in grid_points_in(UNIT, 5):
        for q in grid_points_in(u2, 5):
            assert sq_interval(p, q) > 0


def test_non_disjointness_witnessed_by_points():
    # converse oracle: whenever the tip criterion says not-disjoint, a
    # causally related pair of sampled points must exist
    rng = random.Random(77)
    confirmed = 0
    while confirmed < 25:
        x = F(rng.randint(-6, 6), 4)
        r = F(rng.randint(2, 8), 4)
        other = DoubleCone(P(-r, x), P(r, x))
        if causally_disjoint(UNIT, other):
            continue
        related = any(
            sq_interval(p, q) <= 0
            for denom in (6, 12, 24)
            for p in grid_points_in(UNIT, denom)
            for q in grid_points_in(other, denom)
        )
        assert related, f"not-disjoint verdict without witnessing pair: {other}"
        confirmed += 1


@settings(max_examples=120, deadline=None)
@given(st.integers(-6, 6), st.integers(1, 4), st.integers(-6, 6), st.integers(1, 4))
def test_disjointness_symmetric(x1, r1, x2, r2):
    u1 = DoubleCone(P(-r1, x1), P(r1, x1))
    u2 = DoubleCone(P(-r2, x2), P(r2, x2))
    assert causally_disjoint(u1, u2) == causally_disjoint(u2, u1)


def test_disjointness_monotone_under_inclusion():
    rng = random.Random(7)
    checked = 0
    while checked < 200:
        xs = [F(rng.randint(-40, 40), 8) for _ in range(2)]
        rs = [F(rng.randint(2, 16), 8) for _ in range(2)]
        v1 = DoubleCone(P(-rs[0], xs[0]), P(rs[0], xs[0]))
        v2 = DoubleCone(P(-rs[1], xs[1]), P(rs[1], xs[1]))
        if not causally_disjoint(v1, v2):
            continue
        shrink = [F(rng.randint(1, 7), 8) for _ in range(2)]
        u1 = DoubleCone(P(-rs[0] * shrink[0], xs[0]), P(rs[0] * shrink[0], xs[0]))
        u2 = DoubleCone(P(-rs[1] * shrink[1], xs[1]), P(rs[1] * shrink[1], xs[1]))
        assert cone_included(u1, v1) and cone_included(u2, v2)
        assert causally_disjoint(u1, u2)
        checked += 1


# -- projection --------------------------------------------------------------------------


def test_project_upright():
    shadow = project_cone(UNIT)
    assert shadow.marked == (F(0),)
    assert shadow.contains([F(99, 100)]) and not shadow.contains([1])
    assert shadow.contains([F(-99, 100)]) and not shadow.contains([-1])


def test_project_tilted():
    shadow = project_cone(TILTED)
    assert shadow.marked == (F(1, 2),)
    # interval (-1/2, 3/2)
    assert shadow.contains([F(-49, 100)]) and not shadow.contains([F(-1, 2)])
    assert shadow.contains([F(149, 100)]) and not shadow.contains([F(3, 2)])


def test_projection_against_exists_t_oracle():
    # oracle: x is in the shadow iff some grid time puts (t; x) inside the cone
    for cone in (UNIT, TILTED, DoubleCone(P(-2, 1), P(1, 0))):
        shadow = project_cone(cone)
        half = (cone.pplus.t - cone.pminus.t) / 2
        c = cone.center
        for k in range(-40, 41):
            x = c.x[0] + F(k, 20) * half
            oracle = any(
                cone_contains(cone, MPoint(c.t + F(j, 64) * half, (x,)))
                for j in range(-64 + 1, 64)
            )
            decided = shadow.contains([x])
            if decided:
                assert oracle, f"shadow claims {x} but no witness time found"
            else:
                assert not oracle, f"oracle found time for {x} outside shadow"


def test_marked_point_inside_shadow():
    for cone in (UNIT, TILTED):
        assert project_cone(cone).contains(project_cone(cone).marked)


def test_ball_region():
    from sectorfact.minkowski import SpatialConvex

    ball = SpatialConvex.ball([F(1), F(0)], F(2))
    assert ball.contains([F(1), F(1)])
    assert not ball.contains([F(3), F(0)])  # boundary excluded
    assert ball.marked == (F(1), F(0))
    with pytest.raises(PreconditionError):
        SpatialConvex.ball([0], 0)
    with pytest.raises(PreconditionError):
        SpatialConvex.ball([0], 1, marked=[5])


@settings(max_examples=200, deadline=None)
@given(
    st.fractions(min_value=-9, max_value=9, max_denominator=16),
    st.fractions(min_value=-9, max_value=9, max_denominator=16),
    st.fractions(min_value=-9, max_value=9, max_denominator=16),
    st.fractions(min_value=-9, max_value=9, max_denominator=16),
)
def test_projection_inequality_identity(t1, x1, t2, x2):
    assert check_projection_inequality(MPoint(t1, (x1,)), MPoint(t2, (x2,)))


def test_projection_inequality_examples():
    assert check_projection_inequality(P(0, 0), P(5, 1))
    assert check_projection_inequality(P(0, 0), P(0, 0))


# -- light-cone intersections ---------------------------------------------------------------


def test_exact_hits():
    h = segment_lightcone_hit(P(0, 0), P(0, 4), P(1, 0), branch="future")
    assert h.exact and h.s == F(1, 4) and h.point == P(0, 1)
    h2 = segment_lightcone_hit(P(0, 0), P(0, 4), P(1, 4), branch="past")
    assert h2.exact and h2.point == P(0, 3)


def test_no_hit():
    with pytest.raises(NoHit):
        segment_lightcone_hit(P(0, 0), P(0, 4), P(10, 2), branch="future")


def test_two_dimensional_hits_always_rational():
    # in two dimensions the interval form factors into null coordinates,
    # so segment/light-cone intersections are rational whenever they exist
    rng = random.Random(5)
    found = 0
    while found < 40:
        a = P(F(rng.randint(-8, 8), 4), F(rng.randint(-8, 8), 4))
        b = MPoint(a.t + F(rng.randint(-3, 3), 8), (a.x[0] + F(rng.randint(4, 12), 2),))
        tip = P(F(rng.randint(-8, 8), 4), F(rng.randint(-8, 8), 4))
        try:
            h = segment_lightcone_hit(a, b, tip, branch="future")
        except (NoHit, PreconditionError):
            continue
        assert h.exact
        found += 1


def test_irrational_hit_certificate():
    # dimension three: discriminant 52 is not a square
    a, b, tip = P(0, 0, 0), P(0, 4, 1), P(2, 0, 1)
    h = segment_lightcone_hit(a, b, tip, branch="future")
    assert not h.exact
    assert F(h.certificate["sq_to_tip"]) < 0
    assert h.certificate["side"] == "timelike"
    assert 0 < h.s < 1
    # the rounding stays tight: a few grid steps past the returned parameter
    # the segment has crossed to the spacelike side of the cone
    k = h.certificate["denominator_log2"]
    crossed = a + (b - a).scale(h.s + F(1, 1 << (k - 4)))
    assert sq_interval(crossed, tip) > 0


def test_spacelike_precondition():
    with pytest.raises(PreconditionError):
        segment_lightcone_hit(P(0, 0), P(2, 1), P(1, 0))  # timelike direction


# -- witness construction ---------------------------------------------------------------------


def test_witness_bundled_example():
    u1 = DoubleCone(P(-1, 0), P(1, 0))
    u2 = DoubleCone(P(-1, 4), P(1, 4))
    ut = DoubleCone(P(-4, 2), P(4, 2))
    diagram = build_witness(u1, u2, ut)
    checks = diagram.verify(u1, u2, ut)
    assert all(checks.values()), checks
    assert cone_included(u1, diagram.V1)
    # the future half-line through (1;0) exits the closure past parameter 3/2
    assert F(diagram.trace["exit_H1_plus"]) > F(3, 2)


def test_witness_tight_containment():
    u1 = DoubleCone(P(-1, 0), P(1, 0))
    u2 = DoubleCone(P(-1, 3), P(1, 3))
    ut = DoubleCone(P(F(-5, 2), F(3, 2)), P(F(5, 2), F(3, 2)))
    diagram = build_witness(u1, u2, ut)
    assert diagram.verified(u1, u2, ut)


def test_witness_precondition():
    u1 = DoubleCone(P(-1, 10), P(1, 10))
    u2 = DoubleCone(P(-1, 4), P(1, 4))
    ut = DoubleCone(P(-4, 2), P(4, 2))
    with pytest.raises(PreconditionError):
        build_witness(u1, u2, ut)  # u1 not inside ut


def test_witness_three_dimensional():
    u1 = DoubleCone(P(-1, 0, 0), P(1, 0, 0))
    u2 = DoubleCone(P(-1, 5, 1), P(1, 5, 1))
    ut = DoubleCone(P(-6, 2, 0), P(6, 2, 0))
    assert build_witness(u1, u2, ut).verified(u1, u2, ut)


def test_witness_budget_exhaustion():
    u1 = DoubleCone(P(-1, 0), P(1, 0))
    u2 = DoubleCone(P(-1, 4), P(1, 4))
    ut = DoubleCone(P(-4, 2), P(4, 2))
    with pytest.raises(ExhaustedRetries):
        build_witness(u1, u2, ut, retry_budget=0)


@pytest.mark.parametrize("eps_den", [64, 1024, 4096])
def test_witness_near_touching_cones(eps_den):
    # causal margin of a single fine grid cell between the two cones
    eps = F(1, eps_den)
    u1 = DoubleCone(P(-1, 0), P(1, 0))
    u2 = DoubleCone(MPoint(F(-1), (2 + eps,)), MPoint(F(1), (2 + eps,)))
    ut = DoubleCone(MPoint(F(-4), (1 + eps / 2,)), MPoint(F(4), (1 + eps / 2,)))
    assert causally_disjoint(u1, u2)
    diagram = build_witness(u1, u2, ut)
    assert diagram.verified(u1, u2, ut)


def test_witness_skewed_sizes_and_stagger():
    tiny = DoubleCone(P(F(-1, 64), 0), P(F(1, 64), 0))
    huge = DoubleCone(P(-3, 6), P(3, 6))
    ut = DoubleCone(P(-8, 3), P(8, 3))
    assert build_witness(tiny, huge, ut).verified(tiny, huge, ut)

    eps = F(1, 1024)
    low = DoubleCone(P(-2, 0), P(0, 0))
    high = DoubleCone(MPoint(F(0), (4 + eps,)), MPoint(F(2), (4 + eps,)))
    ut2 = DoubleCone(P(-6, 2), P(6, 2))
    assert build_witness(low, high, ut2).verified(low, high, ut2)


def test_witness_four_dimensional_diagonal():
    eps = F(1, 512)
    u1 = DoubleCone(P(-1, 0, 0, 0), P(1, 0, 0, 0))
    off = (F(2) + eps, F(1), F(1))
    u2 = DoubleCone(MPoint(F(-1), off), MPoint(F(1), off))
    ut = DoubleCone(MPoint(F(-7), (F(1),) * 3), MPoint(F(7), (F(1),) * 3))
    assert build_witness(u1, u2, ut).verified(u1, u2, ut)


# -- null-coordinate oracles (two dimensions) -------------------------------------
#
# In two dimensions a double cone is exactly an open rectangle in the null
# coordinates a = t + x, b = t - x, giving closed-form independent oracles
# for inclusion, causal disjointness, and the spatial shadow.


def null_rect(cone):
    a_lo = cone.pminus.t + cone.pminus.x[0]
    a_hi = cone.pplus.t + cone.pplus.x[0]
    b_lo = cone.pminus.t - cone.pminus.x[0]
    b_hi = cone.pplus.t - cone.pplus.x[0]
    return (a_lo, a_hi, b_lo, b_hi)


def random_cone_2d(rng):
    x0 = F(rng.randint(-40, 40), 8)
    t0 = F(rng.randint(-20, 20), 8)
    r = F(rng.randint(1, 24), 8)
    tilt = F(rng.randint(-30, 30), 32) * r
    return DoubleCone(
        MPoint(t0 - r, (x0 - tilt / 2,)), MPoint(t0 + r, (x0 + tilt / 2,))
    )


def test_inclusion_matches_null_rectangle_oracle():
    rng = random.Random(31337)
    for _ in range(400):
        inner, outer = random_cone_2d(rng), random_cone_2d(rng)
        ia, ib, ic, id_ = null_rect(inner)
        oa, ob, oc, od = null_rect(outer)
        oracle = oa <= ia and ib <= ob and oc <= ic and id_ <= od
        assert cone_included(inner, outer) == oracle, (inner, outer)


def test_disjointness_matches_null_rectangle_oracle():
    rng = random.Random(271828)
    for _ in range(400):
        u1, u2 = random_cone_2d(rng), random_cone_2d(rng)
        a1l, a1h, b1l, b1h = null_rect(u1)
        a2l, a2h, b2l, b2h = null_rect(u2)
        # a causal pair (p in U1) <= (q in U2) exists iff both open
        # coordinate intervals of U2 reach above those of U1
        future = a2h > a1l and b2h > b1l
        past = a1h > a2l and b1h > b2l
        oracle = not future and not past
        assert causally_disjoint(u1, u2) == oracle, (u1, u2)


def test_shadow_matches_null_rectangle_oracle():
    rng = random.Random(161803)
    for _ in range(200):
        cone = random_cone_2d(rng)
        a_lo, a_hi, b_lo, b_hi = null_rect(cone)
        # x = (a - b)/2 over the open rectangle gives the open interval
        lo, hi = (a_lo - b_hi) / 2, (a_hi - b_lo) / 2
        shadow = project_cone(cone)
        for k in range(-12, 13):
            x = lo + (hi - lo) * F(k + 12, 24)
            assert shadow.contains([x]) == (lo < x < hi)


# -- Cauchy surface and homotopy -----------------------------------------------------------------


def test_cauchy_lift_upright():
    assert cauchy_lift(UNIT, [F(1, 2)]) == P(0, F(1, 2))


def test_cauchy_lift_tilted():
    assert cauchy_lift(TILTED, [F(1, 2)]) == P(0, F(1, 2))
    assert cauchy_lift(TILTED, [1]) == P(F(1, 4), 1)


def test_cauchy_lift_is_orthogonal_section():
    for cone in (UNIT, TILTED):
        shadow = project_cone(cone)
        for k in range(-8, 9):
            q = (cone.center.x[0] + F(k, 10),)
            if not shadow.contains(q):
                continue
            p = cauchy_lift(cone, q)
            assert minkowski_inner(p - cone.center, cone.axis) == 0
            assert cone_contains(cone, p)
            assert p.x == q


def test_cauchy_lift_outside_shadow():
    with pytest.raises(PreconditionError):
        cauchy_lift(UNIT, [2])


def test_homotopy_endpoints():
    p = P(F(1, 2), 0)
    assert homotopy_point(UNIT, p, 1) == p
    assert homotopy_point(UNIT, p, 0) == cauchy_lift(UNIT, p.x)
    assert homotopy_point(UNIT, p, F(1, 2)) == P(F(1, 4), 0)


def test_homotopy_preconditions():
    with pytest.raises(PreconditionError):
        homotopy_point(UNIT, P(0, 2), F(1, 2))
    with pytest.raises(PreconditionError):
        homotopy_point(UNIT, P(0, 0), 2)


# -- segment certification --------------------------------------------------------------------------


def test_certify_examples():
    assert certify_segment_spacelike(P(0, 2), P(1, 2))  # -s^2 + 4 on [0,1]
    assert certify_segment_spacelike(P(0, 1), P(0, 1))
    with pytest.raises(PreconditionError):
        certify_segment_spacelike(P(0, 2), P(3, 2))  # second vector timelike


def test_certify_data_fields():
    data = segment_spacelike_data(P(0, 2), P(1, 2))
    assert data["a"] == "-1" and data["c"] == "4"
    assert data["positive"] is True


def test_certify_detects_failure():
    # two spacelike vectors whose chord dips into timelike: v and w nearly
    # opposite spatial directions with a large time swing at the midpoint
    v = P(F(-9, 10), 1)
    w = P(F(9, 10), -1)
    data = segment_spacelike_data(v, w)
    assert data["positive"] is False


# -- JSON ----------------------------------------------------------------------------------------------


def test_point_json_round_trip():
    p = P(F(1, 3), F(-2, 7), 5)
    assert point_from_json(point_to_json(p)) == p


def test_cone_json_round_trip():
    assert cone_from_json(cone_to_json(TILTED)) == TILTED
