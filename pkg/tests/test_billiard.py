import random
from fractions import Fraction

import pytest

from polybill.billiard import (
    BilliardSolution,
    ContactPattern,
    ReflectionCertificate,
    ReflectionFailure,
    dedupe_fake_vertices,
    enumerate_patterns,
    is_two_periodic,
    minimal_dependencies,
    pattern_min_length,
    shortest_trajectory,
    smallest_fitting_ratio,
    surrounds,
    verify_reflection,
)
from polybill.errors import DimensionMismatch, InvalidBody
from polybill.geometry import (
    NORM_BODY,
    Body,
    ClosedPolyline,
    centroid_simplex,
    cross_polytope,
    cube,
    gauge_norm,
    polar_dual,
    polyline_length,
)
from polybill.instances import random_polygon, random_simplex
from polybill.scalars import add, dot, scale
from polybill.simplex_form import SimplexSpec, closed_form_trajectory

F = Fraction
TRIANGLE = Body.from_vrep([(1, 0), (0, 1), (-1, -1)])
SQUARE = cube(2)
CROSS = cross_polytope(2, role=NORM_BODY)


def facet(body, normal):
    """Index of the row whose normal is a positive multiple of ``normal``."""
    for j, (a, _) in enumerate(body.rows):
        if dot(a, normal) > 0 and a[0] * normal[1] == a[1] * normal[0]:
            return j
    raise KeyError(normal)


def solution_for(points, k, t):
    """Wrap an arbitrary closed polyline as a solution object for the reflection check."""
    poly = ClosedPolyline(tuple(points))
    seg = tuple(gauge_norm(t, e) for e in poly.edges())
    slots = tuple(k.hrep.active(q) for q in poly.points)
    return BilliardSolution(sum(seg), poly, ContactPattern(slots), {}, seg, poly.m)


# --- fitting ratio ---------------------------------------------------------

def test_fitting_examples():
    assert smallest_fitting_ratio(SQUARE.vertices, SQUARE).alpha == 1
    assert smallest_fitting_ratio(SQUARE.vertices, SQUARE).translate == (0, 0)
    assert smallest_fitting_ratio([(0, 0)], SQUARE).alpha == 0
    assert smallest_fitting_ratio([(-1, 0), (1, 0)], SQUARE).alpha == 1
    assert smallest_fitting_ratio([(0, 0), (1, 0)], SQUARE).alpha == F(1, 2)


@pytest.mark.parametrize("seed", range(12))
def test_fitting_dual_certificate(seed):
    rng = random.Random(seed)
    k = random_polygon(rng) if seed % 3 else random_simplex(rng, 3)
    pts = [tuple(F(rng.randint(-8, 8), 3) for _ in range(k.dim)) for _ in range(rng.randint(1, 4))]
    fit = smallest_fitting_ratio(pts, k)
    for q in pts:
        for a, b in k.rows:
            assert dot(a, q) - dot(a, fit.translate) <= fit.alpha * b
    zero = tuple(F(0) for _ in range(k.dim))
    lam_a = zero
    for (i, j), y in fit.dual.items():
        assert y >= 0
        lam_a = add(lam_a, scale(y, k.rows[j][0]))
    if len(pts) > 1:
        assert lam_a == zero
        assert sum(y * k.rows[j][1] for (_, j), y in fit.dual.items()) == 1
        assert sum(y * dot(k.rows[j][0], pts[i]) for (i, j), y in fit.dual.items()) == fit.alpha


def test_fitting_homogeneous():
    pts = [(F(1, 2), 0), (-1, F(1, 3)), (0, -1)]
    base = smallest_fitting_ratio(pts, TRIANGLE).alpha
    assert smallest_fitting_ratio([scale(3, p) for p in pts], TRIANGLE).alpha == 3 * base
    assert smallest_fitting_ratio(pts, TRIANGLE.scale(2)).alpha == base / 2


def test_fitting_dimension_checked():
    with pytest.raises(DimensionMismatch):
        smallest_fitting_ratio([(0, 0, 0)], SQUARE)


# --- contact patterns ------------------------------------------------------

def test_square_two_slot_patterns():
    left, right = facet(SQUARE, (-1, 0)), facet(SQUARE, (1, 0))
    bottom, top = facet(SQUARE, (0, -1)), facet(SQUARE, (0, 1))
    slots = {p.slots for p in enumerate_patterns(SQUARE, 2)}
    assert tuple(sorted([(left,), (right,)])) in slots
    assert tuple(sorted([(bottom,), (top,)])) in slots
    assert not any({(left,), (top,)} == set(s) for s in slots)


def test_triangle_two_slot_patterns():
    pats = list(enumerate_patterns(TRIANGLE, 2))
    assert pats
    assert all(max(len(s) for s in p.slots) == 2 for p in pats)
    # every vertex paired with its opposite edge appears
    for v in TRIANGLE.vertices:
        act = TRIANGLE.hrep.active(v)
        opp = tuple(j for j in range(3) if j not in act)
        assert any(set(p.slots) == {act, opp} for p in pats)


def test_simplex_facets_pattern_included():
    k = centroid_simplex(3)
    singles = {p.slots for p in enumerate_patterns(k, 4)}
    assert (0,) in {s[0] for s in singles}
    assert any(all(len(s) == 1 for s in slots) for slots in singles)


def test_pattern_count_respects_order_flag():
    # minimal mode: the three edges in either cyclic direction
    both = list(enumerate_patterns(TRIANGLE, 3, order_sensitive=True, minimal=True))
    one = list(enumerate_patterns(TRIANGLE, 3, order_sensitive=False, minimal=True))
    assert len(both) == 2 and len(one) == 1
    full = list(enumerate_patterns(TRIANGLE, 3, order_sensitive=True))
    assert {p.slots for p in both} <= {p.slots for p in full}


def test_enumerate_rejects_bad_slot_count():
    with pytest.raises(ValueError):
        list(enumerate_patterns(SQUARE, 4))


def test_surrounds():
    assert surrounds([(1, 0), (-1, 0)])
    assert not surrounds([(1, 0), (0, 1)])
    assert surrounds([(1, 0), (0, 1), (-1, -1)])


def test_minimal_dependencies_of_square():
    deps = set(minimal_dependencies(SQUARE))
    left, right = facet(SQUARE, (-1, 0)), facet(SQUARE, (1, 0))
    assert tuple(sorted((left, right))) in deps
    assert all(surrounds([SQUARE.rows[j][0] for j in d]) for d in deps)


# --- pattern LP ------------------------------------------------------------

def test_pattern_square_cross():
    left, right = facet(SQUARE, (-1, 0)), facet(SQUARE, (1, 0))
    res = pattern_min_length(SQUARE, CROSS, ContactPattern(((left,), (right,))))
    assert res.value == 4
    (x0, _), (x1, _) = res.points.points
    assert (x0, x1) == (-1, 1)
    assert smallest_fitting_ratio(res.points.points, SQUARE).alpha == 1


def test_pattern_square_square():
    left, right = facet(SQUARE, (-1, 0)), facet(SQUARE, (1, 0))
    res = pattern_min_length(SQUARE, cube(2, role=NORM_BODY), ContactPattern(((left,), (right,))))
    assert res.value == 4


def test_pattern_triangle_three_facets():
    t = polar_dual(TRIANGLE)
    values = {pattern_min_length(TRIANGLE, t, p).value for p in enumerate_patterns(TRIANGLE, 3) if all(len(s) == 1 for s in p.slots)}
    assert values == {3}


def test_pattern_infeasible_returns_none():
    left = facet(SQUARE, (-1, 0))
    # the same facet twice together with its opposite corner pair cannot be met
    right_corner = SQUARE.hrep.active((1, 1))
    pat = ContactPattern(((left,) + right_corner,) + (right_corner,))
    assert pattern_min_length(SQUARE, CROSS, pat) is None


# --- solver ----------------------------------------------------------------

def test_square_cross_solution():
    sol = shortest_trajectory(SQUARE, CROSS)
    assert sol.xi == 4
    assert is_two_periodic(sol)
    p, q = sol.trajectory.points
    assert p == tuple(-x for x in q)
    assert polyline_length(sol.trajectory, CROSS) == sol.xi
    assert smallest_fitting_ratio(sol.trajectory.points, SQUARE).alpha == 1


def test_square_square_solution():
    assert shortest_trajectory(SQUARE, cube(2, role=NORM_BODY)).xi == 4


def test_triangle_polar_solution():
    sol = shortest_trajectory(TRIANGLE, polar_dual(TRIANGLE))
    assert sol.xi == 3
    assert sol.bounce_count == 3
    assert not is_two_periodic(sol)
    assert sol.segment_lengths == (1, 1, 1)


@pytest.mark.parametrize("a,b", [(1, 2), (F(1, 2), 3), (2, 5)])
def test_rectangle_cross(a, b):
    k = Body.from_vrep([(a, b), (a, -b), (-a, b), (-a, -b)])
    sol = shortest_trajectory(k, CROSS)
    assert is_two_periodic(sol) and sol.xi == 4 * a


def test_centroid_simplex_3d():
    k = centroid_simplex(3)
    sol = shortest_trajectory(k, polar_dual(k))
    assert sol.xi == F(8, 3)
    assert sol.bounce_count == 4


def test_cube_cross_3d():
    sol = shortest_trajectory(cube(3), cross_polytope(3, role=NORM_BODY))
    assert sol.xi == 4 and is_two_periodic(sol)


def test_obtuse_triangle_bounces_through_obtuse_vertex():
    # disc approximated by rational points on the unit circle
    pts = set()
    for u in range(1, 8):
        for w in range(u):
            r = u * u + w * w
            x, y = F(u * u - w * w, r), F(2 * u * w, r)
            for sx in (1, -1):
                for sy in (1, -1):
                    pts |= {(sx * x, sy * y), (sx * y, sy * x)}
    t = Body.from_vrep(pts, NORM_BODY)
    k = Body.from_vrep([(-3, -1), (3, -1), (0, 1)])  # obtuse angle at (0, 1)
    sol = shortest_trajectory(k, t)
    assert is_two_periodic(sol)
    assert (0, 1) in sol.trajectory.points
    assert sol.xi == 4  # twice the altitude from the obtuse vertex
    assert verify_reflection(sol, k, t).ok


def test_origin_outside_table_is_handled():
    k = Body.from_vrep([(1, 1), (3, 1), (1, 3), (3, 3)])
    sol = shortest_trajectory(k, CROSS)
    assert sol.xi == 4
    assert all(k.contains(q) for q in sol.trajectory.points)
    assert verify_reflection(sol, k, CROSS).ok


def test_norm_body_must_contain_origin():
    with pytest.raises(InvalidBody):
        shortest_trajectory(SQUARE, Body.from_vrep([(0, 0), (1, 0), (0, 1)], NORM_BODY))


@pytest.mark.parametrize("seed", range(8))
def test_minimal_enumeration_matches_full(seed):
    rng = random.Random(seed)
    k, t = random_polygon(rng, max_vertices=6), random_polygon(rng, max_vertices=6, role=NORM_BODY)
    assert shortest_trajectory(k, t).xi == shortest_trajectory(k, t, minimal=False).xi


@pytest.mark.parametrize("seed", range(6))
def test_homogeneity(seed):
    rng = random.Random(seed)
    k, t = random_polygon(rng), random_polygon(rng, role=NORM_BODY)
    s = F(rng.randint(1, 9), rng.randint(1, 4))
    base = shortest_trajectory(k, t).xi
    assert shortest_trajectory(k.scale(s), t).xi == s * base
    assert shortest_trajectory(k, t.scale(s)).xi == s * base


def test_workers_give_same_answer():
    rng = random.Random(5)
    k, t = random_polygon(rng), random_polygon(rng, role=NORM_BODY)
    a = shortest_trajectory(k, t)
    b = shortest_trajectory(k, t, workers=2)
    assert (a.xi, a.trajectory) == (b.xi, b.trajectory)


def test_solution_dict_fields():
    d = shortest_trajectory(SQUARE, CROSS).to_dict()
    assert {"xi", "trajectory", "pattern", "lambda", "two_periodic"} <= set(d)
    assert d["xi"] == "4" and d["two_periodic"] is True


# --- fake vertices ---------------------------------------------------------

def test_dedupe_examples():
    p = ClosedPolyline(((-1, 0), (0, 0), (1, 0), (1, 0)))
    assert dedupe_fake_vertices(p).points == ((-1, 0), (1, 0))
    tri = ClosedPolyline(((0, 0), (1, 0), (0, 1)))
    assert dedupe_fake_vertices(tri) == tri


@pytest.mark.parametrize("seed", range(10))
def test_dedupe_keeps_length(seed):
    rng = random.Random(seed)
    t = random_polygon(rng, role=NORM_BODY)
    pts = [(F(rng.randint(-4, 4)), F(rng.randint(-4, 4))) for _ in range(4)]
    pts.insert(1, pts[0])
    pts.insert(3, tuple((x + y) / 2 for x, y in zip(pts[2], pts[3])))
    p = ClosedPolyline(tuple(pts))
    if len(set(pts)) < 2:
        return
    assert polyline_length(dedupe_fake_vertices(p, t), t) == polyline_length(p, t)


# --- reflection ------------------------------------------------------------

def test_reflection_square_cross():
    sol = shortest_trajectory(SQUARE, CROSS)
    cert = verify_reflection(sol, SQUARE, CROSS)
    assert isinstance(cert, ReflectionCertificate) and cert.check()
    assert set(cert.lam) == {2}
    i = sol.trajectory.points.index(next(q for q in sol.trajectory.points if q[0] == 1))
    assert cert.normals[i] == (1, 0)
    nxt = cert.momenta[(i + 1) % 2]
    assert tuple(a - b for a, b in zip(nxt, cert.momenta[i])) == (-2, 0)


@pytest.mark.parametrize("seed", range(6))
def test_reflection_on_closed_form_simplex_trajectory(seed):
    rng = random.Random(seed)
    k = random_simplex(rng, 2 + seed % 2)
    spec = SimplexSpec.from_vertices(k.vertices)
    t = polar_dual(k)
    tr = closed_form_trajectory(spec)
    assert verify_reflection(solution_for(tr.points, k, t), k, t).ok


def test_reflection_negative_control():
    rng = random.Random(11)
    k = random_polygon(rng)
    t = polar_dual(k)
    failures = 0
    for _ in range(10):
        # random points on two or three edges
        pts = []
        for j in rng.sample(range(len(k.rows)), 3):
            a, b = k.rows[j]
            ends = [v for v in k.vertices if dot(a, v) == b]
            s = F(rng.randint(1, 6), 7)
            pts.append(tuple(x + s * (y - x) for x, y in zip(*ends)))
        res = verify_reflection(solution_for(pts, k, t), k, t)
        failures += isinstance(res, ReflectionFailure)
    assert failures >= 8


def test_reflection_rejects_interior_point():
    res = verify_reflection(solution_for([(0, 0), (1, 0)], SQUARE, CROSS), SQUARE, CROSS)
    assert isinstance(res, ReflectionFailure) and res.index == 0
