import random
from fractions import Fraction

import pytest

from polybill.errors import DegenerateError, InvalidBody
from polybill.geometry import Body, centroid_simplex, polar_dual, polyline_length
from polybill.instances import random_barycentric, random_simplex
from polybill.scalars import add, dot, scale
from polybill.simplex_form import (
    SimplexSpec,
    all_orders_edge_lengths,
    barycentric_of_origin,
    cevian_identity,
    check_trajectory,
    closed_form_trajectory,
    cyclic_orders,
    length_bound,
    midpoint_hyperplanes_concurrent,
    pair_sum,
)

F = Fraction
TRI = [(1, 0), (0, 1), (-1, -1)]


def simplex_with_weights(m, rng=None):
    """Simplex whose origin has barycentric coordinates ``m``: pick v_1..v_n, solve for v_0."""
    n = len(m) - 1
    rng = rng or random.Random(0)
    while True:
        rest = [tuple(F(rng.randint(-6, 6)) for _ in range(n)) for _ in range(n)]
        acc = tuple(F(0) for _ in range(n))
        for mi, v in zip(m[1:], rest):
            acc = add(acc, scale(mi, v))
        v0 = scale(-1 / m[0], acc)
        try:
            return SimplexSpec.from_vertices([v0] + rest)
        except DegenerateError:
            continue


def test_barycentric_examples():
    assert barycentric_of_origin(TRI) == (F(1, 3), F(1, 3), F(1, 3))
    # 2 m0 - m2 = 0, m1 - m2 = 0, m0 + m1 + m2 = 1
    m = barycentric_of_origin([(2, 0), (0, 1), (-1, -1)])
    assert m == (F(1, 5), F(2, 5), F(2, 5))
    v = [(2, 0), (0, 1), (-1, -1)]
    assert tuple(sum(mi * p[c] for mi, p in zip(m, v)) for c in range(2)) == (0, 0)


def test_barycentric_errors():
    with pytest.raises(InvalidBody):
        barycentric_of_origin([(0, 0), (1, 0), (0, 1)])
    with pytest.raises(DegenerateError):
        barycentric_of_origin([(1, 1), (2, 2), (-1, -1)])
    with pytest.raises(DegenerateError):
        barycentric_of_origin([(1, 0), (0, 1)])


def test_centroid_triangle_trajectory():
    s = SimplexSpec.from_vertices(TRI)
    tr = closed_form_trajectory(s)
    assert tr.points == ((F(-2, 3), F(-1, 3)), (F(1, 3), F(-1, 3)), (F(1, 3), F(2, 3)))
    assert tr.steps == (1, 1, 1)
    assert check_trajectory(s, tr) == []
    assert polyline_length(tr.points, polar_dual(Body.from_vrep(TRI))) == 3
    # q_0 = v_1/3 + 2 v_2/3 lies on the facet opposite v_0
    assert tr.points[0] == add(scale(F(1, 3), TRI[1]), scale(F(2, 3), TRI[2]))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_centroid_simplex_total(n):
    s = SimplexSpec.from_vertices(centroid_simplex(n).vertices)
    tr = closed_form_trajectory(s)
    assert tr.total == length_bound(n) == 2 + F(2, n)
    assert check_trajectory(s, tr) == []


def test_non_centroid_weights():
    m = (F(1, 2), F(1, 4), F(1, 4))
    assert pair_sum(m) == F(5, 16)
    s = simplex_with_weights(m)
    assert s.m == m and s.M == F(5, 16)
    tr = closed_form_trajectory(s)
    assert tr.total == F(16, 5) > 3
    assert check_trajectory(s, tr) == []
    # (1/2)(1/2) + (1/4)(3/4) + (1/4)(3/4) = 5/8, divided by 5/16
    assert cevian_identity(s, tr) == 2


def test_cevian_centroid_triangle():
    s = SimplexSpec.from_vertices(TRI)
    assert cevian_identity(s, closed_form_trajectory(s)) == 2


def _cevian_ratio(s, tr, i):
    """|q_{i+1} - q_i| / |cevian from v_i|, both measured along v_i."""
    o = tr.order[i]
    v = s.vertices[o]
    u, _ = s.facet(o)
    # the cevian from v through the origin meets the opposite facet at -r v
    r = -1 / dot(u, v)
    return tr.steps[i] / (1 + r)


@pytest.mark.parametrize("seed", range(12))
def test_cevian_identity_random(seed):
    rng = random.Random(seed)
    s = SimplexSpec.from_vertices(random_simplex(rng, 2 + seed % 2).vertices)
    tr = closed_form_trajectory(s)
    assert cevian_identity(s, tr) == 2
    # cross-check against the directly measured ratio |t_i v_i| / |cevian_i|
    assert sum(_cevian_ratio(s, tr, i) for i in range(s.n + 1)) == 2


@pytest.mark.parametrize("seed", range(10))
def test_random_trajectories_check(seed):
    rng = random.Random(seed)
    dim = 2 + seed % 2
    s = simplex_with_weights(random_barycentric(rng, dim + 1), rng)
    for order in cyclic_orders(dim + 1):
        tr = closed_form_trajectory(s, order)
        assert check_trajectory(s, tr) == []
        assert tr.total == 1 / s.M >= length_bound(dim)


def test_orders_table_triangle():
    s = SimplexSpec.from_vertices([(2, 0), (0, 1), (-1, -1)])
    table = all_orders_edge_lengths(s)
    assert len(table.rows) == 2
    assert table.same_steps and table.distinct


def test_orders_table_tetrahedron():
    s = SimplexSpec.from_vertices(centroid_simplex(3).vertices)
    table = all_orders_edge_lengths(s)
    assert len(table.rows) == len(cyclic_orders(4)) == 6
    assert table.same_steps
    assert all(set(tr.steps) == {F(2, 3)} for tr in table.rows)


def test_bad_order_rejected():
    s = SimplexSpec.from_vertices(TRI)
    with pytest.raises(ValueError):
        closed_form_trajectory(s, (0, 0, 1))


def test_midpoint_concurrency_centroid_triangle():
    s = SimplexSpec.from_vertices(TRI)
    tr = closed_form_trajectory(s)
    p = midpoint_hyperplanes_concurrent(s, tr)
    # two of the hyperplanes solved by hand meet at the origin; the third passes through it too
    assert p == (0, 0)


@pytest.mark.parametrize("seed", range(8))
def test_midpoint_concurrency_random(seed):
    rng = random.Random(seed)
    s = SimplexSpec.from_vertices(random_simplex(rng, 2 + seed % 2).vertices)
    for tr in all_orders_edge_lengths(s).rows:
        p = midpoint_hyperplanes_concurrent(s, tr)
        for i in range(s.n + 1):
            u, _ = s.facet(tr.order[i])
            mid = scale(F(1, 2), add(tr.points[i], tr.points[(i + 1) % (s.n + 1)]))
            assert dot(u, p) == dot(u, mid)


def test_midpoint_concurrency_near_boundary():
    m = (F(1, 1000), F(499, 1000), F(1, 2))
    s = simplex_with_weights(m)
    tr = closed_form_trajectory(s)
    assert check_trajectory(s, tr) == []
    midpoint_hyperplanes_concurrent(s, tr)
