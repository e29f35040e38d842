import re
from fractions import Fraction

import pytest

from polybill.billiard import shortest_trajectory
from polybill.geometry import NORM_BODY, Body, cross_polytope, cube, polar_dual
from polybill.render import render_svg


def draw(k, t):
    sol = shortest_trajectory(k, t)
    return sol, render_svg(sol.trajectory.points, k, t, sol.pattern.to_list())


def test_square_cross_picture():
    sol, svg = draw(cube(2), cross_polytope(2, role=NORM_BODY))
    assert svg.count("<circle") == 2
    assert svg.count('marker-end="url(#arrow)"') == 2
    assert svg.count("<polygon") == 2  # table and unit ball


def test_triangle_picture_has_contacts():
    k = Body.from_vrep([(1, 0), (0, 1), (-1, -1)])
    sol, svg = draw(k, polar_dual(k))
    assert svg.count("<circle") == 3
    assert svg.count('stroke="#27ae60"') == sum(len(s) for s in sol.pattern.slots) >= 3


def test_deterministic():
    k = Body.from_hrep([((1, 0), 1), ((0, 1), 2), ((-1, -1), 1)])
    t = cube(2, role=NORM_BODY)
    assert draw(k, t)[1] == draw(k, t)[1]


def test_polygon_outline_is_simple():
    # hrep-built bodies list vertices lexicographically; the outline must still go around
    k = Body.from_hrep([((1, 0), 1), ((-1, 0), 1), ((0, 1), 1), ((0, -1), 1)])
    svg = render_svg([(-1, 0), (1, 0)], k)
    coords = re.search(r'<polygon points="([^"]+)"', svg).group(1).split()
    pts = [tuple(map(float, c.split(","))) for c in coords]
    # consecutive outline points of a square share a coordinate
    for p, q in zip(pts, pts[1:] + pts[:1]):
        assert p[0] == q[0] or p[1] == q[1]


def test_rejects_non_planar():
    with pytest.raises(ValueError):
        render_svg([(0, 0, 0), (Fraction(1), 0, 0)])
