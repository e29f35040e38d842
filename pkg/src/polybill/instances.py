"""Seeded random instances for property suites and tests."""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import InvalidBody
from .geometry import Body, TABLE


def random_polygon(rng: random.Random, max_vertices: int = 8, box: int = 6, role: str = TABLE) -> Body:
    """Integer-vertex polygon with at most ``max_vertices`` vertices and the origin strictly inside."""
    while True:
        count = rng.randint(3, max_vertices + 2)
        pts = {(rng.randint(-box, box), rng.randint(-box, box)) for _ in range(count)}
        try:
            b = Body.from_vrep(pts, role)
        except InvalidBody:
            continue
        if 3 <= len(b.vertices) <= max_vertices and b.origin_interior():
            return b


def random_symmetric_polygon(rng: random.Random, max_vertices: int = 8, box: int = 6, role: str = TABLE) -> Body:
    """Centrally symmetric integer polygon with at most ``max_vertices`` vertices."""
    while True:
        half = rng.randint(2, max_vertices // 2 + 1)
        pts = set()
        for _ in range(half):
            p = (rng.randint(-box, box), rng.randint(-box, box))
            pts.add(p)
            pts.add((-p[0], -p[1]))
        try:
            b = Body.from_vrep(pts, role)
        except InvalidBody:
            continue
        if 4 <= len(b.vertices) <= max_vertices:
            return b


def random_simplex(rng: random.Random, dim: int, box: int = 5, role: str = TABLE) -> Body:
    """Simplex with integer vertices and the origin strictly inside."""
    while True:
        pts = [tuple(rng.randint(-box, box) for _ in range(dim)) for _ in range(dim + 1)]
        try:
            b = Body.from_vrep(pts, role)
        except InvalidBody:
            continue
        if len(b.vertices) == dim + 1 and b.origin_interior():
            return b


def random_barycentric(rng: random.Random, count: int, denom: int = 12) -> tuple:
    """Strictly positive rational weights summing to one."""
    w = [rng.randint(1, denom) for _ in range(count)]
    s = sum(w)
    return tuple(Fraction(x, s) for x in w)


def random_scale(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 9), rng.randint(1, 5))
