"""Closed-form shortest trajectories in a simplex measured by the norm of its own polar.

For a simplex with vertices ``v_0..v_n`` and the origin at barycentric
coordinates ``m_0..m_n``, every cyclic order of the vertices yields a closed
polyline whose ``i``-th edge is ``(m_i / M) v_i`` with
``M = sum_{k<l} m_k m_l``; its length is ``1/M >= 2 + 2/n``.
Euclidean quantities (Cevian ratios) are kept rational through
``|v_i| / cevian_i = 1 - m_i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateError, InternalConsistencyError, InvalidBody
from .scalars import add, affine_rank, dot, scale, solve_linear, sub, vec


def barycentric_of_origin(vertices: Sequence) -> tuple:
    verts = [vec(v) for v in vertices]
    n = len(verts[0])
    if len(verts) != n + 1:
        raise DegenerateError(f"a {n}-simplex needs {n + 1} vertices, got {len(verts)}")
    if affine_rank(verts) != n:
        raise DegenerateError("simplex vertices are affinely dependent", affine_rank(verts))
    # sum m_i v_i = 0, sum m_i = 1
    rows = [tuple(v[c] for v in verts) for c in range(n)] + [tuple(Fraction(1) for _ in verts)]
    sol = solve_linear(rows, [Fraction(0)] * n + [Fraction(1)])
    m = sol[0]
    if any(x <= 0 for x in m):
        raise InvalidBody("origin is not strictly inside the simplex")
    return m


def pair_sum(m: Sequence) -> Fraction:
    """Second elementary symmetric function of ``m``."""
    return sum((a * b for a, b in itertools.combinations(m, 2)), Fraction(0))


@dataclass(frozen=True)
class SimplexSpec:
    vertices: tuple
    m: tuple
    M: Fraction

    @classmethod
    def from_vertices(cls, vertices: Sequence) -> "SimplexSpec":
        verts = tuple(vec(v) for v in vertices)
        m = barycentric_of_origin(verts)
        return cls(verts, m, pair_sum(m))

    @property
    def n(self) -> int:
        return len(self.vertices) - 1

    def facet(self, i: int) -> tuple:
        """Row ``(u, c)`` with ``<u, x> <= c`` describing the facet opposite ``v_i``, c = 1."""
        others = [v for j, v in enumerate(self.vertices) if j != i]
        sol = solve_linear(others, [Fraction(1)] * len(others))
        return sol[0], Fraction(1)


@dataclass(frozen=True)
class SimplexTrajectory:
    order: tuple  # vertex index visited at each position
    points: tuple
    steps: tuple  # steps[i]: q_{i+1} - q_i = steps[i] * v_{order[i]}

    @property
    def total(self) -> Fraction:
        return sum(self.steps, Fraction(0))


def closed_form_trajectory(s: SimplexSpec, order: Sequence[int] | None = None) -> SimplexTrajectory:
    """q_i = sum_{j != i} (sum_{k=i}^{j-1} m_k) m_j v_j / M, indices cyclic in ``order``."""
    size = s.n + 1
    order = tuple(range(size)) if order is None else tuple(order)
    if sorted(order) != list(range(size)):
        raise ValueError(f"order must be a permutation of 0..{s.n}")
    v = [s.vertices[o] for o in order]
    m = [s.m[o] for o in order]
    pts = []
    for i in range(size):
        acc = tuple(Fraction(0) for _ in range(s.n))
        for j in range(size):
            if j == i:
                continue
            run = Fraction(0)
            k = i
            while k != j:
                run += m[k]
                k = (k + 1) % size
            acc = add(acc, scale(run * m[j] / s.M, v[j]))
        pts.append(acc)
    steps = tuple(mi / s.M for mi in m)
    return SimplexTrajectory(order, tuple(pts), steps)


def check_trajectory(s: SimplexSpec, tr: SimplexTrajectory) -> list[str]:
    """Exact audit of facet incidence and edge relations; empty list when all hold."""
    bad = []
    size = s.n + 1
    for i in range(size):
        o = tr.order[i]
        u, c = s.facet(o)
        if dot(u, tr.points[i]) != c:
            bad.append(f"q_{i} not on facet opposite v_{o}")
        edge = sub(tr.points[(i + 1) % size], tr.points[i])
        if edge != scale(tr.steps[i], s.vertices[o]):
            bad.append(f"edge {i} is not steps[{i}] * v_{o}")
        if tr.steps[i] != s.m[o] / s.M or tr.steps[i] <= 0:
            bad.append(f"step {i} differs from m/M")
    if tr.total != 1 / s.M:
        bad.append("total length differs from 1/M")
    return bad


def length_bound(n: int) -> Fraction:
    return 2 + Fraction(2, n)


def cevian_identity(s: SimplexSpec, tr: SimplexTrajectory) -> Fraction:
    """Sum over edges of |q_{i+1} - q_i| / cevian_i, evaluated as sum t_i (1 - m_i)."""
    return sum((t * (1 - s.m[o]) for t, o in zip(tr.steps, tr.order)), Fraction(0))


def cyclic_orders(size: int) -> list[tuple]:
    """Orders starting at vertex 0; a reversed traversal counts as a different order."""
    return [(0,) + p for p in itertools.permutations(range(1, size))]


@dataclass(frozen=True)
class OrdersTable:
    rows: tuple  # SimplexTrajectory per cyclic order
    same_steps: bool  # every order assigns the same step to each vertex
    distinct: bool  # all trajectories differ as point sets


def all_orders_edge_lengths(s: SimplexSpec) -> OrdersTable:
    if s.n > 4:
        raise ValueError("order enumeration is limited to dimension 4")
    rows = tuple(closed_form_trajectory(s, o) for o in cyclic_orders(s.n + 1))

    def per_vertex(tr):
        return tuple(sorted(zip(tr.order, tr.steps)))

    same = len({per_vertex(tr) for tr in rows}) == 1
    distinct = len({frozenset(tr.points) for tr in rows}) == len(rows)
    return OrdersTable(rows, same, distinct)


def midpoint_hyperplanes_concurrent(s: SimplexSpec, tr: SimplexTrajectory) -> tuple:
    """Common point of the hyperplanes through edge midpoints parallel to the matching facets."""
    size = s.n + 1
    rows, rhs = [], []
    for i in range(size):
        u, _ = s.facet(tr.order[i])
        mid = scale(Fraction(1, 2), add(tr.points[i], tr.points[(i + 1) % size]))
        rows.append(u)
        rhs.append(dot(u, mid))
    sol = solve_linear(rows, rhs)
    if sol is None:
        raise InternalConsistencyError("midpoint hyperplanes have no common point")
    if sol[1]:
        raise InternalConsistencyError("midpoint hyperplanes meet in more than a point")
    return sol[0]
