"""Exact convex polytopes: H/V representations, polarity, Minkowski sums, faces and gauge norms.

Conversions enumerate subsets with exact rank tests, which is fine for the
small dimensions (2..4) and facet counts (a few dozen) this package targets.
Facet rows are normalized so that ``b`` is 1 whenever the origin lies
strictly inside the polytope; for other rows ``b`` is -1, or the normal is
scaled to have its first nonzero entry of absolute value 1 when ``b == 0``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DegenerateError, DimensionMismatch, InvalidBody
from .lp import LE, LPProblem, solve
from .scalars import (
    affine_rank,
    centroid,
    dot,
    nullspace,
    rank,
    solve_linear,
    sub,
    to_fraction,
    vec,
)

TABLE = "table"
NORM_BODY = "norm-body"
MAX_DIM = 6


def _normalize_row(a: tuple, b: Fraction) -> tuple[tuple, Fraction]:
    if b != 0:
        s = abs(b)
    else:
        s = next((abs(x) for x in a if x != 0), None)
        if s is None:
            raise InvalidBody("zero normal vector in halfspace row")
    return tuple(x / s for x in a), b / s


@dataclass(frozen=True)
class HPolytope:
    """``{x : <a_j, x> <= b_j}``; rows are stored normalized."""

    dim: int
    rows: tuple

    @classmethod
    def from_rows(cls, rows: Iterable, dim: int | None = None) -> "HPolytope":
        out = []
        seen = set()
        for a, b in rows:
            a = vec(a)
            if dim is None:
                dim = len(a)
            if len(a) != dim:
                raise DimensionMismatch(f"row of length {len(a)} in dimension {dim}")
            row = _normalize_row(a, to_fraction(b))
            if row not in seen:
                seen.add(row)
                out.append(row)
        if dim is None:
            raise InvalidBody("no halfspaces given")
        return cls(dim, tuple(out))

    def __len__(self):
        return len(self.rows)

    def normals(self) -> list[tuple]:
        return [a for a, _ in self.rows]

    def contains(self, x: Sequence) -> bool:
        return all(dot(a, x) <= b for a, b in self.rows)

    def active(self, x: Sequence) -> tuple[int, ...]:
        return tuple(j for j, (a, b) in enumerate(self.rows) if dot(a, x) == b)

    def origin_interior(self) -> bool:
        return all(b > 0 for _, b in self.rows)


@dataclass(frozen=True)
class VPolytope:
    dim: int
    vertices: tuple

    @classmethod
    def from_points(cls, points: Iterable, dim: int | None = None) -> "VPolytope":
        pts = sorted(set(vec(p) for p in points))
        if dim is None:
            if not pts:
                raise InvalidBody("no points given")
            dim = len(pts[0])
        if any(len(p) != dim for p in pts):
            raise DimensionMismatch("points of mixed dimension")
        return cls(dim, tuple(pts))

    def __len__(self):
        return len(self.vertices)


def _check_dim(dim: int):
    if not 1 <= dim <= MAX_DIM:
        raise InvalidBody(f"dimension {dim} outside supported range 1..{MAX_DIM}")


def _bounded_nonempty(h: HPolytope):
    """Raise unless h is nonempty and bounded (2*dim exact LPs)."""
    n = h.dim
    cons = [(a, LE, b) for a, b in h.rows]
    for k in range(n):
        for sgn in (1, -1):
            c = tuple(Fraction(sgn) if i == k else Fraction(0) for i in range(n))
            out = solve(LPProblem(c, cons))
            if out.status.value == "infeasible":
                raise InvalidBody("halfspace system is empty")
            if out.status.value == "unbounded":
                raise InvalidBody("halfspace system is unbounded")


def hrep_to_vrep(h: HPolytope) -> VPolytope:
    """Vertices of a bounded, full-dimensional H-polytope."""
    _check_dim(h.dim)
    _bounded_nonempty(h)
    n = h.dim
    found = set()
    for idx in itertools.combinations(range(len(h.rows)), n):
        a = [h.rows[j][0] for j in idx]
        sol = solve_linear(a, [h.rows[j][1] for j in idx])
        if sol is None or sol[1]:
            continue
        x = sol[0]
        if h.contains(x):
            found.add(x)
    verts = sorted(found)
    d = affine_rank(verts)
    if d < n:
        raise DegenerateError(f"polytope is not full-dimensional (affine dimension {d})", d)
    return VPolytope(n, tuple(verts))


def _hull_2d(points: list[tuple]) -> list[tuple]:
    """Strictly convex hull, counterclockwise (Andrew's monotone chain)."""
    pts = sorted(set(points))

    def cross(o, p, q):
        return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _facets_nd(points: list[tuple], n: int) -> list[tuple]:
    rows = {}
    for idx in itertools.combinations(range(len(points)), n):
        base = points[idx[0]]
        diffs = [sub(points[i], base) for i in idx[1:]]
        ns = nullspace(diffs)
        if len(ns) != 1:
            continue
        a = ns[0]
        b = dot(a, base)
        vals = [dot(a, p) - b for p in points]
        if all(v <= 0 for v in vals):
            pass
        elif all(v >= 0 for v in vals):
            a, b = tuple(-x for x in a), -b
        else:
            continue
        row = _normalize_row(a, b)
        if row in rows:
            continue
        tight = [p for p, v in zip(points, vals) if v == 0]
        if affine_rank(tight) == n - 1:
            rows[row] = True
    return list(rows)


def _angle_cmp(u, w):
    def half(v):
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    hu, hw = half(u), half(w)
    if hu != hw:
        return hu - hw
    c = u[0] * w[1] - u[1] * w[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


def vrep_to_hrep(v: VPolytope) -> HPolytope:
    """Irredundant facet rows of conv(v) with outward normals."""
    _check_dim(v.dim)
    pts = list(v.vertices)
    n = v.dim
    d = affine_rank(pts)
    if d < n:
        raise DegenerateError(f"point set spans only an affine subspace of dimension {d}", d)
    if n == 1:
        lo, hi = min(pts)[0], max(pts)[0]
        return HPolytope.from_rows([((1,), hi), ((-1,), -lo)], 1)
    if n == 2:
        hull = _hull_2d(pts)
        rows = []
        for i, u in enumerate(hull):
            w = hull[(i + 1) % len(hull)]
            a = (w[1] - u[1], u[0] - w[0])
            rows.append((a, dot(a, u)))
    else:
        rows = _facets_nd(pts, n)
    h = HPolytope.from_rows(rows, n)
    return _sort_rows(h)


def _sort_rows(h: HPolytope) -> HPolytope:
    if h.dim == 2:
        key = cmp_to_key(lambda r, s: _angle_cmp(r[0], s[0]))
    else:
        key = None
    return HPolytope(h.dim, tuple(sorted(h.rows, key=key)))


def _extreme(h: HPolytope, points: Iterable) -> list[tuple]:
    out = []
    for p in points:
        act = h.active(p)
        if rank([h.rows[j][0] for j in act]) == h.dim:
            out.append(p)
    return sorted(set(out))


def _irredundant(h: HPolytope, verts: Sequence) -> HPolytope:
    keep = []
    for a, b in h.rows:
        tight = [p for p in verts if dot(a, p) == b]
        if affine_rank(tight) == h.dim - 1:
            keep.append((a, b))
    return HPolytope(h.dim, tuple(keep))


@dataclass(frozen=True)
class Body:
    """Convex polytope carrying synchronized H and V representations."""

    hrep: HPolytope
    vrep: VPolytope
    role: str = TABLE

    @property
    def dim(self) -> int:
        return self.hrep.dim

    @property
    def vertices(self) -> tuple:
        return self.vrep.vertices

    @property
    def rows(self) -> tuple:
        return self.hrep.rows

    @classmethod
    def from_hrep(cls, rows, role: str = TABLE, dim: int | None = None) -> "Body":
        h = rows if isinstance(rows, HPolytope) else HPolytope.from_rows(rows, dim)
        v = hrep_to_vrep(h)
        return cls(_irredundant(h, v.vertices), v, role)

    @classmethod
    def from_vrep(cls, points, role: str = TABLE, dim: int | None = None) -> "Body":
        v0 = points if isinstance(points, VPolytope) else VPolytope.from_points(points, dim)
        h = vrep_to_hrep(v0)
        v = VPolytope(h.dim, tuple(_extreme(h, v0.vertices)))
        return cls(h, v, role)

    def with_role(self, role: str) -> "Body":
        return Body(self.hrep, self.vrep, role)

    def check(self) -> list[str]:
        """Exact synchronization audit; empty list when hrep and vrep agree."""
        bad = []
        h, v = self.hrep, self.vrep
        if h.dim != v.dim:
            bad.append("dimension mismatch")
            return bad
        for p in v.vertices:
            if not h.contains(p):
                bad.append(f"vertex {p} violates a row")
            elif rank([h.rows[j][0] for j in h.active(p)]) != h.dim:
                bad.append(f"vertex {p} is not extreme")
        for j, (a, b) in enumerate(h.rows):
            tight = [p for p in v.vertices if dot(a, p) == b]
            if affine_rank(tight) != h.dim - 1:
                bad.append(f"row {j} is not a facet")
        if affine_rank(list(v.vertices)) != h.dim:
            bad.append("not full-dimensional")
        return bad

    def origin_interior(self) -> bool:
        return self.hrep.origin_interior()

    def contains(self, x: Sequence) -> bool:
        return self.hrep.contains(x)

    def contains_body(self, other: "Body") -> bool:
        return all(self.contains(p) for p in other.vertices)

    def is_symmetric(self) -> bool:
        vs = set(self.vertices)
        return all(tuple(-x for x in p) in vs for p in vs)

    def translate(self, t: Sequence) -> "Body":
        """Shifted copy; facet order is preserved."""
        t = vec(t)
        if len(t) != self.dim:
            raise DimensionMismatch("translation vector has wrong length")
        rows = [_normalize_row(a, b + dot(a, t)) for a, b in self.rows]
        verts = VPolytope.from_points([tuple(x + y for x, y in zip(p, t)) for p in self.vertices], self.dim)
        return Body(HPolytope(self.dim, tuple(rows)), verts, self.role)

    def scale(self, s) -> "Body":
        s = to_fraction(s)
        if s <= 0:
            raise ValueError("scale factor must be positive")
        rows = [(a, b * s) for a, b in self.rows]
        return Body(HPolytope.from_rows(rows, self.dim), VPolytope.from_points([tuple(s * x for x in p) for p in self.vertices]), self.role)

    def interior_point(self) -> tuple:
        return centroid(self.vertices)


def _require_origin_interior(b: Body, what: str = "body"):
    if not b.origin_interior():
        raise InvalidBody(f"origin is not strictly inside the {what}")


def polar_dual(b: Body) -> Body:
    """``{y : <y, x> <= 1 for all x in b}``; vertices and facets swap roles."""
    _require_origin_interior(b)
    rows = tuple(_sort_rows(HPolytope.from_rows([(p, 1) for p in b.vertices], b.dim)).rows)
    verts = VPolytope.from_points([a for a, _ in b.rows], b.dim)
    role = NORM_BODY if b.role == TABLE else TABLE
    return Body(HPolytope(b.dim, rows), verts, role)


def gauge_norm(t: Body, w: Sequence) -> Fraction:
    """``||w||_T = max_{p in T} <p, w>``; not assumed symmetric."""
    if len(w) != t.dim:
        raise DimensionMismatch(f"vector of length {len(w)} for body of dimension {t.dim}")
    return max(dot(p, w) for p in t.vertices)


def support_face(t: Body, w: Sequence) -> list[tuple]:
    """Vertices of t maximizing <p, w>."""
    vals = [dot(p, w) for p in t.vertices]
    top = max(vals)
    return [p for p, v in zip(t.vertices, vals) if v == top]


@dataclass(frozen=True)
class ClosedPolyline:
    points: tuple

    def __post_init__(self):
        pts = tuple(vec(p) for p in self.points)
        if len(pts) < 2:
            raise ValueError("closed polyline needs at least 2 points")
        if len({len(p) for p in pts}) != 1:
            raise DimensionMismatch("points of mixed dimension")
        object.__setattr__(self, "points", pts)

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def edges(self) -> list[tuple]:
        pts = self.points
        return [sub(pts[(i + 1) % len(pts)], pts[i]) for i in range(len(pts))]

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def polyline_length(p: ClosedPolyline, t: Body) -> Fraction:
    """Sum of gauge norms of the directed cyclic edges."""
    if not isinstance(p, ClosedPolyline):
        p = ClosedPolyline(tuple(p))
    if p.dim != t.dim:
        raise DimensionMismatch("polyline and norm body differ in dimension")
    return sum((gauge_norm(t, e) for e in p.edges()), Fraction(0))


def minkowski_sum(a: Body, b: Body) -> Body:
    if a.dim != b.dim:
        raise DimensionMismatch("Minkowski sum of bodies of different dimension")
    pts = {tuple(x + y for x, y in zip(p, q)) for p in a.vertices for q in b.vertices}
    return Body.from_vrep(pts, a.role, a.dim)


@dataclass(frozen=True)
class FaceSubset:
    facets: tuple
    witness: tuple


def face_subsets(h) -> list[FaceSubset]:
    """All facet-index sets whose common face is nonempty, each with a relative-interior witness.

    Accepts an HPolytope or a Body. A set qualifies iff it is contained in
    the active set of some vertex.
    """
    if isinstance(h, Body):
        hp, verts = h.hrep, h.vertices
    else:
        hp, verts = h, hrep_to_vrep(h).vertices
    on = {}
    for p in verts:
        act = hp.active(p)
        for r in range(1, len(act) + 1):
            for sub_ in itertools.combinations(act, r):
                on.setdefault(sub_, []).append(p)
    out = [FaceSubset(k, centroid(pts)) for k, pts in on.items()]
    out.sort(key=lambda f: (len(f.facets), f.facets))
    return out


# --- file format ----------------------------------------------------------

def _rat(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def body_to_dict(b: Body) -> dict:
    return {
        "dim": b.dim,
        "hrep": [{"a": [_rat(x) for x in a], "b": _rat(bb)} for a, bb in b.rows],
        "vrep": [[_rat(x) for x in p] for p in b.vertices],
    }


def body_from_dict(obj: dict, role: str = TABLE) -> Body:
    """Parse the Body file format; validates and synchronizes representations."""
    if not isinstance(obj, dict):
        raise InvalidBody("body description must be an object")
    dim = obj.get("dim")
    hrows = obj.get("hrep")
    vpts = obj.get("vrep")
    if hrows is None and vpts is None:
        raise InvalidBody("body needs 'hrep' or 'vrep'")
    try:
        if hrows is not None:
            rows = [(r["a"], r["b"]) for r in hrows]
            body = Body.from_hrep(rows, role, dim)
            if vpts is not None:
                other = VPolytope.from_points(vpts, body.dim)
                if set(other.vertices) != set(body.vertices):
                    raise InvalidBody("'hrep' and 'vrep' describe different polytopes")
        else:
            body = Body.from_vrep(vpts, role, dim)
    except (KeyError, TypeError, ZeroDivisionError) as exc:
        raise InvalidBody(f"malformed body description: {exc}") from exc
    if dim is not None and body.dim != dim:
        raise DimensionMismatch(f"declared dim {dim} but data has dimension {body.dim}")
    return body


def load_body(path, role: str = TABLE) -> Body:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidBody(f"{path}: not valid JSON ({exc})") from exc
    return body_from_dict(obj, role)


def dump_body(b: Body, path) -> None:
    Path(path).write_text(json.dumps(body_to_dict(b), indent=2) + "\n")


# --- common bodies ---------------------------------------------------------

def cube(dim: int, r=1, role: str = TABLE) -> Body:
    r = to_fraction(r)
    return Body.from_vrep(itertools.product((-r, r), repeat=dim), role)


def cross_polytope(dim: int, r=1, role: str = TABLE) -> Body:
    r = to_fraction(r)
    pts = []
    for k in range(dim):
        for s in (r, -r):
            pts.append(tuple(s if i == k else Fraction(0) for i in range(dim)))
    return Body.from_vrep(pts, role)


def centroid_simplex(dim: int, role: str = TABLE) -> Body:
    """Simplex e_1..e_n, -(e_1+...+e_n): the origin is its centroid."""
    pts = [tuple(Fraction(int(i == k)) for i in range(dim)) for k in range(dim)]
    pts.append(tuple(Fraction(-1) for _ in range(dim)))
    return Body.from_vrep(pts, role)
