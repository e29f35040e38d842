"""Shortest closed generalized billiard trajectories in polytopes, computed exactly.

The minimum length ``xi_T(K)`` is taken over closed polygonal lines with at
most ``dim + 1`` vertices that cannot be moved into a smaller homothet of K.
Such a configuration is certified by a *contact pattern*: every bounce point
is pinned to the hyperplanes of a set of facets of K, and the normals of all
pinned facets admit a nonnegative combination equal to zero. For a fixed
pattern the length minimization is a single LP (gauge norms are maxima of
linear functions), so the global minimum is a finite sweep over patterns.

The solver restricts itself to patterns whose facet set is a *minimal*
positively dependent set (its normals span a space of dimension one less
than the set size and the unique dependency is strictly positive),
partitioned into the slots. Any surrounding pattern contains such a set and
dropping the remaining facets only relaxes the LP, so the minimum over
minimal patterns equals the minimum over all of them.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import DegenerateError, DimensionMismatch, InternalConsistencyError, InvalidBody
from .geometry import Body, ClosedPolyline, face_subsets, gauge_norm, polyline_length, support_face
from .lp import EQ, GE, LE, LPProblem, Status, solve
from .scalars import dot, fdec, nullspace, rank, sub

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FittingResult:
    """Least ``alpha`` with all points inside ``alpha*K + translate``."""

    alpha: Fraction
    translate: tuple
    dual: dict  # (point index, facet index) -> multiplier, nonzero entries only


def smallest_fitting_ratio(points: Sequence, k: Body) -> FittingResult:
    pts = [tuple(p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    n = k.dim
    if any(len(p) != n for p in pts):
        raise DimensionMismatch("point dimension differs from body dimension")
    # variables: alpha, t_1..t_n ; rows: b_j*alpha + <a_j, t> >= <a_j, q_i>
    cons = []
    keys = []
    for i, q in enumerate(pts):
        for j, (a, b) in enumerate(k.rows):
            cons.append(((b,) + a, GE, dot(a, q)))
            keys.append((i, j))
    out = solve(LPProblem((1,) + (0,) * n, cons))
    if not out.optimal:
        raise InternalConsistencyError(f"fitting LP returned {out.status.value}")
    dual = {key: y for key, y in zip(keys, out.duals) if y != 0}
    return FittingResult(out.x[0], tuple(out.x[1:]), dual)


def surrounds(normals: Sequence[Sequence]) -> bool:
    """Exact test for a nonzero nonnegative combination of ``normals`` equal to zero."""
    normals = list(normals)
    if not normals:
        return False
    n = len(normals[0])
    cons = [(tuple(Fraction(1) for _ in normals), EQ, 1)]
    for c in range(n):
        cons.append((tuple(a[c] for a in normals), EQ, 0))
    out = solve(LPProblem((0,) * len(normals), cons, frozenset(range(len(normals)))), method="primal")
    return out.optimal


@dataclass(frozen=True, order=True)
class ContactPattern:
    """Cyclic list of facet-index sets; slot ``i`` pins bounce point ``i``."""

    slots: tuple

    @property
    def m(self) -> int:
        return len(self.slots)

    @property
    def facets(self) -> tuple:
        return tuple(sorted(set(itertools.chain.from_iterable(self.slots))))

    def to_list(self) -> list:
        return [list(s) for s in self.slots]


def _canonical(slots: tuple, order_sensitive: bool) -> bool:
    m = len(slots)
    rots = [slots[r:] + slots[:r] for r in range(m)]
    if not order_sensitive:
        rev = tuple(reversed(slots))
        rots += [rev[r:] + rev[:r] for r in range(m)]
    return slots == min(rots)


def minimal_dependencies(k: Body, max_size: int | None = None) -> list[tuple]:
    """Facet sets whose normals have a unique, strictly positive linear dependency."""
    normals = [a for a, _ in k.rows]
    max_size = k.dim + 1 if max_size is None else max_size
    out = []
    for s in range(2, max_size + 1):
        for J in itertools.combinations(range(len(normals)), s):
            cols = [normals[j] for j in J]
            mat = [tuple(col[c] for col in cols) for c in range(k.dim)]
            ns = nullspace(mat)
            if len(ns) != 1:
                continue
            lam = ns[0]
            if all(x > 0 for x in lam) or all(x < 0 for x in lam):
                out.append(J)
    return out


def _set_partitions(items: tuple, m: int) -> Iterator[list[tuple]]:
    if m == 1:
        yield [items]
        return
    if len(items) < m:
        return
    first, rest = items[0], items[1:]
    # first item alone
    for part in _set_partitions(rest, m - 1):
        yield [(first,)] + part
    # first item joins a block of a partition of the rest into m blocks
    for part in _set_partitions(rest, m):
        for i in range(len(part)):
            yield part[:i] + [(first,) + part[i]] + part[i + 1:]


def enumerate_patterns(k: Body, m: int, order_sensitive: bool = True, minimal: bool = False) -> Iterator[ContactPattern]:
    """Surrounding contact patterns with ``m`` slots, one per cyclic class.

    With ``minimal=False`` every cyclic assignment of face-contact sets
    passing the surrounding test is produced. With ``minimal=True`` only
    partitions of minimal dependencies are produced (see module docs).
    Reversed traversals are separate patterns when ``order_sensitive``.
    """
    if not 2 <= m <= k.dim + 1:
        raise ValueError(f"slot count {m} outside 2..{k.dim + 1}")
    faces = [f.facets for f in face_subsets(k)]
    if minimal:
        face_set = set(faces)
        for J in minimal_dependencies(k):
            if len(J) < m:
                continue
            for part in _set_partitions(J, m):
                blocks = sorted(tuple(sorted(b)) for b in part)
                if any(b not in face_set for b in blocks):
                    continue
                head, tail = blocks[0], blocks[1:]
                for perm in itertools.permutations(tail):
                    slots = (head,) + perm
                    if _canonical(slots, order_sensitive):
                        yield ContactPattern(slots)
        return
    normals = [a for a, _ in k.rows]
    cache: dict[tuple, bool] = {}
    for slots in itertools.product(faces, repeat=m):
        if not _canonical(slots, order_sensitive):
            continue
        union = tuple(sorted(set(itertools.chain.from_iterable(slots))))
        ok = cache.get(union)
        if ok is None:
            ok = cache[union] = surrounds([normals[j] for j in union])
        if ok:
            yield ContactPattern(slots)


@dataclass(frozen=True)
class PatternLength:
    value: Fraction
    points: ClosedPolyline
    pattern: ContactPattern


def _pattern_lp(k: Body, t: Body, pattern: ContactPattern) -> LPProblem:
    n, m = k.dim, pattern.m
    nv = n * m + m
    cons = []
    for i in range(m):
        nxt = (i + 1) % m
        for p in t.vertices:
            row = [Fraction(0)] * nv
            row[n * m + i] = Fraction(1)
            for c in range(n):
                row[n * nxt + c] -= p[c]
                row[n * i + c] += p[c]
            cons.append((tuple(row), GE, 0))
        for j in pattern.slots[i]:
            a, b = k.rows[j]
            row = [Fraction(0)] * nv
            row[n * i:n * i + n] = a
            cons.append((tuple(row), EQ, b))
    return LPProblem((0,) * (n * m) + (1,) * m, cons, frozenset(range(n * m, nv)))


def pattern_min_length(k: Body, t: Body, pattern: ContactPattern) -> PatternLength | None:
    """Minimal ``||.||_T`` length of closed polylines pinned to ``pattern``; None if infeasible.

    LP: minimize sum s_i with s_i >= <p, q_{i+1} - q_i> for every vertex p of
    T and <a_j, q_i> = b_j for every facet j in slot i. The returned points
    lie on their slot hyperplanes but are not confined to K; the solver
    translates the winning configuration into K afterwards.
    """
    if k.dim != t.dim:
        raise DimensionMismatch("table and norm body differ in dimension")
    out = solve(_pattern_lp(k, t, pattern))
    if out.status is Status.INFEASIBLE:
        return None
    if out.status is Status.UNBOUNDED:
        raise InternalConsistencyError(f"pattern LP unbounded for {pattern.slots}")
    n = k.dim
    pts = tuple(tuple(out.x[n * i:n * i + n]) for i in range(pattern.m))
    return PatternLength(out.value, ClosedPolyline(pts), pattern)


def _positively_parallel(u, w) -> bool:
    return rank([u, w]) == 1 and dot(u, w) > 0


def dedupe_fake_vertices(p: ClosedPolyline, t: Body | None = None) -> ClosedPolyline:
    """Drop repeated points and points where the polyline does not turn."""
    pts = list(p.points if isinstance(p, ClosedPolyline) else p)
    changed = True
    while changed and len(pts) >= 2:
        changed = False
        for i in range(len(pts)):
            prev, cur, nxt = pts[i - 1], pts[i], pts[(i + 1) % len(pts)]
            if cur == prev or _positively_parallel(sub(cur, prev), sub(nxt, cur)):
                del pts[i]
                changed = True
                break
    if len(pts) < 2 or len(set(pts)) < 2:
        raise DegenerateError("polyline collapses to fewer than 2 distinct points")
    out = ClosedPolyline(tuple(pts))
    if t is not None and polyline_length(out, t) != polyline_length(p, t):
        raise InternalConsistencyError("fake-vertex removal changed the length")
    return out


@dataclass(frozen=True)
class BilliardSolution:
    xi: Fraction
    trajectory: ClosedPolyline
    pattern: ContactPattern
    lam: dict  # (point index, facet index) -> fitting multiplier
    segment_lengths: tuple
    bounce_count: int
    source_pattern: ContactPattern | None = None
    offset: tuple | None = None  # translation applied to K before solving

    def to_dict(self, digits: int = 12) -> dict:
        return {
            "xi": str(self.xi),
            "xi_decimal": fdec(self.xi, digits),
            "trajectory": [[str(x) for x in q] for q in self.trajectory],
            "pattern": self.pattern.to_list(),
            "lambda": {f"{i},{j}": str(v) for (i, j), v in sorted(self.lam.items())},
            "segment_lengths": [str(s) for s in self.segment_lengths],
            "bounce_count": self.bounce_count,
            "two_periodic": self.bounce_count == 2,
        }


def _solve_one(args):
    k, t, pattern = args
    return pattern_min_length(k, t, pattern)


def _sweep(k: Body, t: Body, patterns: list[ContactPattern], workers: int) -> list[PatternLength]:
    if workers > 1 and len(patterns) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            res = list(pool.map(_solve_one, [(k, t, p) for p in patterns], chunksize=8))
    else:
        res = [pattern_min_length(k, t, p) for p in patterns]
    return [r for r in res if r is not None]


def shortest_trajectory(
    k: Body,
    t: Body,
    max_m: int | None = None,
    *,
    minimal: bool = True,
    order_sensitive: bool | None = None,
    workers: int = 1,
) -> BilliardSolution:
    """Exact ``xi_T(K)`` with a certifying shortest generalized billiard trajectory.

    Ties are broken by smallest slot count, then lexicographically smallest
    pattern. If the origin is not inside K, K is first translated by minus
    its vertex centroid and the trajectory is shifted back afterwards.
    """
    if k.dim != t.dim:
        raise DimensionMismatch("table and norm body differ in dimension")
    if not t.origin_interior():
        raise InvalidBody("origin must lie strictly inside the norm body")
    offset = None
    if not k.origin_interior():
        offset = k.interior_point()
        k = k.translate(tuple(-x for x in offset))
    n = k.dim
    top = n + 1 if max_m is None else min(max_m, n + 1)
    if order_sensitive is None:
        order_sensitive = not t.is_symmetric()

    patterns = []
    for m in range(2, top + 1):
        patterns.extend(enumerate_patterns(k, m, order_sensitive, minimal))
    results = _sweep(k, t, patterns, workers)
    if not results:
        raise InternalConsistencyError("no feasible contact pattern")
    best = min(results, key=lambda r: (r.value, r.pattern.m, r.pattern.slots))
    logger.debug("swept %d patterns, best %s at %s", len(patterns), best.value, best.pattern.slots)

    traj = dedupe_fake_vertices(best.points, t)
    fit = smallest_fitting_ratio(traj.points, k)
    if fit.alpha != 1:
        raise InternalConsistencyError(f"optimal polyline has fitting ratio {fit.alpha}, expected 1")
    if not all(k.contains(q) for q in traj.points):
        shift = fit.translate
        traj = ClosedPolyline(tuple(sub(q, shift) for q in traj.points))
        fit = smallest_fitting_ratio(traj.points, k)
    slots = []
    for i, q in enumerate(traj.points):
        s = tuple(sorted(j for (ii, j) in fit.dual if ii == i))
        slots.append(s or k.hrep.active(q))
    if offset is not None:
        traj = ClosedPolyline(tuple(tuple(x + y for x, y in zip(q, offset)) for q in traj.points))
    seg = tuple(gauge_norm(t, e) for e in traj.edges())
    if sum(seg) != best.value:
        raise InternalConsistencyError("trajectory length differs from LP value")
    return BilliardSolution(
        xi=best.value,
        trajectory=traj,
        pattern=ContactPattern(tuple(slots)),
        lam=dict(fit.dual),
        segment_lengths=seg,
        bounce_count=traj.m,
        source_pattern=best.pattern,
        offset=offset,
    )


def is_two_periodic(sol: BilliardSolution) -> bool:
    return sol.bounce_count == 2


@dataclass(frozen=True)
class ReflectionCertificate:
    """Momenta ``p_i`` (arriving at bounce i), multipliers and normals with ``p_{i+1} - p_i = -lam_i n_i``."""

    momenta: tuple
    lam: tuple
    normals: tuple
    ok: bool = True

    def check(self) -> bool:
        m = len(self.momenta)
        for i in range(m):
            lhs = sub(self.momenta[(i + 1) % m], self.momenta[i])
            rhs = tuple(-self.lam[i] * x for x in self.normals[i])
            if lhs != rhs or self.lam[i] <= 0:
                return False
        return True


@dataclass(frozen=True)
class ReflectionFailure:
    index: int | None
    reason: str
    ok: bool = False


def _reflection_lp(faces, contacts, normals_of, n, bounces):
    """Variables: convex weights per segment face, multipliers per contact facet, tau."""
    m = len(faces)
    wcol, col = {}, 0
    for i in range(m):
        for v in range(len(faces[i])):
            wcol[i, v] = col
            col += 1
    mcol = {}
    for i in bounces:
        for j in contacts[i]:
            mcol[i, j] = col
            col += 1
    tau = col
    nv = col + 1
    cons = []
    segs = sorted({i for i in bounces} | {(i - 1) % m for i in bounces})
    for i in segs:
        row = [0] * nv
        for v in range(len(faces[i])):
            row[wcol[i, v]] = 1
        cons.append((tuple(row), EQ, 1))
    for i in bounces:
        # outgoing momentum (segment i) - incoming (segment i-1) + sum mu a = 0
        for c in range(n):
            row = [Fraction(0)] * nv
            for v, p in enumerate(faces[i]):
                row[wcol[i, v]] += p[c]
            for v, p in enumerate(faces[(i - 1) % m]):
                row[wcol[(i - 1) % m, v]] -= p[c]
            for j in contacts[i]:
                row[mcol[i, j]] += normals_of[j][c]
            cons.append((tuple(row), EQ, 0))
        row = [0] * nv
        for j in contacts[i]:
            row[mcol[i, j]] = 1
        row[tau] = -1
        cons.append((tuple(row), GE, 0))
    row = [0] * nv
    row[tau] = 1
    cons.append((tuple(row), LE, 1))
    obj = [0] * nv
    obj[tau] = -1
    nonneg = frozenset(range(tau))
    return LPProblem(tuple(obj), cons, nonneg), wcol, mcol, tau


def verify_reflection(sol: BilliardSolution, k: Body, t: Body) -> ReflectionCertificate | ReflectionFailure:
    """Search exactly for momenta in the support faces of T and positive multipliers
    on the normal cones of K satisfying the reflection rule at every bounce."""
    pts = sol.trajectory.points
    if sol.offset is not None:
        pts = tuple(sub(q, sol.offset) for q in pts)
        k = k.translate(tuple(-x for x in sol.offset))
    m, n = len(pts), k.dim
    edges = [sub(pts[(i + 1) % m], pts[i]) for i in range(m)]
    faces = [support_face(t, e) for e in edges]
    contacts = [k.hrep.active(q) if k.contains(q) else () for q in pts]
    normals_of = [a for a, _ in k.rows]
    for i in range(m):
        if not contacts[i]:
            return ReflectionFailure(i, "bounce point is not on the boundary of K")
    prob, wcol, mcol, tau = _reflection_lp(faces, contacts, normals_of, n, list(range(m)))
    out = solve(prob)
    if out.optimal and out.x[tau] > 0:
        x = out.x
        seg_mom = []
        for i in range(m):
            seg_mom.append(tuple(sum((x[wcol[i, v]] * p[c] for v, p in enumerate(faces[i])), Fraction(0)) for c in range(n)))
        momenta, lams, norms = [], [], []
        for i in range(m):
            momenta.append(seg_mom[(i - 1) % m])
            lam = sum((x[mcol[i, j]] for j in contacts[i]), Fraction(0))
            lams.append(lam)
            norms.append(tuple(sum((x[mcol[i, j]] * normals_of[j][c] for j in contacts[i]), Fraction(0)) / lam for c in range(n)))
        cert = ReflectionCertificate(tuple(momenta), tuple(lams), tuple(norms))
        if not cert.check():
            raise InternalConsistencyError("reflection certificate fails its own identity")
        return cert
    for i in range(m):
        local, _, _, ltau = _reflection_lp(faces, contacts, normals_of, n, [i])
        lo = solve(local)
        if not (lo.optimal and lo.x[ltau] > 0):
            return ReflectionFailure(i, "no momenta and positive normal multiplier at this bounce")
    return ReflectionFailure(None, "local reflection conditions hold but no cyclically consistent momenta exist")
