"""Brute-force upper bounds on xi_T(K) from boundary samples.

Bounce points are sampled on the boundary of K on a rational grid (every
edge split into ``resolution`` equal parts). Sample points sharing an
active facet set form a group; a tuple of groups is admissible when a
representative tuple cannot be shrunk into a smaller homothet of K, which
is decided by the exact fitting LP and holds for every tuple drawn from the
same groups. Lengths are evaluated with numpy in integer arithmetic after
clearing denominators, so the returned value is the exact minimum over the
grid. Grids are nested when the resolution is
multiplied, so the value can only decrease along 8, 16, 32, ...
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .billiard import smallest_fitting_ratio
from .errors import DimensionMismatch, InternalConsistencyError
from .geometry import Body, gauge_norm
from .scalars import centroid, dot

EXHAUSTIVE_2D = "exhaustive-2d"
RANDOM_3D = "random-3d"

@dataclass(frozen=True)
class OracleConfig:
    resolution: int = 32
    max_m: int = 3
    mode: str = EXHAUSTIVE_2D
    budget: int | None = None  # tuples to evaluate; mode default when None
    seed: int = 0

    def __post_init__(self):
        if self.budget is None:
            object.__setattr__(self, "budget", 50_000_000 if self.mode == EXHAUSTIVE_2D else 2000)
        if self.resolution < 2:
            raise ValueError("resolution must be at least 2")
        if self.mode not in (EXHAUSTIVE_2D, RANDOM_3D):
            raise ValueError(f"unknown oracle mode {self.mode!r}")
        top = 3 if self.mode == EXHAUSTIVE_2D else 4
        if not 2 <= self.max_m <= top:
            raise ValueError(f"max_m must be in 2..{top} for {self.mode}")


@dataclass(frozen=True)
class OracleResult:
    value: Fraction | None
    points: tuple
    partial: bool
    evaluated: int


def _exact_length(t: Body, pts) -> Fraction:
    m = len(pts)
    return sum((gauge_norm(t, tuple(b - a for a, b in zip(pts[i], pts[(i + 1) % m]))) for i in range(m)), Fraction(0))


def _boundary_groups(k: Body, res: int) -> list[tuple[tuple, list]]:
    """(active facet set, sample points) for every edge interior and every vertex."""
    groups = []
    for v in k.vertices:
        groups.append((k.hrep.active(v), [v]))
    for j, (a, b) in enumerate(k.rows):
        ends = [v for v in k.vertices if dot(a, v) == b]
        u, w = ends
        pts = [tuple(x + Fraction(s, res) * (y - x) for x, y in zip(u, w)) for s in range(1, res)]
        groups.append(((j,), pts))
    return groups


def _admissible(k: Body, reps) -> bool:
    return smallest_fitting_ratio(reps, k).alpha >= 1


def _common_denominator(values) -> int:
    d = 1
    for x in values:
        d = math.lcm(d, x.denominator)
    return d


def _int_array(points, scale: int, dtype) -> np.ndarray:
    return np.array([[int(x * scale) for x in p] for p in points], dtype=dtype)


def _exhaustive_2d(k: Body, t: Body, cfg: OracleConfig) -> OracleResult:
    groups = _boundary_groups(k, cfg.resolution)
    # exact integer screening: lengths are scaled by D*E and stay integral
    big_d = _common_denominator(x for _, pts in groups for p in pts for x in p)
    big_e = _common_denominator(x for p in t.vertices for x in p)
    coord_max = max(abs(x) for _, pts in groups for p in pts for x in p) * big_d
    tv_max = max(abs(x) for p in t.vertices for x in p) * big_e
    bound = 2 * coord_max * tv_max * k.dim * cfg.max_m
    dtype = np.int64 if bound < 2**62 else object
    ints = [_int_array(pts, big_d, dtype) for _, pts in groups]
    tv = _int_array(t.vertices, big_e, dtype)

    admissible_cache: dict[frozenset, bool] = {}
    combos = []
    for m in range(2, cfg.max_m + 1):
        for gt in itertools.product(range(len(groups)), repeat=m):
            rots = [gt[r:] + gt[:r] for r in range(m)]
            if gt != min(rots):
                continue
            union = frozenset(itertools.chain.from_iterable(groups[g][0] for g in gt))
            ok = admissible_cache.get(union)
            if ok is None:
                reps = [centroid(groups[g][1]) for g in gt]
                ok = admissible_cache[union] = _admissible(k, reps)
            if ok:
                combos.append(gt)

    def lengths(gt):
        m = len(gt)
        shaped = []
        for i, g in enumerate(gt):
            shape = [1] * m + [k.dim]
            shape[i] = ints[g].shape[0]
            shaped.append(ints[g].reshape(shape))
        total = 0
        for i in range(m):
            w = shaped[(i + 1) % m] - shaped[i]
            total = total + np.max(np.tensordot(w, tv.T, axes=1), axis=-1)
        return total

    evaluated = 0
    partial = False
    best = None
    for gt in combos:
        size = math.prod(len(groups[g][1]) for g in gt)
        if evaluated + size > cfg.budget:
            partial = True
            break
        evaluated += size
        arr = lengths(gt)
        flat = int(np.argmin(arr))
        val = int(arr.flat[flat])
        if best is None or val < best[0]:
            idx = np.unravel_index(flat, arr.shape)
            best = (val, tuple(groups[g][1][i] for g, i in zip(gt, idx)))
    if best is None:
        return OracleResult(None, (), partial, evaluated)
    pts = best[1]
    value = _exact_length(t, pts)
    if value != Fraction(best[0], big_d * big_e):
        raise InternalConsistencyError("integer screening disagrees with exact length")
    if smallest_fitting_ratio(pts, k).alpha < 1:
        raise InternalConsistencyError("oracle accepted a configuration that fits a smaller homothet")
    return OracleResult(value, pts, partial, evaluated)


def _random_boundary_point(rng: random.Random, k: Body, res: int):
    a, b = k.rows[rng.randrange(len(k.rows))]
    face = [v for v in k.vertices if dot(a, v) == b]
    w = [rng.randint(0, res) for _ in face]
    if sum(w) == 0:
        w[0] = 1
    s = sum(w)
    return tuple(sum((Fraction(wi, s) * v[c] for wi, v in zip(w, face)), Fraction(0)) for c in range(k.dim))


def _random_mode(k: Body, t: Body, cfg: OracleConfig) -> OracleResult:
    rng = random.Random(cfg.seed)
    best = None
    for _ in range(cfg.budget):
        m = rng.randint(2, min(cfg.max_m, k.dim + 1))
        pts = tuple(_random_boundary_point(rng, k, cfg.resolution) for _ in range(m))
        length = _exact_length(t, pts)
        if best is not None and (length, pts) >= best:
            continue
        if smallest_fitting_ratio(pts, k).alpha >= 1:
            best = (length, pts)
    if best is None:
        return OracleResult(None, (), True, cfg.budget)
    return OracleResult(best[0], best[1], False, cfg.budget)


def oracle_xi(k: Body, t: Body, cfg: OracleConfig | None = None) -> OracleResult:
    """Upper bound on xi_T(K) attained by an explicit sampled configuration."""
    cfg = cfg or OracleConfig()
    if k.dim != t.dim:
        raise DimensionMismatch("table and norm body differ in dimension")
    if cfg.mode == EXHAUSTIVE_2D:
        if k.dim != 2:
            raise DimensionMismatch("exhaustive oracle mode needs dimension 2")
        return _exhaustive_2d(k, t, cfg)
    return _random_mode(k, t, cfg)
