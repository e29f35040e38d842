"""Exact scalar helpers: parsing, formatting and small linear algebra over Fraction."""

from __future__ import annotations

from decimal import Context, Decimal
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]

DECIMAL_DIGITS = 12


def to_fraction(value) -> Fraction:
    """Accept int, Fraction, mpq or a "p/q" / integer / decimal string. Floats are rejected."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass a string or Fraction")
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot interpret {value!r} as a rational")


def vec(values: Iterable) -> Vector:
    return tuple(to_fraction(v) for v in values)


def fstr(x: Fraction) -> str:
    return str(x)


def fdec(x: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    ctx = Context(prec=digits)
    return str(ctx.divide(Decimal(x.numerator), Decimal(x.denominator)))


def dot(u: Sequence, w: Sequence):
    return sum((a * b for a, b in zip(u, w)), Fraction(0))


def add(u: Sequence, w: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, w))


def sub(u: Sequence, w: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, w))


def scale(s, u: Sequence) -> Vector:
    return tuple(s * a for a in u)


def centroid(points: Sequence[Sequence]) -> Vector:
    n = len(points)
    return tuple(sum(c, Fraction(0)) / n for c in zip(*points))


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    mat = [[to_fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    if not mat:
        return mat, pivots
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull (-1 for the empty set)."""
    if not points:
        return -1
    base = points[0]
    return rank([sub(p, base) for p in points[1:]]) if len(points) > 1 else 0


def solve_linear(a: Sequence[Sequence], b: Sequence):
    """Solve a x = b exactly. Returns (particular solution, nullspace basis) or None if inconsistent."""
    ncols = len(a[0]) if a else 0
    aug = [list(r) + [bb] for r, bb in zip(a, b)]
    mat, piv = rref(aug)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, c in zip(mat, piv):
        x[c] = row[-1]
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, c in zip(mat, piv):
            v[c] = -row[f]
        basis.append(tuple(v))
    return tuple(x), basis


def nullspace(a: Sequence[Sequence]) -> list[Vector]:
    if not a:
        return []
    return solve_linear(a, [0] * len(a))[1]
