"""Exact rational linear programming.

Two-phase dense-tableau simplex with Bland's anti-cycling rule. Every
quantity stays rational: inputs are converted to ``gmpy2.mpq`` (falling back
to :class:`fractions.Fraction`) for the pivoting loop and results are handed
back as ``Fraction``.

Variables are free unless listed in ``LPProblem.nonneg``. Dual multipliers
follow the usual sign convention for ``minimize c.x``: ``>=`` rows carry
``y >= 0``, ``<=`` rows carry ``y <= 0``, equality rows are free, and at an
optimum ``c.x == b.y`` exactly.

Growth: each pivot maps an entry ``t`` to ``t - f*g/p``. Without rounding,
numerator and denominator sizes grow at worst linearly in the number of
pivots times the bit size of the data (Edmonds' bound on subdeterminants of
the constraint matrix), so for desk-scale problems (tens of rows, entries
with a few digits) numbers stay at a few hundred bits at most.

When there are clearly more constraints than variables the problem is
solved through its explicit dual, which has a much shorter tableau; the
primal point is then read off the dual's multipliers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .scalars import to_fraction

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

LE, EQ, GE = "<=", "=", ">="
_RELATIONS = (LE, EQ, GE)


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    row: tuple
    rel: str
    rhs: Fraction


@dataclass(frozen=True)
class LPProblem:
    """minimize ``objective . x`` subject to ``constraints``.

    ``constraints`` may be given as ``(row, rel, rhs)`` triples; they are
    normalized to :class:`Constraint` with ``Fraction`` entries.
    """

    objective: tuple
    constraints: tuple = ()
    nonneg: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        obj = tuple(to_fraction(c) for c in self.objective)
        n = len(obj)
        if n == 0:
            raise ValueError("LP needs at least one variable")
        cons = []
        for con in self.constraints:
            if not isinstance(con, Constraint):
                row, rel, rhs = con
                con = Constraint(tuple(to_fraction(a) for a in row), rel, to_fraction(rhs))
            if con.rel not in _RELATIONS:
                raise ValueError(f"unknown relation {con.rel!r}")
            if len(con.row) != n:
                raise ValueError(f"constraint row has {len(con.row)} entries, expected {n}")
            cons.append(con)
        nonneg = frozenset(self.nonneg)
        if any(not (0 <= k < n) for k in nonneg):
            raise ValueError("nonneg index out of range")
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", tuple(cons))
        object.__setattr__(self, "nonneg", nonneg)

    @property
    def nvars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LPOutcome:
    status: Status
    x: tuple | None = None
    value: Fraction | None = None
    duals: tuple | None = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    def check(self, problem: LPProblem) -> list[str]:
        """Term-by-term exact KKT audit; returns a list of violations (empty when sound)."""
        if not self.optimal:
            return []
        bad = []
        x, y = self.x, self.duals
        c = problem.objective
        for r, con in enumerate(problem.constraints):
            lhs = sum((a * xi for a, xi in zip(con.row, x)), Fraction(0))
            slack = lhs - con.rhs
            if (con.rel == LE and slack > 0) or (con.rel == GE and slack < 0) or (con.rel == EQ and slack != 0):
                bad.append(f"primal row {r} violated")
            if (con.rel == LE and y[r] > 0) or (con.rel == GE and y[r] < 0):
                bad.append(f"dual sign row {r}")
            if y[r] * slack != 0:
                bad.append(f"complementary slackness row {r}")
        for k in range(problem.nvars):
            red = c[k] - sum((con.row[k] * y[r] for r, con in enumerate(problem.constraints)), Fraction(0))
            if k in problem.nonneg:
                if x[k] < 0:
                    bad.append(f"x[{k}] negative")
                if red < 0:
                    bad.append(f"reduced cost {k} negative")
                if red * x[k] != 0:
                    bad.append(f"complementary slackness var {k}")
            elif red != 0:
                bad.append(f"stationarity var {k}")
        dual_value = sum((con.rhs * y[r] for r, con in enumerate(problem.constraints)), Fraction(0))
        if dual_value != self.value:
            bad.append("strong duality")
        return bad


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class _Tableau:
    """Standard form ``min c.z, A z = b, z >= 0, b >= 0`` with an identity start basis."""

    def __init__(self, rows, rhs, ncols, basis):
        self.m = len(rows)
        self.ncols = ncols
        self.t = [list(r) + [b] for r, b in zip(rows, rhs)]
        self.basis = list(basis)
        self.rc = None

    def set_cost(self, cost):
        rc = list(cost) + [_Q(0)]
        for i, bvar in enumerate(self.basis):
            cb = cost[bvar]
            if cb:
                rc = [a - cb * b for a, b in zip(rc, self.t[i])]
        self.rc = rc

    def pivot(self, r, e):
        t = self.t
        prow = t[r]
        inv = 1 / prow[e]
        prow = [a * inv for a in prow]
        t[r] = prow
        for i in range(self.m):
            if i != r:
                f = t[i][e]
                if f:
                    t[i] = [a - f * b for a, b in zip(t[i], prow)]
        f = self.rc[e]
        if f:
            self.rc = [a - f * b for a, b in zip(self.rc, prow)]
        self.basis[r] = e

    def run(self, allowed: int) -> bool:
        """Bland's rule over columns ``< allowed``. Returns False if unbounded."""
        t = self.t
        while True:
            rc = self.rc
            e = next((j for j in range(allowed) if rc[j] < 0), None)
            if e is None:
                return True
            best = None
            for i in range(self.m):
                a = t[i][e]
                if a > 0:
                    ratio = t[i][-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], e)


def _solve_primal(problem: LPProblem) -> LPOutcome:
    n = problem.nvars
    varcols = []
    ncol = 0
    for k in range(n):
        if k in problem.nonneg:
            varcols.append((ncol, None))
            ncol += 1
        else:
            varcols.append((ncol, ncol + 1))
            ncol += 2
    cons = problem.constraints
    slack_col = []
    for con in cons:
        if con.rel == EQ:
            slack_col.append(None)
        else:
            slack_col.append(ncol)
            ncol += 1
    nreal = ncol

    rows, rhs, flipped = [], [], []
    zero = _Q(0)
    for r, con in enumerate(cons):
        row = [zero] * nreal
        for k, a in enumerate(con.row):
            if a:
                pos, neg = varcols[k]
                row[pos] = _Q(a)
                if neg is not None:
                    row[neg] = -_Q(a)
        if slack_col[r] is not None:
            row[slack_col[r]] = _Q(1 if con.rel == LE else -1)
        b = _Q(con.rhs)
        flip = b < 0
        if flip:
            row = [-a for a in row]
            b = -b
        rows.append(row)
        rhs.append(b)
        flipped.append(flip)

    basis = []
    artificial = []
    for r, row in enumerate(rows):
        s = slack_col[r]
        if s is not None and row[s] == 1:
            basis.append(s)
        else:
            basis.append(ncol)
            artificial.append(r)
            ncol += 1
    # widen rows to cover the artificial columns (identity on their own row)
    for r, row in enumerate(rows):
        row.extend([zero] * (ncol - nreal))
        if basis[r] >= nreal:
            row[basis[r]] = _Q(1)

    tab = _Tableau(rows, rhs, ncol, basis)
    idcol = list(basis)

    if artificial:
        tab.set_cost([zero] * nreal + [_Q(1)] * (ncol - nreal))
        tab.run(ncol)
        if tab.rc[-1] != 0:
            return LPOutcome(Status.INFEASIBLE)
        for i in range(tab.m):
            if tab.basis[i] >= nreal:
                j = next((j for j in range(nreal) if tab.t[i][j] != 0), None)
                if j is not None:
                    tab.pivot(i, j)
                # otherwise the row is redundant; its artificial stays basic at zero

    cost = [zero] * ncol
    for k, c in enumerate(problem.objective):
        pos, neg = varcols[k]
        cost[pos] = _Q(c)
        if neg is not None:
            cost[neg] = -_Q(c)
    tab.set_cost(cost)
    if not tab.run(nreal):
        return LPOutcome(Status.UNBOUNDED)

    z = [zero] * ncol
    for i, bvar in enumerate(tab.basis):
        z[bvar] = tab.t[i][-1]
    x = []
    for pos, neg in varcols:
        v = z[pos] - (z[neg] if neg is not None else 0)
        x.append(_frac(v))
    duals = []
    for r in range(len(cons)):
        y = -tab.rc[idcol[r]]
        duals.append(_frac(-y if flipped[r] else y))
    value = sum((c * xi for c, xi in zip(problem.objective, x)), Fraction(0))
    return LPOutcome(Status.OPTIMAL, tuple(x), value, tuple(duals))


def _dual_problem(problem: LPProblem) -> LPProblem:
    cons = problem.constraints
    objective = []
    for con in cons:
        objective.append(con.rhs if con.rel == LE else -con.rhs)
    drows = []
    for k in range(problem.nvars):
        row = [(-con.row[k] if con.rel == LE else con.row[k]) for con in cons]
        rel = LE if k in problem.nonneg else EQ
        drows.append(Constraint(tuple(row), rel, problem.objective[k]))
    nonneg = frozenset(r for r, con in enumerate(cons) if con.rel != EQ)
    return LPProblem(tuple(objective), tuple(drows), nonneg)


def _solve_via_dual(problem: LPProblem) -> LPOutcome:
    d = _solve_primal(_dual_problem(problem))
    if d.status is Status.UNBOUNDED:
        return LPOutcome(Status.INFEASIBLE)
    if d.status is Status.INFEASIBLE:
        return _solve_primal(problem)
    x = tuple(-z for z in d.duals)
    y = tuple((-v if con.rel == LE else v) for v, con in zip(d.x, problem.constraints))
    value = sum((c * xi for c, xi in zip(problem.objective, x)), Fraction(0))
    return LPOutcome(Status.OPTIMAL, x, value, y)


def solve(problem: LPProblem, method: str = "auto") -> LPOutcome:
    """Solve exactly. ``method`` is ``"primal"``, ``"dual"`` or ``"auto"``."""
    if method == "auto":
        method = "dual" if len(problem.constraints) > problem.nvars + 2 else "primal"
    if method == "primal":
        return _solve_primal(problem)
    if method == "dual":
        return _solve_via_dual(problem)
    raise ValueError(f"unknown method {method!r}")


def feasible_point(constraints: Iterable, nvars: int, nonneg: Sequence[int] = ()) -> tuple | None:
    """Any point satisfying ``constraints`` (zero objective), or None."""
    out = solve(LPProblem((0,) * nvars, tuple(constraints), frozenset(nonneg)), method="primal")
    return out.x if out.optimal else None
