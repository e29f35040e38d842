"""Seeded property suites: each returns a report with one entry per generated instance."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .billiard import (
    BilliardSolution,
    is_two_periodic,
    shortest_trajectory,
    smallest_fitting_ratio,
    verify_reflection,
)
from .geometry import Body, NORM_BODY, minkowski_sum, polar_dual
from .instances import (
    random_polygon,
    random_scale,
    random_simplex,
    random_symmetric_polygon,
)
from .oracle import OracleConfig, oracle_xi
from .simplex_form import (
    SimplexSpec,
    all_orders_edge_lengths,
    cevian_identity,
    check_trajectory,
    length_bound,
    midpoint_hyperplanes_concurrent,
)


@dataclass
class SuiteReport:
    suite: str
    seed: int
    count: int
    instances: list = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(1 for r in self.instances if not r["ok"])

    def add(self, ok: bool, **data):
        data = {k: (str(v) if isinstance(v, Fraction) else v) for k, v in data.items()}
        self.instances.append({"index": len(self.instances), "ok": bool(ok), **data})

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "count": self.count,
            "violations": self.violations,
            "instances": self.instances,
        }


def solve_checked(k: Body, t: Body) -> tuple[BilliardSolution, list[str]]:
    """Solve and audit certificate soundness: fitting ratio exactly 1 and a valid reflection certificate."""
    sol = shortest_trajectory(k, t)
    issues = []
    pts = sol.trajectory.points
    if smallest_fitting_ratio(pts, k).alpha != 1:
        issues.append("fitting ratio differs from 1")
    if not verify_reflection(sol, k, t).ok:
        issues.append("reflection certificate not found")
    return sol, issues


def _norm(rng):
    return random_polygon(rng, role=NORM_BODY)


def suite_monotonicity(rng, report):
    big = random_polygon(rng)
    t = _norm(rng)
    # shrink vertices toward the origin: result stays inside big
    pts = []
    for v in big.vertices:
        f = Fraction(rng.randint(1, 3), 3)
        pts.append(tuple(f * x for x in v))
    small = Body.from_vrep(pts)
    a, ia = solve_checked(small, t)
    b, ib = solve_checked(big, t)
    ok = big.contains_body(small) and a.xi <= b.xi and not ia + ib
    report.add(ok, xi_small=a.xi, xi_big=b.xi, issues=ia + ib)


def suite_symmetry(rng, report):
    k, t = random_polygon(rng), _norm(rng)
    a, ia = solve_checked(k, t)
    b, ib = solve_checked(t.with_role("table"), k.with_role(NORM_BODY))
    report.add(a.xi == b.xi and not ia + ib, xi_t_k=a.xi, xi_k_t=b.xi, issues=ia + ib)


def suite_brunn_minkowski(rng, report):
    k, l, t = random_polygon(rng), random_polygon(rng), _norm(rng)
    s = minkowski_sum(k, l)
    a, ia = solve_checked(k, t)
    b, ib = solve_checked(l, t)
    c, ic = solve_checked(s, t)
    issues = ia + ib + ic
    report.add(c.xi >= a.xi + b.xi and not issues, xi_k=a.xi, xi_l=b.xi, xi_sum=c.xi, issues=issues)


def suite_homogeneity(rng, report):
    k, t = random_polygon(rng), _norm(rng)
    s = random_scale(rng)
    base, i0 = solve_checked(k, t)
    sk, i1 = solve_checked(k.scale(s), t)
    st, i2 = solve_checked(k, t.scale(s))
    issues = i0 + i1 + i2
    ok = sk.xi == s * base.xi and st.xi == s * base.xi and not issues
    report.add(ok, scale=s, xi=base.xi, xi_scaled_table=sk.xi, xi_scaled_norm=st.xi, issues=issues)


def suite_symmetric_polar_4(rng, report):
    k = random_symmetric_polygon(rng)
    sol, issues = solve_checked(k, polar_dual(k))
    report.add(sol.xi == 4 and is_two_periodic(sol) and not issues, xi=sol.xi, bounces=sol.bounce_count, issues=issues)


def suite_nonsymmetric_bound(rng, report):
    k = random_polygon(rng)
    sol, issues = solve_checked(k, polar_dual(k))
    report.add(sol.xi >= length_bound(2) and not issues, xi=sol.xi, bound=length_bound(2), issues=issues)


def suite_two_periodic_stability(rng, report):
    for _ in range(200):
        t = random_symmetric_polygon(rng, role=NORM_BODY)
        k = random_polygon(rng)
        base, issues = solve_checked(k, t)
        if is_two_periodic(base):
            break
    else:  # pragma: no cover
        report.add(False, issues=["no 2-periodic instance found"])
        return
    lam = Fraction(rng.randint(1, 6), rng.randint(1, 3))
    grown = minkowski_sum(k, polar_dual(t).scale(lam).with_role("table"))
    sol, more = solve_checked(grown, t)
    issues += more
    ok = is_two_periodic(sol) and sol.xi == base.xi + 4 * lam and not issues
    report.add(ok, lam=lam, xi=base.xi, xi_grown=sol.xi, bounces=sol.bounce_count, issues=issues)


def suite_simplex_closed_form(rng, report):
    dim = rng.choice((2, 3))
    body = random_simplex(rng, dim)
    spec = SimplexSpec.from_vertices(body.vertices)
    issues = []
    table = all_orders_edge_lengths(spec)
    for tr in table.rows:
        issues += check_trajectory(spec, tr)
        if cevian_identity(spec, tr) != 2:
            issues.append("cevian sum differs from 2")
        midpoint_hyperplanes_concurrent(spec, tr)
    if not table.same_steps:
        issues.append("step multisets differ between orders")
    if 1 / spec.M < length_bound(dim):
        issues.append("1/M below 2 + 2/n")
    sol = shortest_trajectory(body, polar_dual(body))
    if not (length_bound(dim) <= sol.xi <= 1 / spec.M):
        issues.append("solver value outside [2 + 2/n, 1/M]")
    report.add(not issues, dim=dim, inv_M=1 / spec.M, xi=sol.xi, orders=len(table.rows), issues=issues)


def suite_oracle_agreement(rng, report, resolutions=(8, 16, 32, 64)):
    k, t = random_polygon(rng), _norm(rng)
    sol, issues = solve_checked(k, t)
    values = [oracle_xi(k, t, OracleConfig(resolution=r)).value for r in resolutions]
    dominated = all(v >= sol.xi for v in values)
    monotone = all(a >= b for a, b in zip(values, values[1:]))
    gap = (values[-1] - sol.xi) / sol.xi
    ok = dominated and monotone and gap <= Fraction(5, 100) and not issues
    report.add(ok, xi=sol.xi, oracle=[str(v) for v in values], gap=gap, issues=issues)


SUITES: dict[str, Callable] = {
    "monotonicity": suite_monotonicity,
    "symmetry": suite_symmetry,
    "brunn-minkowski": suite_brunn_minkowski,
    "homogeneity": suite_homogeneity,
    "symmetric-polar-4": suite_symmetric_polar_4,
    "nonsymmetric-bound": suite_nonsymmetric_bound,
    "two-periodic-stability": suite_two_periodic_stability,
    "simplex-closed-form": suite_simplex_closed_form,
    "oracle-agreement": suite_oracle_agreement,
}


def run_suite(name: str, seed: int = 0, count: int = 25) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    rng = random.Random(f"{name}:{seed}")
    report = SuiteReport(name, seed, count)
    for _ in range(count):
        SUITES[name](rng, report)
    return report
