"""Command-line front end.

Every subcommand builds a report ``{command, version, inputs, result}`` and
writes it as plain text or JSON. Reports contain no timestamps or timings
unless ``--timing`` is given, so identical inputs give identical bytes.

Exit codes: 0 ok, 1 property violation, 2 invalid input, 3 internal alarm.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .billiard import (
    ReflectionCertificate,
    shortest_trajectory,
    smallest_fitting_ratio,
    verify_reflection,
)
from .errors import BilliardError, InternalConsistencyError
from .geometry import NORM_BODY, TABLE, body_from_dict, body_to_dict, minkowski_sum, polar_dual
from .oracle import EXHAUSTIVE_2D, RANDOM_3D, OracleConfig, oracle_xi
from .scalars import fdec, to_fraction
from .simplex_form import (
    SimplexSpec,
    all_orders_edge_lengths,
    cevian_identity,
    check_trajectory,
    closed_form_trajectory,
    length_bound,
    midpoint_hyperplanes_concurrent,
)
from .suites import SUITES, run_suite

OK, VIOLATION, BAD_INPUT, ALARM = 0, 1, 2, 3
POLAR_PREFIX = "polar:"


class UsageError(Exception):
    pass


def _exact(x: Fraction) -> str:
    return str(x)


def _point(p) -> list[str]:
    return [str(x) for x in p]


def _point_dec(p, digits) -> list[str]:
    return [fdec(x, digits) for x in p]


class _Inputs:
    """Reads input files once and records their content hashes."""

    def __init__(self):
        self.seen: list[dict] = []

    def text(self, path: str) -> str:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
        self.seen.append({"path": path, "sha256": hashlib.sha256(data).hexdigest()})
        return data.decode("utf-8")

    def json(self, path: str):
        try:
            return json.loads(self.text(path))
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: not valid JSON ({exc})") from exc

    def body(self, path: str, role: str = TABLE):
        return body_from_dict(self.json(path), role)


def _norm_body(inputs: _Inputs, arg: str, k):
    if arg == "polar:K":
        return polar_dual(k).with_role(NORM_BODY)
    if arg.startswith(POLAR_PREFIX):
        return polar_dual(inputs.body(arg[len(POLAR_PREFIX):])).with_role(NORM_BODY)
    return inputs.body(arg, NORM_BODY)


def _certificate_dict(cert: ReflectionCertificate, digits: int) -> dict:
    return {
        "momenta": [_point(p) for p in cert.momenta],
        "momenta_decimal": [_point_dec(p, digits) for p in cert.momenta],
        "multipliers": [str(x) for x in cert.lam],
        "normals": [_point(v) for v in cert.normals],
    }


def cmd_xi(args, inputs: _Inputs):
    k = inputs.body(args.table)
    t = _norm_body(inputs, args.norm, k)
    sol = shortest_trajectory(k, t, args.max_m, workers=args.workers)
    cert = verify_reflection(sol, k, t)
    if not isinstance(cert, ReflectionCertificate):
        raise InternalConsistencyError(f"no reflection certificate at bounce {cert.index}: {cert.reason}")
    result = sol.to_dict(args.digits)
    result["trajectory_decimal"] = [_point_dec(q, args.digits) for q in sol.trajectory]
    result["lambda_decimal"] = {key: fdec(Fraction(v), args.digits) for key, v in result["lambda"].items()}
    result["fitting_ratio"] = _exact(smallest_fitting_ratio(sol.trajectory.points, k).alpha)
    result["certificate"] = _certificate_dict(cert, args.digits)
    result["table"] = body_to_dict(k)
    result["norm_body"] = body_to_dict(t)
    return result, OK


def cmd_fit(args, inputs: _Inputs):
    k = inputs.body(args.table)
    raw = inputs.json(args.points)
    if not isinstance(raw, list) or not raw:
        raise UsageError("points file must hold a non-empty list of points")
    try:
        pts = [tuple(to_fraction(x) for x in p) for p in raw]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad point coordinate: {exc}") from exc
    fit = smallest_fitting_ratio(pts, k)
    return {
        "alpha": _exact(fit.alpha),
        "alpha_decimal": fdec(fit.alpha, args.digits),
        "translate": _point(fit.translate),
        "translate_decimal": _point_dec(fit.translate, args.digits),
        "dual": {f"{i},{j}": str(v) for (i, j), v in sorted(fit.dual.items())},
        "in_class": fit.alpha >= 1,
    }, OK


def cmd_polar(args, inputs: _Inputs):
    return {"body": body_to_dict(polar_dual(inputs.body(args.body)))}, OK


def cmd_minksum(args, inputs: _Inputs):
    return {"body": body_to_dict(minkowski_sum(inputs.body(args.first), inputs.body(args.second)))}, OK


def _parse_order(text: str | None):
    if text is None:
        return None
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--order must be comma-separated vertex indices, got {text!r}") from exc


def cmd_simplex_traj(args, inputs: _Inputs):
    body = inputs.body(args.simplex)
    spec = SimplexSpec.from_vertices(body.vertices)
    order = _parse_order(args.order)
    if order is not None:
        trajectories = [closed_form_trajectory(spec, order)]
        same, distinct = None, None
    else:
        table = all_orders_edge_lengths(spec)
        trajectories, same, distinct = list(table.rows), table.same_steps, table.distinct
    items, issues = [], []
    for tr in trajectories:
        issues += check_trajectory(spec, tr)
        cev = cevian_identity(spec, tr)
        items.append({
            "order": list(tr.order),
            "trajectory": [_point(q) for q in tr.points],
            "steps": [str(s) for s in tr.steps],
            "cevian_sum": str(cev),
            "midpoint_concurrency": _point(midpoint_hyperplanes_concurrent(spec, tr)),
        })
    if issues:
        raise InternalConsistencyError("; ".join(issues))
    return {
        "vertices": [_point(v) for v in spec.vertices],
        "barycentric_origin": [str(x) for x in spec.m],
        "M": str(spec.M),
        "length": str(1 / spec.M),
        "length_decimal": fdec(1 / spec.M, args.digits),
        "lower_bound": str(length_bound(spec.n)),
        "same_steps": same,
        "distinct": distinct,
        "trajectories": items,
    }, OK


def cmd_oracle(args, inputs: _Inputs):
    k = inputs.body(args.table)
    t = _norm_body(inputs, args.norm, k)
    mode = args.mode or (EXHAUSTIVE_2D if k.dim == 2 else RANDOM_3D)
    max_m = args.max_m if args.max_m is not None else min(k.dim + 1, 3 if mode == EXHAUSTIVE_2D else 4)
    try:
        cfg = OracleConfig(resolution=args.resolution, max_m=max_m, mode=mode, budget=args.budget, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    res = oracle_xi(k, t, cfg)
    return {
        "mode": mode,
        "resolution": args.resolution,
        "value": None if res.value is None else str(res.value),
        "value_decimal": None if res.value is None else fdec(res.value, args.digits),
        "points": [_point(p) for p in res.points],
        "partial": res.partial,
        "evaluated": res.evaluated,
    }, OK


def cmd_verify(args, inputs: _Inputs):
    report = run_suite(args.suite, args.seed, args.count)
    return report.to_dict(), (OK if report.violations == 0 else VIOLATION)


def cmd_render(args, inputs: _Inputs):
    from .render import render_svg

    obj = inputs.json(args.solution)
    sol = obj.get("result", obj) if isinstance(obj, dict) else None
    if not isinstance(sol, dict) or "trajectory" not in sol:
        raise UsageError("solution file needs a 'trajectory' field")
    try:
        traj = [tuple(to_fraction(x) for x in q) for q in sol["trajectory"]]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad trajectory coordinate: {exc}") from exc
    if any(len(q) != 2 for q in traj):
        raise UsageError("rendering needs a planar (2-D) solution")
    table = body_from_dict(sol["table"]) if "table" in sol else None
    norm = body_from_dict(sol["norm_body"], NORM_BODY) if "norm_body" in sol else None
    if table is not None and table.dim != 2:
        raise UsageError("rendering needs a planar (2-D) solution")
    svg = render_svg(traj, table, norm, sol.get("pattern"))
    return {"svg": svg, "points": len(traj)}, OK


COMMANDS = {
    "xi": cmd_xi,
    "fit": cmd_fit,
    "polar": cmd_polar,
    "minksum": cmd_minksum,
    "simplex-traj": cmd_simplex_traj,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
    "render": cmd_render,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--digits", type=int, default=12, help="significant digits of decimal values")
    common.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="polybill", description="Shortest polytope billiards in exact arithmetic.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("xi", parents=[common], help="shortest closed billiard trajectory")
    p.add_argument("table", help="body file for K")
    p.add_argument("norm", help='body file for T, or "polar:K", or "polar:<file>"')
    p.add_argument("--max-m", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("fit", parents=[common], help="smallest homothet ratio of a point set")
    p.add_argument("table")
    p.add_argument("points", help="JSON list of points")

    p = sub.add_parser("polar", parents=[common], help="polar dual of a body")
    p.add_argument("body")

    p = sub.add_parser("minksum", parents=[common], help="Minkowski sum of two bodies")
    p.add_argument("first")
    p.add_argument("second")

    p = sub.add_parser("simplex-traj", parents=[common], help="closed-form trajectories in a simplex")
    p.add_argument("simplex")
    p.add_argument("--order", help="comma-separated cyclic vertex order; all orders when omitted")

    p = sub.add_parser("oracle", parents=[common], help="brute-force upper bound on xi")
    p.add_argument("table")
    p.add_argument("norm")
    p.add_argument("--resolution", type=int, default=32)
    p.add_argument("--max-m", type=int, default=None)
    p.add_argument("--mode", choices=(EXHAUSTIVE_2D, RANDOM_3D), default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify", parents=[common], help="run a seeded property suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=25)

    p = sub.add_parser("render", parents=[common], help="SVG drawing of a 2-D solution")
    p.add_argument("solution", help="report from 'xi --format structured' or a bare solution")
    return parser


def _text(value, indent: str = "") -> list[str]:
    lines = []
    for key, v in value.items():
        if isinstance(v, dict) and v:
            lines.append(f"{indent}{key}:")
            lines += _text(v, indent + "  ")
        elif isinstance(v, (dict, list)):
            lines.append(f"{indent}{key}: {json.dumps(v, separators=(', ', ': '))}")
        else:
            lines.append(f"{indent}{key}: {v}")
    return lines


def format_report(report: dict, fmt: str) -> str:
    if fmt == "structured":
        return json.dumps(report, indent=2) + "\n"
    return "\n".join(_text(report)) + "\n"


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    inputs = _Inputs()
    start = time.perf_counter()
    try:
        result, code = COMMANDS[args.command](args, inputs)
    except (UsageError, BilliardError, ValueError) as exc:
        is_alarm = isinstance(exc, InternalConsistencyError)
        print(f"polybill {args.command}: {'internal consistency alarm' if is_alarm else 'invalid input'}: {exc}", file=sys.stderr)
        return ALARM if is_alarm else BAD_INPUT

    if args.command == "render":
        # the drawing itself is the output
        _emit(result["svg"], args.out)
        return code
    report = {"command": args.command, "version": __version__, "inputs": inputs.seen, "result": result}
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    _emit(format_report(report, args.format), args.out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
