"""Deterministic SVG drawing of a planar billiard solution."""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from typing import Sequence

from .geometry import Body, _angle_cmp, polar_dual
from .scalars import centroid

SIZE = 480
MARGIN = 40
NORMAL_PX = 24


def _fmt(x: float) -> str:
    return f"{x:.4f}".rstrip("0").rstrip(".")


class _Frame:
    def __init__(self, points: Sequence):
        xs = [float(p[0]) for p in points]
        ys = [float(p[1]) for p in points]
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, self.y1 - min(ys)) or 1.0
        self.s = (SIZE - 2 * MARGIN) / span

    def __call__(self, p) -> tuple[str, str]:
        return _fmt(MARGIN + (float(p[0]) - self.x0) * self.s), _fmt(MARGIN + (self.y1 - float(p[1])) * self.s)


def _poly(frame, pts, **attrs) -> str:
    coords = " ".join(",".join(frame(p)) for p in pts)
    extra = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in attrs.items())
    return f'<polygon points="{coords}" {extra}/>'


def render_svg(trajectory: Sequence, table: Body | None = None, norm_body: Body | None = None, pattern: Sequence | None = None) -> str:
    """SVG text showing K, the unit ball of the norm (centered at K's origin), the
    directed trajectory and the outward facet normals at each bounce."""
    traj = [tuple(Fraction(x) for x in q) for q in trajectory]
    if any(len(q) != 2 for q in traj):
        raise ValueError("rendering needs a planar trajectory")
    ball = polar_dual(norm_body) if norm_body is not None else None
    extent = list(traj)
    if table is not None:
        extent += list(table.vertices)
    if ball is not None:
        extent += list(ball.vertices)
    frame = _Frame(extent)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto">'
        '<path d="M0,0 L10,5 L0,10 z" fill="#c0392b"/></marker></defs>',
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    if table is not None:
        out.append(_poly(frame, _ccw(table), fill="#eef3fb", stroke="#2c3e50", stroke_width="2"))
    if ball is not None:
        out.append(_poly(frame, _ccw(ball), fill="none", stroke="#7f8c8d", stroke_dasharray="5,4"))
    m = len(traj)
    for i in range(m):
        (x1, y1), (x2, y2) = frame(traj[i]), frame(traj[(i + 1) % m])
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#c0392b" stroke-width="2" marker-end="url(#arrow)"/>')
    for i, q in enumerate(traj):
        cx, cy = frame(q)
        out.append(f'<circle cx="{cx}" cy="{cy}" r="4" fill="#c0392b"/>')
        out.append(f'<text x="{cx}" y="{cy}" dx="6" dy="-6" font-size="12" font-family="monospace">q{i}</text>')
        if table is not None and pattern is not None and i < len(pattern):
            for j in pattern[i]:
                a, _ = table.rows[j]
                length = (float(a[0]) ** 2 + float(a[1]) ** 2) ** 0.5 or 1.0
                reach = NORMAL_PX / frame.s / length
                tip = (float(q[0]) + reach * float(a[0]), float(q[1]) + reach * float(a[1]))
                tx, ty = frame(tip)
                out.append(f'<line x1="{cx}" y1="{cy}" x2="{tx}" y2="{ty}" stroke="#27ae60" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _ccw(body: Body) -> list:
    """Vertices in counterclockwise boundary order."""
    c = centroid(body.vertices)
    rel = {v: (v[0] - c[0], v[1] - c[1]) for v in body.vertices}
    return sorted(body.vertices, key=cmp_to_key(lambda u, w: _angle_cmp(rel[u], rel[w])))
