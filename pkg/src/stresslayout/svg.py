"""Deterministic SVG output: node-link drawings and box plots.

Documents are assembled as plain strings with fixed float formatting so a
given input always produces byte-identical output.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DrawStyle:
    node_radius: float = 3.0
    node_fill: str = "#1f77b4"
    edge_stroke: str = "#888888"
    edge_width: float = 1.0
    canvas: float = 800.0


def _fmt(x):
    return f"{x:.4f}"


def render_layout_svg(X, graph, style=DrawStyle()):
    """Edges as lines under nodes as circles; viewBox fits the layout with a
    5% margin."""
    X = np.asarray(X, np.float64)
    lo = X.min(axis=0)
    hi = X.max(axis=0)
    span = hi - lo
    margin = 0.05 * float(max(span.max(), 1e-9))
    x0 = lo[0] - margin
    y0 = lo[1] - margin
    w = span[0] + 2 * margin
    h = span[1] + 2 * margin
    scale = style.canvas / max(w, h)
    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="0 0 {_fmt(w * scale)} {_fmt(h * scale)}">'
    )

    def sx(v):
        return (v - x0) * scale

    def sy(v):
        return (v - y0) * scale

    for i, j in graph.edges:
        out.append(
            f'<line x1="{_fmt(sx(X[i, 0]))}" y1="{_fmt(sy(X[i, 1]))}" '
            f'x2="{_fmt(sx(X[j, 0]))}" y2="{_fmt(sy(X[j, 1]))}" '
            f'stroke="{style.edge_stroke}" stroke-width="{_fmt(style.edge_width)}"/>'
        )
    for i in range(X.shape[0]):
        out.append(
            f'<circle cx="{_fmt(sx(X[i, 0]))}" cy="{_fmt(sy(X[i, 1]))}" '
            f'r="{_fmt(style.node_radius)}" fill="{style.node_fill}"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_boxplot_svg(stats_per_condition, metric_name):
    """One box-and-whisker glyph per condition on a shared vertical axis.

    stats_per_condition is an ordered list of (label, stats) where stats has
    minimum/q1/median/q3/maximum attributes.
    """
    if not stats_per_condition:
        raise ValueError("no conditions to plot")
    width_per = 60.0
    pad_left = 70.0
    pad_bottom = 40.0
    pad_top = 30.0
    plot_h = 300.0
    n = len(stats_per_condition)
    width = pad_left + width_per * n + 20.0
    height = pad_top + plot_h + pad_bottom
    lo = min(s.minimum for _, s in stats_per_condition)
    hi = max(s.maximum for _, s in stats_per_condition)
    if hi <= lo:
        hi = lo + 1.0

    def y(v):
        return pad_top + plot_h * (1.0 - (v - lo) / (hi - lo))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<text x="{_fmt(width / 2)}" y="16" text-anchor="middle" '
        f'font-size="14">{metric_name}</text>',
        f'<line x1="{_fmt(pad_left - 10)}" y1="{_fmt(y(lo))}" '
        f'x2="{_fmt(pad_left - 10)}" y2="{_fmt(y(hi))}" stroke="#000"/>',
        f'<text x="{_fmt(pad_left - 14)}" y="{_fmt(y(lo) + 4)}" text-anchor="end" '
        f'font-size="10">{lo!r}</text>',
        f'<text x="{_fmt(pad_left - 14)}" y="{_fmt(y(hi) + 4)}" text-anchor="end" '
        f'font-size="10">{hi!r}</text>',
    ]
    for idx, (label, s) in enumerate(stats_per_condition):
        cx = pad_left + width_per * (idx + 0.5)
        half = width_per * 0.3
        out.append(
            f'<g class="box">'
            f'<line x1="{_fmt(cx)}" y1="{_fmt(y(s.minimum))}" x2="{_fmt(cx)}" '
            f'y2="{_fmt(y(s.q1))}" stroke="#000"/>'
            f'<line x1="{_fmt(cx)}" y1="{_fmt(y(s.q3))}" x2="{_fmt(cx)}" '
            f'y2="{_fmt(y(s.maximum))}" stroke="#000"/>'
            f'<rect x="{_fmt(cx - half)}" y="{_fmt(y(s.q3))}" '
            f'width="{_fmt(2 * half)}" height="{_fmt(max(y(s.q1) - y(s.q3), 0.0))}" '
            f'fill="#9ecae1" stroke="#000"/>'
            f'<line x1="{_fmt(cx - half)}" y1="{_fmt(y(s.median))}" '
            f'x2="{_fmt(cx + half)}" y2="{_fmt(y(s.median))}" stroke="#000" '
            f'stroke-width="2"/>'
            f"</g>"
        )
        out.append(
            f'<text x="{_fmt(cx)}" y="{_fmt(pad_top + plot_h + 18)}" '
            f'text-anchor="middle" font-size="11">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
