"""Dependency-free deterministic SVG rendering.

Byte-identical output for identical inputs: floats are formatted with a
fixed precision and colors come from a fixed 10-color qualitative
palette that cycles for larger label counts.
"""

from __future__ import annotations

import numpy as np

from .mps import MilpInstance, instance_stats

PALETTE = (
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
)

_W, _H = 720, 540
_MARGIN = 50
_LEGEND_W = 110


def _f(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def color_for(label: int) -> str:
    return PALETTE[int(label) % len(PALETTE)]


def scatter_svg(
    coords: np.ndarray,
    labels,
    title: str,
    xlabel: str = "dim 1",
    ylabel: str = "dim 2",
) -> str:
    """Colored scatter plot with one legend entry per cluster id."""
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[1] != 2 or coords.shape[0] == 0:
        raise ValueError("no points to plot")
    labels = np.asarray(labels)
    if len(labels) != len(coords):
        raise ValueError("labels length must match point count")

    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    pad = 0.05 * span
    lo, hi = lo - pad, hi + pad
    plot_w = _W - 2 * _MARGIN - _LEGEND_W
    plot_h = _H - 2 * _MARGIN

    def sx(v):
        return _MARGIN + (v - lo[0]) / (hi[0] - lo[0]) * plot_w

    def sy(v):
        return _H - _MARGIN - (v - lo[1]) / (hi[1] - lo[1]) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#333333" stroke-width="1"/>',
        f'<text x="{_MARGIN + plot_w / 2:.0f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
        f'<text x="{_MARGIN + plot_w / 2:.0f}" y="{_H - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{xlabel}</text>',
        f'<text x="16" y="{_MARGIN + plot_h / 2:.0f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {_MARGIN + plot_h / 2:.0f})">{ylabel}</text>',
    ]
    for (x, y), label in zip(coords, labels):
        parts.append(
            f'<circle cx="{_f(sx(x))}" cy="{_f(sy(y))}" r="2.5" '
            f'fill="{color_for(label)}" fill-opacity="0.75"/>'
        )

    legend_x = _W - _LEGEND_W - 10
    for row, label in enumerate(sorted(set(labels.tolist()))):
        y0 = _MARGIN + row * 18
        parts.append(
            f'<rect class="legend-swatch" x="{legend_x}" y="{y0}" width="12" '
            f'height="12" fill="{color_for(label)}"/>'
        )
        parts.append(
            f'<text x="{legend_x + 18}" y="{y0 + 10}" font-family="sans-serif" '
            f'font-size="11">cluster {label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def sparsity_svg(inst: MilpInstance) -> str:
    """One mark per nonzero at (variable column, constraint row);
    constraints run down the vertical axis."""
    stats = instance_stats(inst)
    n_rows = max(inst.n_cons, 1)
    n_cols = max(inst.n_vars, 1)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="-{0.06 * n_cols:.2f} -{0.18 * n_rows:.2f} '
        f'{1.12 * n_cols:.2f} {1.30 * n_rows:.2f}" preserveAspectRatio="none">',
        f'<text x="{n_cols / 2:.1f}" y="-{0.06 * n_rows:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="{0.08 * n_rows:.2f}">'
        f"{inst.name or 'instance'}: nnz={stats.nnz}, "
        f"density={100.0 * stats.density:.2f}%</text>",
        f'<rect x="0" y="0" width="{n_cols}" height="{n_rows}" fill="none" '
        f'stroke="#333333" stroke-width="{0.002 * max(n_rows, n_cols):.3f}"/>',
    ]
    for row, col, _ in inst.matrix.entries:
        parts.append(f'<rect x="{col}" y="{row}" width="1" height="1" fill="#1f77b4"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def curve_svg(
    xs,
    ys,
    title: str,
    xlabel: str,
    ylabel: str,
    marker_x: float | None = None,
) -> str:
    """Polyline chart, optionally with a vertical marker line."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if len(xs) == 0 or len(xs) != len(ys):
        raise ValueError("need equal-length, non-empty x/y")
    lo_x, hi_x = float(xs.min()), float(xs.max())
    lo_y, hi_y = float(ys.min()), float(ys.max())
    if hi_x == lo_x:
        hi_x = lo_x + 1.0
    if hi_y == lo_y:
        hi_y = lo_y + 1.0
    plot_w = _W - 2 * _MARGIN
    plot_h = _H - 2 * _MARGIN

    def sx(v):
        return _MARGIN + (v - lo_x) / (hi_x - lo_x) * plot_w

    def sy(v):
        return _H - _MARGIN - (v - lo_y) / (hi_y - lo_y) * plot_h

    points = " ".join(f"{_f(sx(x))},{_f(sy(y))}" for x, y in zip(xs, ys))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#333333" stroke-width="1"/>',
        f'<text x="{_W / 2:.0f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
        f'<text x="{_W / 2:.0f}" y="{_H - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{xlabel}</text>',
        f'<text x="16" y="{_H / 2:.0f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="12" transform="rotate(-90 16 {_H / 2:.0f})">{ylabel}</text>',
        f'<text x="{_MARGIN}" y="{_MARGIN - 6}" font-family="sans-serif" '
        f'font-size="10">min={_f(lo_y)} max={_f(hi_y)}</text>',
        f'<polyline points="{points}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>',
    ]
    if marker_x is not None:
        parts.append(
            f'<line x1="{_f(sx(marker_x))}" y1="{_MARGIN}" x2="{_f(sx(marker_x))}" '
            f'y2="{_H - _MARGIN}" stroke="#d62728" stroke-width="1" '
            f'stroke-dasharray="4 3"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
