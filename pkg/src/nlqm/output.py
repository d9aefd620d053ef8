"""Deterministic CSV / JSON / SVG emitters for the command-line tools.

All numeric output uses round-trip decimal precision (repr), '.' decimals
and ',' separators; identical inputs produce byte-identical files.  SVG
plots are minimal polyline renderings (axes, ticks, legend), not a
charting framework.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def fmt(value) -> str:
    """Shortest round-trip decimal representation of a float."""
    return repr(float(value))


def write_csv(path, columns: dict) -> None:
    """Write named columns (equal-length sequences) as CSV."""
    path = Path(path)
    names = list(columns)
    arrays = [np.asarray(columns[name]) for name in names]
    n = len(arrays[0])
    if any(len(a) != n for a in arrays):
        raise ValueError("all CSV columns must have equal length")
    lines = [",".join(names)]
    for i in range(n):
        lines.append(",".join(fmt(a[i]) for a in arrays))
    path.write_text("\n".join(lines) + "\n", encoding="ascii")


def write_json(path, obj) -> None:
    """Write JSON with sorted keys (deterministic byte output)."""
    Path(path).write_text(
        json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n", encoding="ascii"
    )


def _ticks(lo: float, hi: float, n: int = 5):
    if hi == lo:
        hi = lo + 1.0
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def write_svg_lines(
    path,
    x,
    series: dict,
    title: str = "",
    x_label: str = "",
    y_label: str = "",
    width: int = 640,
    height: int = 440,
) -> None:
    """Render one or more y(x) series as SVG polylines with axes and legend."""
    x = np.asarray(x, dtype=float)
    ys = {name: np.asarray(y, dtype=float) for name, y in series.items()}
    ml, mr, mt, mb = 64, 16, 28, 44
    iw, ih = width - ml - mr, height - mt - mb
    x_lo, x_hi = float(np.min(x)), float(np.max(x))
    y_lo = min(float(np.min(y)) for y in ys.values())
    y_hi = max(float(np.max(y)) for y in ys.values())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    pad = 0.04 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def px(v):
        return ml + iw * (v - x_lo) / (x_hi - x_lo)

    def py(v):
        return mt + ih * (1.0 - (v - y_lo) / (y_hi - y_lo))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" '
        f'font-family="monospace" font-size="13">{title}</text>',
    ]
    # axes box and ticks
    parts.append(
        f'<rect x="{ml}" y="{mt}" width="{iw}" height="{ih}" fill="none" '
        'stroke="black" stroke-width="1"/>'
    )
    for tx in _ticks(x_lo, x_hi):
        parts.append(
            f'<line x1="{px(tx):.2f}" y1="{mt + ih}" x2="{px(tx):.2f}" '
            f'y2="{mt + ih + 4}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{px(tx):.2f}" y="{mt + ih + 16}" text-anchor="middle" '
            f'font-family="monospace" font-size="10">{tx:.4g}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        parts.append(
            f'<line x1="{ml - 4}" y1="{py(ty):.2f}" x2="{ml}" y2="{py(ty):.2f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{ml - 6}" y="{py(ty) + 3:.2f}" text-anchor="end" '
            f'font-family="monospace" font-size="10">{ty:.4g}</text>'
        )
    if x_label:
        parts.append(
            f'<text x="{ml + iw / 2:.1f}" y="{height - 8}" text-anchor="middle" '
            f'font-family="monospace" font-size="11">{x_label}</text>'
        )
    if y_label:
        parts.append(
            f'<text x="14" y="{mt + ih / 2:.1f}" text-anchor="middle" '
            f'font-family="monospace" font-size="11" '
            f'transform="rotate(-90 14 {mt + ih / 2:.1f})">{y_label}</text>'
        )
    for k, (name, y) in enumerate(ys.items()):
        color = _COLORS[k % len(_COLORS)]
        pts = " ".join(f"{px(xi):.2f},{py(yi):.2f}" for xi, yi in zip(x, y))
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.3"/>'
        )
        parts.append(
            f'<text x="{ml + iw - 8}" y="{mt + 14 + 13 * k}" text-anchor="end" '
            f'font-family="monospace" font-size="11" fill="{color}">{name}</text>'
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="ascii")


def write_svg_orbit(path, u1, u2, title: str = "", width: int = 480, height: int = 480) -> None:
    """Render a planar orbit (projected onto its fitted plane) as SVG."""
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    margin = 48
    span = max(float(np.max(np.abs(u1))), float(np.max(np.abs(u2))), 1e-30) * 1.1
    iw = width - 2 * margin
    ih = height - 2 * margin

    def px(v):
        return margin + iw * (v + span) / (2 * span)

    def py(v):
        return margin + ih * (1.0 - (v + span) / (2 * span))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" '
        f'font-family="monospace" font-size="13">{title}</text>',
        f'<line x1="{margin}" y1="{py(0):.2f}" x2="{width - margin}" y2="{py(0):.2f}" '
        'stroke="#bbbbbb" stroke-width="1"/>',
        f'<line x1="{px(0):.2f}" y1="{margin}" x2="{px(0):.2f}" y2="{height - margin}" '
        'stroke="#bbbbbb" stroke-width="1"/>',
    ]
    pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(u1, u2))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="{_COLORS[0]}" stroke-width="1.5"/>')
    parts.append(f'<circle cx="{px(0):.2f}" cy="{py(0):.2f}" r="3" fill="{_COLORS[1]}"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="ascii")
