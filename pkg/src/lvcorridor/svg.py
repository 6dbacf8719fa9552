"""Minimal standalone SVG emission: time-series panels with shaded corridor
intervals, and the parameter-plane class raster with overlay curves.

Deliberately dependency-free and batch-only; curves are polylines, rasters
are run-length merged rects, axes carry plain tick labels. Output is
deterministic for identical inputs.
"""

from __future__ import annotations

import math

import numpy as np

from .regime_map import RegimeClass, RegimeGrid

__all__ = ["render_timeseries", "render_map"]

_CLASS_COLORS = {
    int(RegimeClass.STATE_LEANING): "#4c72b0",
    int(RegimeClass.SOCIETY_LEANING): "#dd8452",
    int(RegimeClass.CORRIDOR_CORE): "#55a868",
    int(RegimeClass.BALANCED_LOW_CAPACITY): "#c44e52",
}

_CLASS_LABELS = {
    int(RegimeClass.STATE_LEANING): "state-leaning",
    int(RegimeClass.SOCIETY_LEANING): "society-leaning",
    int(RegimeClass.CORRIDOR_CORE): "corridor core",
    int(RegimeClass.BALANCED_LOW_CAPACITY): "balanced low-capacity",
}


def _nice_ticks(lo: float, hi: float, target: int = 6):
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if span / step <= target:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * span:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _fmt_tick(v: float) -> str:
    if v == int(v):
        return str(int(v))
    return f"{v:g}"


class _Canvas:
    def __init__(self, width, height):
        self.width = width
        self.height = height
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">',
            f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        ]

    def rect(self, x, y, w, h, fill, opacity=None):
        op = f' fill-opacity="{opacity}"' if opacity is not None else ""
        self.parts.append(
            f'<rect x="{x:.2f}" y="{y:.2f}" width="{w:.2f}" height="{h:.2f}" '
            f'fill="{fill}"{op}/>'
        )

    def line(self, x1, y1, x2, y2, stroke="#000000", width=1.0, dash=None):
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="{stroke}" stroke-width="{width}"{d}/>'
        )

    def polyline(self, pts, stroke, width=1.5, dash=None):
        if len(pts) < 2:
            return
        d = f' stroke-dasharray="{dash}"' if dash else ""
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{width}"{d}/>'
        )

    def text(self, x, y, s, size=12, anchor="start", fill="#000000"):
        self.parts.append(
            f'<text x="{x:.2f}" y="{y:.2f}" font-size="{size}" '
            f'font-family="sans-serif" text-anchor="{anchor}" fill="{fill}">{s}</text>'
        )

    def write(self, path):
        self.parts.append("</svg>")
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(self.parts) + "\n")


def _decimate(arr: np.ndarray, max_points: int = 1600) -> np.ndarray:
    if len(arr) <= max_points:
        return arr
    idx = np.linspace(0, len(arr) - 1, max_points).round().astype(int)
    return arr[idx]


def render_timeseries(path, taus, l_vals, s_vals, intervals=None, title=""):
    """Standalone SVG of L(tau) and S(tau) with the corridor intervals
    shaded behind the curves."""
    width, height = 860, 460
    ml, mr, mt, mb = 62, 18, 30, 44
    pw, ph = width - ml - mr, height - mt - mb
    t0, t1 = float(taus[0]), float(taus[-1])
    y0, y1 = 0.0, 1.0

    def px(t):
        return ml + (t - t0) / (t1 - t0) * pw

    def py(v):
        return mt + (y1 - v) / (y1 - y0) * ph

    c = _Canvas(width, height)
    if intervals is not None:
        for entry, exit_ in np.asarray(intervals).reshape(-1, 2):
            c.rect(px(entry), mt, max(px(exit_) - px(entry), 0.5), ph,
                   "#bbbbbb", opacity=0.45)
    for t in _nice_ticks(t0, t1):
        c.line(px(t), mt + ph, px(t), mt + ph + 5, "#000000", 1.0)
        c.text(px(t), mt + ph + 18, _fmt_tick(t), anchor="middle")
    for v in (0.0, 0.25, 0.5, 0.75, 1.0):
        c.line(ml - 5, py(v), ml, py(v), "#000000", 1.0)
        c.text(ml - 9, py(v) + 4, _fmt_tick(v), anchor="end")
        c.line(ml, py(v), ml + pw, py(v), "#eeeeee", 1.0)
    c.line(ml, mt, ml, mt + ph, "#000000", 1.2)
    c.line(ml, mt + ph, ml + pw, mt + ph, "#000000", 1.2)

    data = np.column_stack((np.asarray(taus, dtype=float),
                            np.asarray(l_vals, dtype=float),
                            np.asarray(s_vals, dtype=float)))
    data = _decimate(data)
    c.polyline([(px(t), py(v)) for t, v in zip(data[:, 0], data[:, 1])],
               "#1f77b4", 1.8)
    c.polyline([(px(t), py(v)) for t, v in zip(data[:, 0], data[:, 2])],
               "#ff7f0e", 1.8)

    if title:
        c.text(ml, 18, title, size=13)
    c.text(ml + pw - 120, mt + 16, "L", fill="#1f77b4", size=13)
    c.text(ml + pw - 100, mt + 16, "S", fill="#ff7f0e", size=13)
    c.text(ml + pw - 80, mt + 16, "corridor", fill="#888888", size=12)
    c.text(ml + pw / 2, height - 8, "tau", anchor="middle")
    c.write(path)


def _rle_rows(classes: np.ndarray):
    """Horizontal runs of equal class per grid row: (i0, i1, j, code)."""
    n = classes.shape[0]
    for j in range(n):
        col = classes[:, j]
        i0 = 0
        for i in range(1, n + 1):
            if i == n or col[i] != col[i0]:
                yield i0, i, j, int(col[i0])
                i0 = i


def render_map(path, grid: RegimeGrid, title=""):
    """Standalone SVG raster of the class grid with overlay curves."""
    side = 640
    ml, mr, mt, mb = 62, 16, 30, 96
    width, height = side + ml + mr, side + mt + mb
    n = grid.resolution

    def px(a12):
        return ml + a12 * side

    def py(a21):
        return mt + (1.0 - a21) * side

    c = _Canvas(width, height)
    cell = side / n
    for i0, i1, j, code in _rle_rows(grid.classes):
        x = ml + i0 * cell
        y = mt + (n - 1 - j) * cell
        c.rect(x, y, (i1 - i0) * cell + 0.25, cell + 0.25, _CLASS_COLORS[code])

    styles = {
        "symmetry": ("#000000", 1.2, "6,4"),
        "gap_upper": ("#000000", 1.4, None),
        "gap_lower": ("#000000", 1.4, None),
        "capacity_L": ("#ffffff", 1.4, "4,3"),
        "capacity_S": ("#ffffff", 1.4, "4,3"),
    }
    for name, pts in grid.overlays.items():
        stroke, w, dash = styles.get(name, ("#000000", 1.0, None))
        c.polyline([(px(a), py(b)) for a, b in pts], stroke, w, dash)

    for t in (0.0, 0.2, 0.4, 0.6, 0.8, 1.0):
        c.line(px(t), mt + side, px(t), mt + side + 5, "#000000", 1.0)
        c.text(px(t), mt + side + 18, _fmt_tick(t), anchor="middle")
        c.line(ml - 5, py(t), ml, py(t), "#000000", 1.0)
        c.text(ml - 9, py(t) + 4, _fmt_tick(t), anchor="end")
    c.line(ml, mt, ml, mt + side, "#000000", 1.2)
    c.line(ml, mt + side, ml + side, mt + side, "#000000", 1.2)
    c.text(ml + side / 2, mt + side + 38, "a12", anchor="middle")
    c.text(16, mt + side / 2, "a21", anchor="middle")
    if title:
        c.text(ml, 18, title, size=13)

    lx = ml
    ly = mt + side + 56
    for k, code in enumerate(sorted(_CLASS_LABELS)):
        x = lx + (k % 2) * 300
        y = ly + (k // 2) * 20
        c.rect(x, y - 10, 12, 12, _CLASS_COLORS[code])
        c.text(x + 18, y, _CLASS_LABELS[code], size=12)
    c.write(path)
