"""Minimal static SVG line plots.

Figure reproduction here needs nothing beyond polylines, ticks, labels and
a legend, so the files are written directly: self-contained SVG 1.1, no
scripts, no external references.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

WIDTH = 720
HEIGHT = 480
MARGIN_LEFT = 86
MARGIN_RIGHT = 24
MARGIN_TOP = 40
MARGIN_BOTTOM = 64

PALETTE = ("#000000", "#c43b3b", "#2f6fb2", "#3f9c4e", "#8a5fb0", "#b07c2f")


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    step = 10.0 ** math.floor(math.log10(span / target))
    for factor in (1.0, 2.0, 5.0, 10.0):
        if span / (step * factor) <= target:
            step *= factor
            break
    first = math.ceil(lo / step) * step
    ticks = []
    value = first
    while value <= hi + 1e-9 * span:
        ticks.append(0.0 if abs(value) < 1e-12 * span else value)
        value += step
    return ticks


def _decade_ticks(lo: float, hi: float) -> list[float]:
    ticks = []
    exponent = math.floor(math.log10(lo))
    while 10.0 ** exponent <= hi * (1.0 + 1e-9):
        if 10.0 ** exponent >= lo * (1.0 - 1e-9):
            ticks.append(10.0 ** exponent)
        exponent += 1
    return ticks or [lo, hi]


def _format_tick(value: float) -> str:
    if value == 0.0:
        return "0"
    if abs(value) >= 1e5 or abs(value) < 1e-3:
        return f"{value:.0e}"
    text = f"{value:.6g}"
    return text


class LinePlot:
    """One x-y chart with any number of polyline series."""

    def __init__(self, title: str, xlabel: str, ylabel: str,
                 logx: bool = False):
        self.title = title
        self.xlabel = xlabel
        self.ylabel = ylabel
        self.logx = logx
        self.series: list[tuple[np.ndarray, np.ndarray, str, str, str]] = []

    def add_series(self, x, y, label: str, color: str | None = None,
                   dash: str = "") -> None:
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if x.size != y.size:
            raise ValueError("series x and y lengths differ")
        if x.size == 0:
            raise ValueError("series must contain at least one point")
        if self.logx and np.any(x <= 0.0):
            raise ValueError("log-scale x axis requires positive x values")
        if color is None:
            color = PALETTE[len(self.series) % len(PALETTE)]
        self.series.append((x, y, label, color, dash))

    def render(self) -> str:
        if not self.series:
            raise ValueError("plot has no series")
        xs = np.concatenate([s[0] for s in self.series])
        ys = np.concatenate([s[1] for s in self.series])
        x_lo, x_hi = float(xs.min()), float(xs.max())
        y_lo, y_hi = float(ys.min()), float(ys.max())
        if y_hi == y_lo:
            y_hi = y_lo + 1.0
        pad = 0.05 * (y_hi - y_lo)
        y_lo -= pad
        y_hi += pad

        if self.logx:
            x_ticks = _decade_ticks(x_lo, x_hi)
            x_map_lo, x_map_hi = math.log10(x_lo), math.log10(x_hi)
        else:
            x_ticks = _nice_ticks(x_lo, x_hi)
            x_map_lo, x_map_hi = x_lo, x_hi
        if x_map_hi == x_map_lo:
            x_map_hi = x_map_lo + 1.0
        y_ticks = _nice_ticks(y_lo, y_hi)

        inner_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
        inner_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

        def px(value: float) -> float:
            v = math.log10(value) if self.logx else value
            return MARGIN_LEFT + inner_w * (v - x_map_lo) / (x_map_hi - x_map_lo)

        def py(value: float) -> float:
            return (HEIGHT - MARGIN_BOTTOM
                    - inner_h * (value - y_lo) / (y_hi - y_lo))

        parts = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
            f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" '
            f'font-family="sans-serif" font-size="15">{escape(self.title)}</text>',
        ]
        axis_color = "#333333"
        x0, x1 = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
        y0, y1 = HEIGHT - MARGIN_BOTTOM, MARGIN_TOP
        parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" '
                     f'stroke="{axis_color}" stroke-width="1"/>')
        parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" '
                     f'stroke="{axis_color}" stroke-width="1"/>')

        for tick in x_ticks:
            tx = px(tick)
            parts.append(f'<line x1="{tx:.2f}" y1="{y0}" x2="{tx:.2f}" '
                         f'y2="{y0 + 5}" stroke="{axis_color}" stroke-width="1"/>')
            parts.append(f'<line x1="{tx:.2f}" y1="{y0}" x2="{tx:.2f}" '
                         f'y2="{y1}" stroke="#dddddd" stroke-width="0.5"/>')
            parts.append(f'<text x="{tx:.2f}" y="{y0 + 20}" text-anchor="middle" '
                         f'font-family="sans-serif" font-size="12">'
                         f'{escape(_format_tick(tick))}</text>')
        for tick in y_ticks:
            ty = py(tick)
            parts.append(f'<line x1="{x0 - 5}" y1="{ty:.2f}" x2="{x0}" '
                         f'y2="{ty:.2f}" stroke="{axis_color}" stroke-width="1"/>')
            parts.append(f'<line x1="{x0}" y1="{ty:.2f}" x2="{x1}" '
                         f'y2="{ty:.2f}" stroke="#dddddd" stroke-width="0.5"/>')
            parts.append(f'<text x="{x0 - 9}" y="{ty + 4:.2f}" text-anchor="end" '
                         f'font-family="sans-serif" font-size="12">'
                         f'{escape(_format_tick(tick))}</text>')

        parts.append(f'<text x="{(x0 + x1) / 2:.1f}" y="{HEIGHT - 16}" '
                     f'text-anchor="middle" font-family="sans-serif" '
                     f'font-size="13">{escape(self.xlabel)}</text>')
        parts.append(f'<text x="20" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="13" '
                     f'transform="rotate(-90 20 {(y0 + y1) / 2:.1f})">'
                     f'{escape(self.ylabel)}</text>')

        for x, y, label, color, dash in self.series:
            points = " ".join(f"{px(xv):.2f},{py(yv):.2f}"
                              for xv, yv in zip(x, y))
            dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
            parts.append(f'<polyline points="{points}" fill="none" '
                         f'stroke="{color}" stroke-width="1.5"{dash_attr}/>')

        legend_y = MARGIN_TOP + 8
        for _, _, label, color, dash in self.series:
            lx = x1 - 170
            dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
            parts.append(f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 26}" '
                         f'y2="{legend_y}" stroke="{color}" '
                         f'stroke-width="1.5"{dash_attr}/>')
            parts.append(f'<text x="{lx + 32}" y="{legend_y + 4}" '
                         f'font-family="sans-serif" font-size="12">'
                         f'{escape(label)}</text>')
            legend_y += 18

        parts.append("</svg>")
        return "\n".join(parts) + "\n"

    def write(self, path) -> None:
        content = self.render()
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(content)
