"""A small deterministic SVG line-chart backend.

Pure string building: fixed canvas, fixed palette, fixed fonts, no
timestamps and no randomness, so identical input data always yields
byte-identical SVG.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

WIDTH, HEIGHT = 800, 520
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 76, 24, 48, 58

PALETTE = ("#1f6fb2", "#d1495b", "#2e8b57", "#e0a426", "#7a4fb5", "#4a4a4a",
           "#18a3a3", "#9a6240")


@dataclass(frozen=True)
class Series:
    label: str
    xs: tuple[float, ...]
    ys: tuple[float, ...]


def _nice_step(span: float) -> float:
    if span <= 0.0:
        return 1.0
    raw = span / 5.0
    power = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * power:
            return mult * power
    return 10.0 * power


def _linear_ticks(lo: float, hi: float) -> list[float]:
    step = _nice_step(hi - lo)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * max(1.0, abs(hi)):
        ticks.append(0.0 if abs(t) < step * 1e-9 else t)
        t += step
    return ticks


def _pad_range(values: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if hi == lo:
        pad = max(1.0, abs(lo) * 0.1)
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.06
    return lo - pad, hi + pad


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _px(v: float) -> str:
    return f"{v:.2f}"


def line_chart(series: Sequence[Series], *, title: str, xlabel: str,
               ylabel: str, ref: float | None = None,
               logx: bool = False) -> str:
    """Render series as an SVG line chart; returns the SVG document text."""
    if not series:
        raise ValueError("line_chart needs at least one series")

    def tx(x: float) -> float:
        return math.log10(x) if logx else x

    all_x = [tx(x) for s in series for x in s.xs]
    all_y = [y for s in series for y in s.ys]
    if ref is not None:
        all_y.append(ref)
    x_lo, x_hi = _pad_range(all_x)
    y_lo, y_hi = _pad_range(all_y)

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(x: float) -> float:
        return MARGIN_LEFT + (tx(x) - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        return MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

    out = []
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
               f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">')
    out.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>')
    out.append(f'<text x="{WIDTH / 2:.0f}" y="26" text-anchor="middle" '
               f'font-family="Helvetica,Arial,sans-serif" font-size="17" '
               f'fill="#222222">{_escape(title)}</text>')

    # gridlines and ticks
    if logx:
        lo_pow = math.floor(x_lo)
        hi_pow = math.ceil(x_hi)
        x_ticks = [(10.0 ** p, float(p)) for p in range(int(lo_pow), int(hi_pow) + 1)
                   if x_lo - 1e-9 <= p <= x_hi + 1e-9]
    else:
        x_ticks = [(t, t) for t in _linear_ticks(x_lo, x_hi)]
    y_ticks = _linear_ticks(y_lo, y_hi)

    for label_value, pos in x_ticks:
        px = MARGIN_LEFT + (pos - x_lo) / (x_hi - x_lo) * plot_w
        out.append(f'<line x1="{_px(px)}" y1="{MARGIN_TOP}" x2="{_px(px)}" '
                   f'y2="{HEIGHT - MARGIN_BOTTOM}" stroke="#e4e4e4" stroke-width="1"/>')
        out.append(f'<text x="{_px(px)}" y="{HEIGHT - MARGIN_BOTTOM + 20}" '
                   f'text-anchor="middle" font-family="Helvetica,Arial,sans-serif" '
                   f'font-size="12" fill="#444444">{_fmt(label_value)}</text>')
    for t in y_ticks:
        py = sy(t)
        out.append(f'<line x1="{MARGIN_LEFT}" y1="{_px(py)}" '
                   f'x2="{WIDTH - MARGIN_RIGHT}" y2="{_px(py)}" '
                   f'stroke="#e4e4e4" stroke-width="1"/>')
        out.append(f'<text x="{MARGIN_LEFT - 8}" y="{_px(py + 4)}" '
                   f'text-anchor="end" font-family="Helvetica,Arial,sans-serif" '
                   f'font-size="12" fill="#444444">{_fmt(t)}</text>')

    # frame
    out.append(f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" '
               f'height="{plot_h}" fill="none" stroke="#888888" stroke-width="1"/>')

    # axis labels
    out.append(f'<text x="{MARGIN_LEFT + plot_w / 2:.0f}" y="{HEIGHT - 14}" '
               f'text-anchor="middle" font-family="Helvetica,Arial,sans-serif" '
               f'font-size="14" fill="#222222">{_escape(xlabel)}</text>')
    out.append(f'<text x="20" y="{MARGIN_TOP + plot_h / 2:.0f}" '
               f'text-anchor="middle" font-family="Helvetica,Arial,sans-serif" '
               f'font-size="14" fill="#222222" '
               f'transform="rotate(-90 20 {MARGIN_TOP + plot_h / 2:.0f})">'
               f'{_escape(ylabel)}</text>')

    # reference line
    if ref is not None:
        py = sy(ref)
        out.append(f'<line class="reference" x1="{MARGIN_LEFT}" y1="{_px(py)}" '
                   f'x2="{WIDTH - MARGIN_RIGHT}" y2="{_px(py)}" '
                   f'stroke="#222222" stroke-width="1.5" stroke-dasharray="7,5"/>')
        out.append(f'<text x="{WIDTH - MARGIN_RIGHT - 6}" y="{_px(py - 6)}" '
                   f'text-anchor="end" font-family="Helvetica,Arial,sans-serif" '
                   f'font-size="12" fill="#222222">reference {_fmt(ref)}</text>')

    # series
    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        points = " ".join(f"{_px(sx(x))},{_px(sy(y))}" for x, y in zip(s.xs, s.ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" '
                   f'points="{points}"/>')
        for x, y in zip(s.xs, s.ys):
            out.append(f'<circle cx="{_px(sx(x))}" cy="{_px(sy(y))}" r="3" '
                       f'fill="{color}"/>')

    # legend
    legend_x = WIDTH - MARGIN_RIGHT - 180
    legend_y = MARGIN_TOP + 12
    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        y = legend_y + 18 * i
        out.append(f'<line x1="{legend_x}" y1="{y}" x2="{legend_x + 24}" y2="{y}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{legend_x + 30}" y="{y + 4}" '
                   f'font-family="Helvetica,Arial,sans-serif" font-size="12" '
                   f'fill="#222222">{_escape(s.label)}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;"))
