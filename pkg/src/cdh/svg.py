"""Minimal hand-emitted SVG line charts.

No plotting dependency: a fixed-size canvas, linear or log axes with tick
labels, polyline curves and a legend.  Output is deterministic (floats are
formatted with a fixed rule), so figures can be used as goldens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["Curve", "line_chart"]

_WIDTH, _HEIGHT = 840, 520
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 72, 24, 42, 54
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#17becf", "#7f7f7f")


@dataclass(frozen=True)
class Curve:
    label: str
    xs: tuple
    ys: tuple


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def _tick_label(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.1e}"
    return _fmt(v)


def _ticks(lo: float, hi: float, log: bool) -> list[float]:
    if log:
        lo_e, hi_e = math.floor(math.log10(lo)), math.ceil(math.log10(hi))
        step = max(1, (hi_e - lo_e) // 6)
        return [10.0**e for e in range(lo_e, hi_e + 1, step)]
    span = hi - lo
    raw = span / 6.0
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min(s * mag for s in (1, 2, 5, 10) if s * mag >= raw)
    first = math.ceil(lo / step) * step
    out = []
    v = first
    while v <= hi + 1e-12 * span:
        out.append(0.0 if abs(v) < 1e-12 * span else v)
        v += step
    return out


def line_chart(path: str, title: str, xlabel: str, ylabel: str,
               curves: list[Curve], *, xlog: bool = False,
               ylog: bool = False) -> None:
    """Write an SVG line chart with the given curves to ``path``."""
    xs_all = [x for c in curves for x in c.xs]
    ys_all = [y for c in curves for y in c.ys if not (ylog and y <= 0)]
    if not xs_all or not ys_all:
        raise ValueError("nothing to plot")
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if not xlog:
        pad = 0.05 * (x_hi - x_lo or 1.0)
        x_lo, x_hi = x_lo - pad, x_hi + pad
    if not ylog:
        pad = 0.08 * (y_hi - y_lo or abs(y_hi) or 1.0)
        y_lo, y_hi = y_lo - pad, y_hi + pad
    if ylog and y_lo == y_hi:
        y_lo, y_hi = y_lo / 10.0, y_hi * 10.0

    def sx(x: float) -> float:
        u = (math.log10(x) - math.log10(x_lo)) / (math.log10(x_hi) - math.log10(x_lo)) \
            if xlog else (x - x_lo) / (x_hi - x_lo)
        return _MARGIN_L + u * (_WIDTH - _MARGIN_L - _MARGIN_R)

    def sy(y: float) -> float:
        u = (math.log10(y) - math.log10(y_lo)) / (math.log10(y_hi) - math.log10(y_lo)) \
            if ylog else (y - y_lo) / (y_hi - y_lo)
        return _HEIGHT - _MARGIN_B - u * (_HEIGHT - _MARGIN_T - _MARGIN_B)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH // 2}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
    ]
    axis = (f'{_MARGIN_L},{_MARGIN_T} {_MARGIN_L},{_HEIGHT - _MARGIN_B} '
            f'{_WIDTH - _MARGIN_R},{_HEIGHT - _MARGIN_B}')
    parts.append(f'<polyline points="{axis}" fill="none" stroke="black" '
                 f'stroke-width="1"/>')

    for tx in _ticks(x_lo, x_hi, xlog):
        if not (x_lo <= tx <= x_hi):
            continue
        px = sx(tx)
        parts.append(f'<line x1="{px:.1f}" y1="{_HEIGHT - _MARGIN_B}" '
                     f'x2="{px:.1f}" y2="{_HEIGHT - _MARGIN_B + 5}" stroke="black"/>')
        parts.append(f'<text x="{px:.1f}" y="{_HEIGHT - _MARGIN_B + 20}" '
                     f'text-anchor="middle" font-family="sans-serif" '
                     f'font-size="11">{_tick_label(tx)}</text>')
    for ty in _ticks(y_lo, y_hi, ylog):
        if not (y_lo <= ty <= y_hi):
            continue
        py = sy(ty)
        parts.append(f'<line x1="{_MARGIN_L - 5}" y1="{py:.1f}" '
                     f'x2="{_MARGIN_L}" y2="{py:.1f}" stroke="black"/>')
        parts.append(f'<text x="{_MARGIN_L - 8}" y="{py + 4:.1f}" '
                     f'text-anchor="end" font-family="sans-serif" '
                     f'font-size="11">{_tick_label(ty)}</text>')

    parts.append(f'<text x="{_WIDTH // 2}" y="{_HEIGHT - 14}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="13">{xlabel}</text>')
    parts.append(f'<text x="18" y="{_HEIGHT // 2}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="13" '
                 f'transform="rotate(-90 18 {_HEIGHT // 2})">{ylabel}</text>')

    for i, curve in enumerate(curves):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(curve.xs, curve.ys)
                       if not (ylog and y <= 0) and not (xlog and x <= 0))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     f'stroke-width="1.6"/>')
        ly = _MARGIN_T + 16 + 18 * i
        lx = _WIDTH - _MARGIN_R - 170
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 26}" y2="{ly - 4}" '
                     f'stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 32}" y="{ly}" font-family="sans-serif" '
                     f'font-size="12">{curve.label}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
