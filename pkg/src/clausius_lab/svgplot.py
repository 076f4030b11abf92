"""Minimal self-contained SVG line plots (no plotting dependency)."""

from __future__ import annotations

from pathlib import Path

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"]
_W, _H = 640, 420
_ML, _MR, _MT, _MB = 70, 20, 30, 50


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def line_plot(
    path: str | Path,
    xs: list[float],
    series: list[tuple[str, list[float]]],
    title: str = "",
    xlabel: str = "",
) -> None:
    ys_all = [y for _, ys in series for y in ys]
    if not xs or not ys_all:
        raise ValueError("nothing to plot")
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    if x_hi == x_lo:
        x_hi = x_lo + 1.0

    def sx(x):
        return _ML + (x - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def sy(y):
        return _H - _MB - (y - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W/2:.1f}" y="18" text-anchor="middle" font-size="14">{title}</text>',
    ]
    for tx in _ticks(x_lo, x_hi):
        px = sx(tx)
        out.append(
            f'<line x1="{px:.2f}" y1="{_H-_MB}" x2="{px:.2f}" y2="{_H-_MB+5}" stroke="black"/>'
        )
        out.append(
            f'<text x="{px:.2f}" y="{_H-_MB+18}" text-anchor="middle" font-size="10">{tx:.3g}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        py = sy(ty)
        out.append(f'<line x1="{_ML-5}" y1="{py:.2f}" x2="{_ML}" y2="{py:.2f}" stroke="black"/>')
        out.append(
            f'<text x="{_ML-8}" y="{py+3:.2f}" text-anchor="end" font-size="10">{ty:.3g}</text>'
        )
    out.append(
        f'<rect x="{_ML}" y="{_MT}" width="{_W-_ML-_MR}" height="{_H-_MT-_MB}" '
        f'fill="none" stroke="black"/>'
    )
    if xlabel:
        out.append(
            f'<text x="{_W/2:.1f}" y="{_H-10}" text-anchor="middle" font-size="12">{xlabel}</text>'
        )
    for k, (label, ys) in enumerate(series):
        color = _COLORS[k % len(_COLORS)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        out.append(
            f'<text x="{_W-_MR-5}" y="{_MT+16*(k+1)}" text-anchor="end" '
            f'font-size="11" fill="{color}">{label}</text>'
        )
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")
