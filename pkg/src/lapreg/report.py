"""Deterministic CSV and SVG writers for experiment artifacts."""

from __future__ import annotations

import math
from numbers import Integral, Real

__all__ = ["format_value", "write_csv", "write_line_plot"]


def format_value(v) -> str:
    """Fixed textual form: integers as-is, floats at 17 significant digits."""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, Integral):
        return str(int(v))
    if isinstance(v, Real):
        return f"{float(v):.17g}"
    return "" if v is None else str(v)


def write_csv(path, header, rows) -> None:
    """Write ``rows`` (mappings or sequences) under ``header`` with ``\\n`` endings."""
    with open(path, "w", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            values = [row[h] for h in header] if isinstance(row, dict) else row
            f.write(",".join(format_value(v) for v in values) + "\n")


# SVG ==========================================================================
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _ticks(lo, hi, count=5):
    if hi <= lo:
        return [lo]
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def write_line_plot(path, x, series, title="", xlabel="", ylabel="", width=480, height=360) -> None:
    """Polyline chart with axes, tick labels and a legend.

    ``series`` maps a label to a sequence of y values (same length as ``x``);
    non-finite points are skipped.
    """
    left, right, top, bottom = 64, 16, 32, 48
    pw, ph = width - left - right, height - top - bottom
    ys = [v for ser in series.values() for v in ser if math.isfinite(v)]
    xmin, xmax = min(x), max(x)
    ymin, ymax = (min(ys), max(ys)) if ys else (0.0, 1.0)
    ymin = min(ymin, 0.0)
    if ymax <= ymin:
        ymax = ymin + 1.0
    if xmax <= xmin:
        xmax = xmin + 1.0

    def px(v):
        return left + (v - xmin) / (xmax - xmin) * pw

    def py(v):
        return top + ph - (v - ymin) / (ymax - ymin) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="13">{title}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for t in _ticks(xmin, xmax):
        out.append(f'<line x1="{px(t):.2f}" y1="{top + ph}" x2="{px(t):.2f}" y2="{top + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{px(t):.2f}" y="{top + ph + 16}" text-anchor="middle">{t:.4g}</text>')
    for t in _ticks(ymin, ymax):
        out.append(f'<line x1="{left - 4}" y1="{py(t):.2f}" x2="{left}" y2="{py(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 6}" y="{py(t) + 4:.2f}" text-anchor="end">{t:.4g}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle">{xlabel}</text>')
    out.append(
        f'<text x="14" y="{top + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 14 {top + ph / 2:.1f})">{ylabel}</text>'
    )
    for idx, (label, ser) in enumerate(series.items()):
        color = _COLORS[idx % len(_COLORS)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, ser) if math.isfinite(b))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        ly = top + 12 + 16 * idx
        out.append(f'<line x1="{left + pw - 120}" y1="{ly}" x2="{left + pw - 100}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw - 94}" y="{ly + 4}">{label}</text>')
    out.append("</svg>")
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(out) + "\n")
