"""Tiny dependency-free SVG line charts for the experiment CLIs."""

from __future__ import annotations

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_W, _H = 640, 400
_MARGIN = 56


def _scale(values, lo, hi, out_lo, out_hi):
    span = hi - lo or 1.0
    return [out_lo + (v - lo) / span * (out_hi - out_lo) for v in values]


def render_line_chart(title: str, series: dict, x_label: str = "", y_label: str = "") -> str:
    """Render named (x, y) point lists as one SVG document string."""
    xs = [p[0] for pts in series.values() for p in pts]
    ys = [p[1] for pts in series.values() for p in pts]
    if not xs:
        xs, ys = [0.0], [0.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(0.0, min(ys)), max(ys)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{_MARGIN}" y1="{_H - _MARGIN}" x2="{_W - 20}" y2="{_H - _MARGIN}" stroke="black"/>',
        f'<line x1="{_MARGIN}" y1="{_H - _MARGIN}" x2="{_MARGIN}" y2="30" stroke="black"/>',
        f'<text x="{_W / 2}" y="{_H - 12}" text-anchor="middle">{x_label}</text>',
        f'<text x="14" y="{_H / 2}" text-anchor="middle" '
        f'transform="rotate(-90 14 {_H / 2})">{y_label}</text>',
        f'<text x="{_MARGIN}" y="{_H - _MARGIN + 16}">{x_lo:g}</text>',
        f'<text x="{_W - 20}" y="{_H - _MARGIN + 16}" text-anchor="end">{x_hi:g}</text>',
        f'<text x="{_MARGIN - 4}" y="{_H - _MARGIN}" text-anchor="end">{y_lo:g}</text>',
        f'<text x="{_MARGIN - 4}" y="34" text-anchor="end">{y_hi:g}</text>',
    ]
    for idx, (label, points) in enumerate(series.items()):
        if not points:
            continue
        color = _COLORS[idx % len(_COLORS)]
        px = _scale([p[0] for p in points], x_lo, x_hi, _MARGIN, _W - 20)
        py = _scale([p[1] for p in points], y_lo, y_hi, _H - _MARGIN, 30)
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(px, py))
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{_W - 24}" y="{34 + 16 * idx}" text-anchor="end" '
                     f'fill="{color}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts)


def write_line_chart(path, title: str, series: dict, x_label: str = "",
                     y_label: str = "") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_line_chart(title, series, x_label, y_label))
