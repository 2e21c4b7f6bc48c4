"""Dependency-light static SVG line plots.

Good enough to reproduce the reference figures at desk scale: multiple
polylines, axis ticks, a legend, and optional vertical asymptote markers.
Non-finite samples break the polyline so pole-crossing sweeps render as
separate arcs. The CSV files remain the authoritative artifact; every plot
is a pure function of the data handed in.
"""

from __future__ import annotations

import math

PALETTE = ("#d95f02", "#e6ab02", "#1b6ca8", "#7570b3", "#66a61e", "#444444")

_W, _H = 720, 520
_ML, _MR, _MT, _MB = 72, 24, 40, 56  # margins


def _finite(vals):
    return [v for v in vals if v is not None and math.isfinite(v)]


def _ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    raw = span / n
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 2.5, 5, 10):
        if raw <= mult * mag:
            step = mult * mag
            break
    start = math.ceil(lo / step) * step
    out = []
    t = start
    while t <= hi + 1e-12 * span:
        out.append(round(t, 12))
        t += step
    return out


def line_plot(
    path,
    series,
    title="",
    xlabel="",
    ylabel="",
    xlim=None,
    ylim=None,
    vlines=(),
):
    """Write an SVG 1.1 line plot.

    series: list of (label, xs, ys) triples; vlines: x positions drawn as
    dashed asymptote markers.
    """
    xs_all, ys_all = [], []
    for _, xs, ys in series:
        pts = [
            (x, y)
            for x, y in zip(xs, ys)
            if x is not None and y is not None and math.isfinite(x) and math.isfinite(y)
        ]
        xs_all += [p[0] for p in pts]
        ys_all += [p[1] for p in pts]
    if not xs_all:
        xs_all, ys_all = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = xlim if xlim else (min(xs_all), max(xs_all))
    y_lo, y_hi = ylim if ylim else (min(ys_all), max(ys_all))
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    if not ylim:  # breathing room
        pad = 0.05 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad

    px = lambda x: _ML + (x - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)
    py = lambda y: _H - _MB - (y - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">'
    )
    out.append(f'<rect width="{_W}" height="{_H}" fill="white"/>')
    out.append(
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" '
        f'height="{_H - _MT - _MB}" fill="none" stroke="#333" stroke-width="1"/>'
    )
    if title:
        out.append(
            f'<text x="{_W / 2:.1f}" y="{_MT - 14}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="15">{title}</text>'
        )
    for t in _ticks(x_lo, x_hi):
        if not x_lo <= t <= x_hi:
            continue
        x = px(t)
        out.append(
            f'<line x1="{x:.1f}" y1="{_H - _MB}" x2="{x:.1f}" y2="{_H - _MB + 5}" '
            'stroke="#333"/>'
        )
        out.append(
            f'<text x="{x:.1f}" y="{_H - _MB + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{t:g}</text>'
        )
    for t in _ticks(y_lo, y_hi):
        if not y_lo <= t <= y_hi:
            continue
        y = py(t)
        out.append(
            f'<line x1="{_ML - 5}" y1="{y:.1f}" x2="{_ML}" y2="{y:.1f}" stroke="#333"/>'
        )
        out.append(
            f'<text x="{_ML - 8}" y="{y + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{t:g}</text>'
        )
    if xlabel:
        out.append(
            f'<text x="{(_ML + _W - _MR) / 2:.1f}" y="{_H - 14}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13">{xlabel}</text>'
        )
    if ylabel:
        out.append(
            f'<text x="18" y="{(_MT + _H - _MB) / 2:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13" '
            f'transform="rotate(-90 18 {(_MT + _H - _MB) / 2:.1f})">{ylabel}</text>'
        )
    for xv in vlines:
        if x_lo <= xv <= x_hi:
            x = px(xv)
            out.append(
                f'<line x1="{x:.1f}" y1="{_MT}" x2="{x:.1f}" y2="{_H - _MB}" '
                'stroke="#999" stroke-width="1" stroke-dasharray="5,4"/>'
            )

    for idx, (label, xs, ys) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        segments, current = [], []
        for x, y in zip(xs, ys):
            ok = (
                x is not None
                and y is not None
                and math.isfinite(x)
                and math.isfinite(y)
                and x_lo <= x <= x_hi
            )
            if ok:
                current.append((px(x), min(max(py(y), _MT), _H - _MB)))
            elif current:
                segments.append(current)
                current = []
        if current:
            segments.append(current)
        for seg in segments:
            if len(seg) < 2:
                continue
            d = " ".join(f"{x:.2f},{y:.2f}" for x, y in seg)
            out.append(
                f'<polyline points="{d}" fill="none" stroke="{color}" '
                'stroke-width="1.8"/>'
            )
        lx, ly = _W - _MR - 150, _MT + 16 + 18 * idx
        out.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 26}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{lx + 32}" y="{ly}" font-family="sans-serif" '
            f'font-size="12">{label}</text>'
        )
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
