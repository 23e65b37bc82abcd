"""
Log-log plots of sweep tables without any rendering dependency.

SVG output is assembled from path elements by hand so that identical tables
give identical files.
"""

import math
import sys

__all__ = ["PlotError", "emit_plot", "render_svg", "render_ascii"]

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
DASHES = ("", "4 3", "1 3", "6 3 1 3", "8 4", "2 2", "")
MARKERS = "*o+x#@%"

# How each sweep variable is shown on the horizontal axis.
AXIS_DISPLAY = {
    "z": ("distance z (um)", 1e6),
    "omega_t": ("trap frequency omega_t/2pi (Hz)", 1 / (2 * math.pi)),
    "T": ("temperature T (K)", 1.0),
}


class PlotError(ValueError):
    pass


def _series(table, notify):
    """Positive (x, y) pairs per column; empty columns are skipped."""
    label, scale = AXIS_DISPLAY[table.variable]
    out = []
    for col in table.columns:
        pts = [(x * scale, y) for x, y in zip(table.values, table.rates[col])
               if y is not None and y > 0 and x > 0]
        if len(pts) < 2:
            notify(f"plot: skipping series {col!r} (fewer than two positive values)")
            continue
        out.append((col, pts))
    return label, out


def _stderr(msg):
    print(msg, file=sys.stderr)


def _bounds(series):
    xs = [math.log10(x) for _, pts in series for x, _ in pts]
    ys = [math.log10(y) for _, pts in series for _, y in pts]
    x0, x1 = math.floor(min(xs)), math.ceil(max(xs))
    y0, y1 = math.floor(min(ys)), math.ceil(max(ys))
    if x1 == x0:
        x1 += 1
    if y1 == y0:
        y1 += 1
    return x0, x1, y0, y1


def _check(table):
    if len(table.values) < 2:
        raise PlotError("need at least two sweep points to plot")


def render_svg(table, notify=_stderr, width=640, height=480):
    _check(table)
    label, series = _series(table, notify)
    if not series:
        raise PlotError("nothing to plot: every series is empty or non-positive")
    x0, x1, y0, y1 = _bounds(series)
    left, right, top, bottom = 80, 20, 20, 60
    pw, ph = width - left - right, height - top - bottom

    def px(lx):
        return left + (lx - x0) / (x1 - x0) * pw

    def py(ly):
        return top + (y1 - ly) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    ystep = max(1, (y1 - y0) // 10)
    for d in range(x0, x1 + 1):
        x = px(d)
        out.append(f'<line x1="{x:.2f}" y1="{top}" x2="{x:.2f}" y2="{top + ph}" stroke="#ddd"/>')
        out.append(f'<text x="{x:.2f}" y="{top + ph + 16}" text-anchor="middle">1e{d}</text>')
    for d in range(y0, y1 + 1, ystep):
        y = py(d)
        out.append(f'<line x1="{left}" y1="{y:.2f}" x2="{left + pw}" y2="{y:.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{left - 6}" y="{y + 4:.2f}" text-anchor="end">1e{d}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 15}" text-anchor="middle">{label}</text>')
    out.append(f'<text x="18" y="{top + ph / 2:.2f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {top + ph / 2:.2f})">heating rate (1/s)</text>')
    for k, (name, pts) in enumerate(series):
        d = " ".join(f"{'M' if i == 0 else 'L'}{px(math.log10(x)):.2f},{py(math.log10(y)):.2f}"
                     for i, (x, y) in enumerate(pts))
        dash = DASHES[k % len(DASHES)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        color = COLORS[k % len(COLORS)]
        out.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"{dash_attr}/>')
        ly = top + 14 + 16 * k
        out.append(f'<line x1="{left + pw - 170}" y1="{ly - 4}" x2="{left + pw - 145}" '
                   f'y2="{ly - 4}" stroke="{color}" stroke-width="1.5"{dash_attr}/>')
        out.append(f'<text x="{left + pw - 140}" y="{ly}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_ascii(table, notify=_stderr, width=80, height=24):
    _check(table)
    label, series = _series(table, notify)
    if not series:
        raise PlotError("nothing to plot: every series is empty or non-positive")
    x0, x1, y0, y1 = _bounds(series)
    gutter = 7
    cols = width - gutter - 1
    grid = [[" "] * cols for _ in range(height)]
    for k, (_, pts) in enumerate(series):
        mark = MARKERS[k % len(MARKERS)]
        for x, y in pts:
            c = round((math.log10(x) - x0) / (x1 - x0) * (cols - 1))
            r = round((y1 - math.log10(y)) / (y1 - y0) * (height - 1))
            grid[r][c] = mark
    lines = []
    for r, row in enumerate(grid):
        ly = y1 - r * (y1 - y0) / (height - 1)
        tick = f"1e{round(ly)}" if r in (0, height - 1) or r == height // 2 else ""
        lines.append(f"{tick:>{gutter}}|" + "".join(row))
    lines.append(" " * gutter + "+" + "-" * cols)
    axis = f"1e{x0}".ljust(cols - len(f"1e{x1}")) + f"1e{x1}"
    lines.append(" " * (gutter + 1) + axis)
    lines.append(" " * (gutter + 1) + label + "; rate in 1/s")
    for k, (name, _) in enumerate(series):
        lines.append(f"  {MARKERS[k % len(MARKERS)]} {name}")
    return "\n".join(line.rstrip() for line in lines) + "\n"


def emit_plot(table, path, format=None, notify=_stderr):
    """Write an SVG or ASCII log-log plot. ``format`` defaults from the
    extension of ``path`` (``.svg`` -> svg, anything else -> ascii)."""
    if format is None:
        format = "svg" if str(path).lower().endswith(".svg") else "ascii"
    if format == "svg":
        text = render_svg(table, notify)
    elif format == "ascii":
        text = render_ascii(table, notify)
    else:
        raise PlotError(f"unknown plot format {format!r}")
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
