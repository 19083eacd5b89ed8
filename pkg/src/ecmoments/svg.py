"""Deterministic SVG rendering of block-mean histograms, no plotting dependencies."""

from __future__ import annotations

from .bias import Histogram

WIDTH, HEIGHT = 800, 600
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 30, 60, 80


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_histogram_svg(hist: Histogram, title: str) -> str:
    """Render bars on a fixed 800x600 canvas; output bytes depend only on inputs."""
    n = len(hist.counts)
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    x0, y0 = MARGIN_LEFT, HEIGHT - MARGIN_BOTTOM
    max_count = max(hist.counts) if hist.counts else 1
    max_count = max(max_count, 1)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'width="%d" height="%d" viewBox="0 0 %d %d">' % (WIDTH, HEIGHT, WIDTH, HEIGHT),
        '<rect x="0" y="0" width="%d" height="%d" fill="white"/>' % (WIDTH, HEIGHT),
        '<text x="%d" y="30" font-family="monospace" font-size="16" text-anchor="middle">%s</text>'
        % (WIDTH // 2, _esc(title)),
    ]
    # axes
    parts.append(
        '<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="black" stroke-width="1"/>'
        % (x0, y0, x0 + plot_w, y0)
    )
    parts.append(
        '<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="black" stroke-width="1"/>'
        % (x0, y0, x0, y0 - plot_h)
    )
    # bars
    for i, count in enumerate(hist.counts):
        bx = x0 + plot_w * i / n
        bw = plot_w / n
        bh = plot_h * count / max_count
        parts.append(
            '<rect x="%.2f" y="%.2f" width="%.2f" height="%.2f" '
            'fill="#4878a8" stroke="black" stroke-width="0.5"/>'
            % (bx, y0 - bh, bw, bh)
        )
    # x ticks at bin edges, labels to 3 decimals
    for i, edge in enumerate(hist.bin_edges):
        tx = x0 + plot_w * i / n
        parts.append(
            '<line x1="%.2f" y1="%d" x2="%.2f" y2="%d" stroke="black" stroke-width="1"/>'
            % (tx, y0, tx, y0 + 6)
        )
        parts.append(
            '<text x="%.2f" y="%d" font-family="monospace" font-size="11" '
            'text-anchor="middle">%.3f</text>' % (tx, y0 + 22, edge)
        )
    # y ticks: 0 and up to 5 integer steps
    step = max(1, -(-max_count // 5))
    tick = 0
    while tick <= max_count:
        ty = y0 - plot_h * tick / max_count
        parts.append(
            '<line x1="%d" y1="%.2f" x2="%d" y2="%.2f" stroke="black" stroke-width="1"/>'
            % (x0 - 6, ty, x0, ty)
        )
        parts.append(
            '<text x="%d" y="%.2f" font-family="monospace" font-size="11" '
            'text-anchor="end">%d</text>' % (x0 - 10, ty + 4, tick)
        )
        tick += step
    parts.append(
        '<text x="%d" y="%d" font-family="monospace" font-size="13" text-anchor="middle">'
        "block mean</text>" % (x0 + plot_w // 2, HEIGHT - 16)
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
