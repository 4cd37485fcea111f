"""Static SVG rendering of barcodes."""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from pathlib import Path

from gridpersist.barcode_algebra import Interval, standard_key

COLORS = {0: "#d62728", 1: "#1f77b4"}

WIDTH = 800
BAR_HEIGHT = 6
BAR_GAP = 3
MARGIN = 40
INF_OVERHANG = 0.08


def _scale(barcodes: Mapping[int, Sequence[Interval]]) -> tuple[float, float]:
    values = [
        v
        for bars in barcodes.values()
        for iv in bars
        for v in (iv.birth, iv.death)
        if not math.isinf(v)
    ]
    lo = min(values, default=0.0)
    hi = max(values, default=1.0)
    if hi <= lo:
        hi = lo + 1.0
    return lo, hi + (hi - lo) * INF_OVERHANG


def svg_barcode(barcodes: Mapping[int, Sequence[Interval]]) -> str:
    """SVG document with one horizontal bar per nonempty interval.

    Degree 0 is red and degree 1 blue. Infinite bars run to a dashed line
    labelled ``inf`` past the largest finite value.
    """
    lo, inf_value = _scale(barcodes)
    span = WIDTH - 2 * MARGIN

    def x(v: float) -> float:
        return MARGIN + span * ((inf_value if math.isinf(v) else v) - lo) / (inf_value - lo)

    rows: list[str] = []
    y = MARGIN
    for dim in sorted(barcodes):
        bars = sorted((iv for iv in barcodes[dim] if not iv.is_empty), key=standard_key)
        color = COLORS.get(dim, "#555555")
        rows.append(f'<text x="4" y="{y + BAR_HEIGHT}" font-size="10">H{dim}</text>')
        for iv in bars:
            left, right = x(iv.birth), x(iv.death)
            rows.append(
                f'<rect x="{left:.2f}" y="{y}" width="{max(right - left, 0.5):.2f}" '
                f'height="{BAR_HEIGHT}" fill="{color}"/>'
            )
            y += BAR_HEIGHT + BAR_GAP
        y += 2 * BAR_GAP
    height = y + MARGIN
    inf_x = x(math.inf)
    rows.append(
        f'<line x1="{inf_x:.2f}" y1="{MARGIN / 2}" x2="{inf_x:.2f}" y2="{height - MARGIN / 2}" '
        'stroke="#333333" stroke-dasharray="4,3"/>'
    )
    rows.append(f'<text x="{inf_x + 3:.2f}" y="{MARGIN / 2 + 8}" font-size="10">inf</text>')
    body = "\n  ".join(rows)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" '
        f'viewBox="0 0 {WIDTH} {height}">\n  {body}\n</svg>\n'
    )


def render_svg(barcodes: Mapping[int, Sequence[Interval]], path: str | Path) -> Path:
    path = Path(path)
    path.write_text(svg_barcode(barcodes))
    return path
