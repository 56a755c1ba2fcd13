"""Standalone SVG scatter-matrix output (no plotting library needed)."""

from pathlib import Path

import numpy as np

from .exceptions import IoError, RankError

CANVAS = 640
MARGIN = 24
PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def scatter_svg(embedding, labels=None, max_dims=4, title=None) -> str:
    """SVG text of a pairwise scatter matrix of the first ``max_dims`` columns.

    Diagonal panels hold the dimension name; every off-diagonal panel has
    one ``<circle>`` per sample. Output depends only on the inputs.
    """
    Z = np.asarray(embedding, dtype=float)
    if Z.ndim != 2 or Z.shape[1] < 2:
        raise RankError("scatter matrix needs an embedding with at least 2 columns")
    m = min(Z.shape[1], max_dims)
    Z = Z[:, :m]
    n = Z.shape[0]
    if labels is None:
        colors = [PALETTE[0]] * n
    else:
        labels = np.asarray(labels).ravel()
        if labels.shape[0] != n:
            raise RankError("labels length differs from number of points")
        uniq = {v: i for i, v in enumerate(sorted(set(labels.tolist()), key=str))}
        colors = [PALETTE[uniq[v] % len(PALETTE)] for v in labels.tolist()]

    cell = (CANVAS - 2 * MARGIN) / m
    pad = 6.0
    lo = Z.min(axis=0)
    span = Z.max(axis=0) - lo
    span[span == 0] = 1.0
    unit = (Z - lo) / span

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" '
        f'viewBox="0 0 {CANVAS} {CANVAS}">',
        f'<rect x="0" y="0" width="{CANVAS}" height="{CANVAS}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{MARGIN}" y="{MARGIN - 8}" font-size="12">{_escape(title)}</text>')
    for row in range(m):
        for col in range(m):
            x0 = MARGIN + col * cell
            y0 = MARGIN + row * cell
            out.append(
                f'<g><rect x="{x0:.2f}" y="{y0:.2f}" width="{cell:.2f}" height="{cell:.2f}" '
                f'fill="none" stroke="#999999"/>'
            )
            if row == col:
                out.append(
                    f'<text x="{x0 + cell / 2:.2f}" y="{y0 + cell / 2:.2f}" '
                    f'font-size="14" text-anchor="middle">dim {row}</text>'
                )
            else:
                inner = cell - 2 * pad
                for i in range(n):
                    cx = x0 + pad + unit[i, col] * inner
                    cy = y0 + pad + (1.0 - unit[i, row]) * inner
                    out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="2.5" fill="{colors[i]}"/>')
            out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_scatter_svg(embedding, labels=None, path="scatter.svg", **kwargs) -> Path:
    svg = scatter_svg(embedding, labels, **kwargs)
    path = Path(path)
    try:
        path.write_text(svg, encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path


def _escape(s):
    return str(s).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
