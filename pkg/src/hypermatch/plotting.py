"""Matplotlib rendering of sweep summaries to standalone SVG.

Glyphs are emitted as paths, so the SVG needs no fonts.  Artists carry
stable ids (``mean-line``, ``ci-whiskers``, ``unit-threshold``) that
downstream tooling can select on.
"""

from __future__ import annotations

import io
import math
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

from matplotlib.backends.backend_svg import FigureCanvasSVG
from matplotlib.figure import Figure

from .bounds import unit_threshold
from .errors import RenderError
from .experiments import SummaryRow

STYLE = {
    "svg.fonttype": "path",
    "svg.hashsalt": "hypermatch",
    "font.size": 10,
    "axes.labelsize": 11,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "xtick.direction": "out",
    "ytick.direction": "out",
    "lines.linewidth": 1.4,
    "lines.markersize": 4,
}

STYLES = ("auto", "unity", "gap")


def unit_threshold_marker(n: int) -> int:
    """Smallest edge count at or above the unit threshold for n vertices."""
    return math.ceil(unit_threshold(n))


def _infer_style(rows: Sequence[SummaryRow]) -> str:
    ns = {r.n for r in rows}
    return "gap" if len(ns) == 1 and len({r.M for r in rows}) > 1 else "unity"


def render_plot(
    summary: Sequence[SummaryRow],
    style: str = "auto",
    *,
    threshold_marker: Optional[bool] = None,
    title: Optional[str] = None,
) -> str:
    """Render mean matching number with 95% CI whiskers as SVG text.

    ``style="unity"`` plots against n, ``style="gap"`` against M (all rows
    must share one n).  The gap style draws a dashed vertical marker at the
    unit threshold unless ``threshold_marker=False``.
    """
    rows = list(summary)
    if not rows:
        raise RenderError("nothing to plot: summary is empty")
    if style not in STYLES:
        raise RenderError(f"style must be one of {STYLES}, got {style!r}")
    if style == "auto":
        style = _infer_style(rows)
    if style == "gap" and len({r.n for r in rows}) != 1:
        raise RenderError("gap plots need every row to share the same n")
    if threshold_marker is None:
        threshold_marker = style == "gap"

    x = [r.n if style == "unity" else r.M for r in rows]
    mean = [r.mean for r in rows]

    with matplotlib.rc_context(STYLE):
        fig = Figure(figsize=(6.4, 4.0))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot()
        ax.vlines(x, [r.ci_lo for r in rows], [r.ci_hi for r in rows],
                  colors="0.55", linewidth=1.0, gid="ci-whiskers", label="95% CI")
        ax.plot(x, mean, marker="o", color="tab:blue", gid="mean-line", label="mean")
        if threshold_marker:
            n = rows[0].n
            ax.axvline(unit_threshold_marker(n), color="tab:red", linestyle="--",
                       linewidth=1.0, gid="unit-threshold",
                       label=f"unit threshold (M = {unit_threshold_marker(n)})")
        ax.set_xlabel("number of vertices n" if style == "unity" else "number of edges M")
        ax.set_ylabel("mean hyper-matching number")
        if title is None:
            title = ("M = floor(base^n)" if style == "unity" else f"n = {rows[0].n}")
        ax.set_title(title)
        ax.legend(frameon=False, loc="best")
        fig.tight_layout()
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


def write_plot(summary: Sequence[SummaryRow], path, style: str = "auto", **kwargs) -> None:
    svg = render_plot(summary, style, **kwargs)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)
