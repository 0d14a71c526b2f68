"""Heatmap rendering and aggregate statistics for score matrices.

The heatmap is a self-contained SVG 1.1 document built by string assembly:
lower triangle plus diagonal, one colored cell per pair with its score
printed to two decimals. The color ramp is linear from a neutral tone at
0.5 (chance) to a saturated tone at 1.0; scores below chance clip to
neutral. Summaries aggregate the off-diagonal (cross-recording) and
diagonal (same-recording) scores per group and snippet length.
"""
from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .errors import EmptyGroup, IoFailure
from .matrix import AbxScoreMatrix

KIND_CROSS = "cross-recording"
KIND_SAME = "same-recording"

_NEUTRAL = (247, 247, 247)
_MAXIMAL = (5, 48, 97)

_CELL = 64
_MARGIN = 16
_TITLE_H = 24
_TOP_GUTTER = 40
_LEFT_GUTTER = 140
_LEGEND_GAP = 24
_LEGEND_W = 16
_LEGEND_LABEL_W = 56
_LEGEND_STEPS = 50


@dataclass(frozen=True)
class SummaryStats:
    group: str
    snippet_seconds: float
    kind: str
    mean: float
    std: float
    n_pairs: int


def score_color(score: float) -> str:
    """Hex color for a score; linear between 0.5 (neutral) and 1.0 (maximal)."""
    t = min(max((score - 0.5) / 0.5, 0.0), 1.0)
    channels = (round(n + t * (m - n)) for n, m in zip(_NEUTRAL, _MAXIMAL))
    return "#{:02x}{:02x}{:02x}".format(*channels)


def _text(x: float, y: float, content: str, cls: str, anchor: str = "middle",
          fill: str = "#222222", extra: str = "") -> str:
    return (
        f'<text class={quoteattr(cls)} x="{x:g}" y="{y:g}" text-anchor="{anchor}" '
        f'fill="{fill}"{extra}>{escape(content)}</text>'
    )


def heatmap_svg(matrix: AbxScoreMatrix) -> str:
    """Render a matrix to SVG text; see :func:`render_heatmap` for the file form."""
    ids = matrix.recording_ids
    n = len(ids)
    grid_x = _MARGIN + _LEFT_GUTTER
    grid_y = _MARGIN + _TITLE_H + _TOP_GUTTER
    width = grid_x + n * _CELL + _LEGEND_GAP + _LEGEND_W + _LEGEND_LABEL_W + _MARGIN
    height = grid_y + n * _CELL + _MARGIN

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
        '<g font-family="sans-serif" font-size="13">',
    ]
    title = f"{matrix.dataset_name or 'ABX scores'} ({matrix.params.snippet_seconds:g} s snippets)"
    parts.append(_text(grid_x, _MARGIN + 14, title, "title", anchor="start"))

    for j in range(n):
        parts.append(
            _text(grid_x + j * _CELL + _CELL / 2, grid_y - 8, ids[j], "label")
        )
    for i in range(n):
        parts.append(
            _text(grid_x - 8, grid_y + i * _CELL + _CELL / 2 + 4, ids[i], "label", anchor="end")
        )

    for i in range(n):
        for j in range(i + 1):
            x = grid_x + j * _CELL
            y = grid_y + i * _CELL
            if i == j:
                score = matrix.diagonal.get(i)
            else:
                score = matrix.symmetrized_score(i, j)
            fill = "#ffffff" if score is None else score_color(score)
            parts.append(
                f'<rect class="cell" x="{x}" y="{y}" width="{_CELL}" height="{_CELL}" '
                f'fill="{fill}" stroke="#bbbbbb"/>'
            )
            label = "n/a" if score is None else f"{score:.2f}"
            # keep the printed number legible on dark cells
            text_fill = "#ffffff" if score is not None and score >= 0.8 else "#222222"
            parts.append(
                _text(x + _CELL / 2, y + _CELL / 2 + 4, label, "value", fill=text_fill)
            )

    legend_x = grid_x + n * _CELL + _LEGEND_GAP
    legend_h = n * _CELL
    step_h = legend_h / _LEGEND_STEPS
    for k in range(_LEGEND_STEPS):
        s = 1.0 - 0.5 * k / _LEGEND_STEPS  # top of the bar is the maximal score
        parts.append(
            f'<rect class="legendcell" x="{legend_x}" y="{grid_y + k * step_h:g}" '
            f'width="{_LEGEND_W}" height="{step_h:g}" fill="{score_color(s)}"/>'
        )
    for s in (1.0, 0.75, 0.5):
        y = grid_y + (1.0 - s) / 0.5 * legend_h
        parts.append(
            _text(legend_x + _LEGEND_W + 6, y + 4, f"{s:.2f}", "legendtick", anchor="start")
        )

    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _atomic_write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_text(text, encoding="utf-8")
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def render_heatmap(matrix: AbxScoreMatrix, out: str | Path) -> None:
    _atomic_write_text(Path(out), heatmap_svg(matrix))


def summarize(matrices_by_group: dict[str, list[AbxScoreMatrix]]) -> list[SummaryStats]:
    """Mean and population std of scores per group, snippet length and kind.

    Off-diagonal symmetrized scores aggregate under ``cross-recording``,
    diagonal self-scores under ``same-recording``. A kind with no values at
    some length is omitted; a group with no matrices at all is an error.
    """
    rows: list[SummaryStats] = []
    for group in sorted(matrices_by_group):
        matrices = matrices_by_group[group]
        if not matrices:
            raise EmptyGroup(f"group {group!r} holds no matrices")
        by_length: dict[float, dict[str, list[float]]] = {}
        for matrix in matrices:
            slot = by_length.setdefault(
                matrix.params.snippet_seconds, {KIND_CROSS: [], KIND_SAME: []}
            )
            slot[KIND_CROSS].extend(matrix.symmetrized.values())
            slot[KIND_SAME].extend(matrix.diagonal.values())
        for length in sorted(by_length):
            for kind in (KIND_CROSS, KIND_SAME):
                values = by_length[length][kind]
                if not values:
                    continue
                rows.append(
                    SummaryStats(
                        group=group,
                        snippet_seconds=length,
                        kind=kind,
                        mean=float(np.mean(values)),
                        std=float(np.std(values)),
                        n_pairs=len(values),
                    )
                )
    return rows


def summary_csv_text(rows: list[SummaryStats]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["group", "snippet_seconds", "kind", "mean", "std", "n_pairs"])
    for row in rows:
        writer.writerow(
            [
                row.group,
                f"{row.snippet_seconds:g}",
                row.kind,
                repr(row.mean),
                repr(row.std),
                row.n_pairs,
            ]
        )
    return buf.getvalue()


def write_summary_csv(rows: list[SummaryStats], path: str | Path) -> None:
    _atomic_write_text(Path(path), summary_csv_text(rows))
