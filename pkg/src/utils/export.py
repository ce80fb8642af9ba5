"""成果物の書き出し

結果JSON、図データ（点と矢印）のCSV/SVG、領域分割の線分のCSV/SVG
"""

import csv
import hashlib
import io
import json
import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np

from src.potential.pwl import Bounds, Segment

logger = logging.getLogger(__name__)

SVG_SIZE = 480
SVG_MARGIN = 40
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"JSONに変換できません: {type(value).__name__}")


def to_json(data: Any) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2, default=_default)


def write_json(path: Path, data: Any) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(to_json(data))
        f.write("\n")
    logger.debug(f"JSON出力: {path}")


def sha256_of_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def figure_csv(figure: dict[str, Any]) -> str:
    """点と矢印の CSV（kind, label, x, y, dx, dy）"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["kind", "label", "x", "y", "dx", "dy"])
    for label, (x, y) in figure["points"].items():
        writer.writerow(["point", label, repr(x), repr(y), "", ""])
    for arrow in figure["arrows"]:
        (x, y), (dx, dy) = arrow["anchor"], arrow["vector"]
        writer.writerow(["arrow", arrow["label"], repr(x), repr(y), repr(dx), repr(dy)])
    return buffer.getvalue()


def write_figure_csv(path: Path, figure: dict[str, Any]) -> None:
    path.write_text(figure_csv(figure), encoding="utf-8")
    logger.debug(f"図データCSV出力: {path}")


class _Viewport:
    """ワールド座標から SVG 座標への変換（y軸反転、縦横比保持）"""

    def __init__(self, xs: Sequence[float], ys: Sequence[float]):
        self.x_min, x_max = min(xs), max(xs)
        self.y_min, y_max = min(ys), max(ys)
        span = max(x_max - self.x_min, y_max - self.y_min, 1e-12)
        self.scale = (SVG_SIZE - 2 * SVG_MARGIN) / span
        self.y_max = y_max

    def __call__(self, x: float, y: float) -> tuple[float, float]:
        return (
            SVG_MARGIN + (x - self.x_min) * self.scale,
            SVG_MARGIN + (self.y_max - y) * self.scale,
        )


def _svg_document(body: list[str]) -> str:
    header = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">'
    )
    marker = (
        '<defs><marker id="head" markerWidth="8" markerHeight="8" refX="7" refY="4" '
        'orient="auto"><path d="M0,0 L8,4 L0,8 z" fill="#444"/></marker></defs>'
    )
    background = '<rect width="100%" height="100%" fill="white"/>'
    return "\n".join([header, marker, background, *body, "</svg>"]) + "\n"


def figure_svg(figure: dict[str, Any]) -> str:
    """点と矢印の自己完結SVG"""
    xs: list[float] = []
    ys: list[float] = []
    for x, y in figure["points"].values():
        xs.append(x)
        ys.append(y)
    for arrow in figure["arrows"]:
        (x, y), (dx, dy) = arrow["anchor"], arrow["vector"]
        xs += [x, x + dx]
        ys += [y, y + dy]
    view = _Viewport(xs, ys)

    body: list[str] = []
    for arrow in figure["arrows"]:
        (x, y), (dx, dy) = arrow["anchor"], arrow["vector"]
        x1, y1 = view(x, y)
        x2, y2 = view(x + dx, y + dy)
        body.append(
            f'<line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" '
            f'stroke="#444" stroke-width="1.5" marker-end="url(#head)"/>'
        )
    for label, (x, y) in figure["points"].items():
        px, py = view(x, y)
        body.append(f'<circle cx="{px:.3f}" cy="{py:.3f}" r="3" fill="black"/>')
        body.append(f'<text x="{px + 5:.3f}" y="{py - 5:.3f}" font-size="12">{label}</text>')
    return _svg_document(body)


def write_figure_svg(path: Path, figure: dict[str, Any]) -> None:
    path.write_text(figure_svg(figure), encoding="utf-8")
    logger.debug(f"図データSVG出力: {path}")


def segments_csv(segments: Sequence[Segment]) -> str:
    """領域境界の線分の CSV（region_i, region_j, x0, y0, x1, y1、番号は1始まり）"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["region_i", "region_j", "x0", "y0", "x1", "y1"])
    for i, j, (x0, y0), (x1, y1) in segments:
        writer.writerow([i + 1, j + 1, repr(x0), repr(y0), repr(x1), repr(y1)])
    return buffer.getvalue()


def write_segments_csv(path: Path, segments: Sequence[Segment]) -> None:
    path.write_text(segments_csv(segments), encoding="utf-8")
    logger.debug(f"領域境界CSV出力: {path} ({len(segments)}本)")


def tessellation_svg(
    segments: Sequence[Segment],
    anchors: np.ndarray,
    bounds: Bounds,
) -> str:
    """領域境界の線分と接点 Z_i の自己完結SVG"""
    x_min, x_max, y_min, y_max = bounds
    view = _Viewport([x_min, x_max], [y_min, y_max])
    body: list[str] = []
    for i, j, start, end in segments:
        x1, y1 = view(*start)
        x2, y2 = view(*end)
        body.append(
            f'<line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" '
            f'stroke="#333" stroke-width="1"><title>R{i + 1}|R{j + 1}</title></line>'
        )
    for k, (x, y) in enumerate(anchors):
        px, py = view(float(x), float(y))
        color = _COLORS[k % len(_COLORS)]
        body.append(f'<circle cx="{px:.3f}" cy="{py:.3f}" r="3.5" fill="{color}"/>')
        body.append(f'<text x="{px + 5:.3f}" y="{py - 5:.3f}" font-size="12">Z{k + 1}</text>')
    return _svg_document(body)


def write_tessellation_svg(
    path: Path,
    segments: Sequence[Segment],
    anchors: np.ndarray,
    bounds: Bounds,
) -> None:
    path.write_text(tessellation_svg(segments, anchors, bounds), encoding="utf-8")
    logger.debug(f"領域分割SVG出力: {path}")


def write_grid_csv(path: Path, samples: np.ndarray) -> None:
    """V と ∇V の格子サンプルを CSV（x, y, V, dV_dx, dV_dy）に書き出し"""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["x", "y", "V", "dV_dx", "dV_dy"])
        for row in samples:
            writer.writerow([repr(float(v)) for v in row])
    logger.debug(f"格子サンプルCSV出力: {path} ({len(samples)}行)")
