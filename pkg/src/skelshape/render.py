"""SVG figures and PNG overlays for inspection and reports.

Hand-rolled SVG: skeleton path polylines, tip markers, the picked axis,
correspondence lines between two records, dendrograms of merge lineages,
and alpha-blended raster masks.
"""

from __future__ import annotations

import html
from dataclasses import dataclass, field

import numpy as np
from PIL import Image

from .generalize import MergeNode
from .osbmatch import MatchResult
from .rts import RTS


@dataclass
class SvgCanvas:
    width: float
    height: float
    elements: list[str] = field(default_factory=list)

    def line(self, p0, p1, color="black", width=1.0, dash=None):
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.elements.append(
            f'<line x1="{p0[0]:.2f}" y1="{p0[1]:.2f}" x2="{p1[0]:.2f}" y2="{p1[1]:.2f}" '
            f'stroke="{color}" stroke-width="{width}"{d}/>'
        )

    def polyline(self, pts, color="black", width=1.0):
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        self.elements.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="{width}"/>'
        )

    def circle(self, center, r, color="black", fill="none"):
        self.elements.append(
            f'<circle cx="{center[0]:.2f}" cy="{center[1]:.2f}" r="{r:.2f}" '
            f'stroke="{color}" fill="{fill}"/>'
        )

    def text(self, pos, s, size=10, color="black"):
        self.elements.append(
            f'<text x="{pos[0]:.2f}" y="{pos[1]:.2f}" font-size="{size}" '
            f'fill="{color}" font-family="sans-serif">{html.escape(str(s))}</text>'
        )

    def to_string(self) -> str:
        body = "\n".join(self.elements)
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width:.0f}" '
            f'height="{self.height:.0f}" viewBox="0 0 {self.width:.0f} {self.height:.0f}">\n'
            f'<rect width="100%" height="100%" fill="white"/>\n{body}\n</svg>\n'
        )

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_string())


def draw_rts(canvas: SvgCanvas, rts: RTS, offset=(0.0, 0.0), label=""):
    ox, oy = offset
    sp = rts.spine
    canvas.line(
        (sp.crossing1[0] + ox, sp.crossing1[1] + oy),
        (sp.crossing2[0] + ox, sp.crossing2[1] + oy),
        color="green",
        width=2.0,
    )
    for k, f in enumerate(rts.features):
        pts = [(x + ox, y + oy) for x, y in f.path_xy]
        canvas.polyline(pts, color="#3366cc", width=1.2)
        ex, ey = f.endpoint_xy
        canvas.circle((ex + ox, ey + oy), 2.5, color="red", fill="red")
        canvas.text((ex + ox + 3, ey + oy - 3), k, size=9, color="#444444")
    rx, ry = rts.root_xy
    canvas.circle((rx + ox, ry + oy), 3.0, color="black", fill="black")
    if label:
        canvas.text((ox + 4, oy + 12), label, size=12)


def match_figure(x: RTS, y: RTS, result: MatchResult) -> SvgCanvas:
    """Two records side by side with their matched tips linked in red."""
    gap = 30.0
    w = x.width + y.width + gap
    h = max(x.height, y.height) + 40
    canvas = SvgCanvas(w, h)
    draw_rts(canvas, x, offset=(0, 20), label=x.source_id)
    draw_rts(canvas, y, offset=(x.width + gap, 20), label=y.source_id)
    for i, j in result.correspondence:
        ax, ay = x.features[i].endpoint_xy
        bx, by = y.features[j].endpoint_xy
        canvas.line((ax, ay + 20), (bx + x.width + gap, by + 20), color="red", width=0.8)
    canvas.text((4, h - 6), f"cost={result.global_cost:.4f}  pairs={list(result.correspondence)}", size=10)
    return canvas


def _tree_layout(node: MergeNode, depth, x_next, pos):
    if node.is_leaf:
        pos[id(node)] = (x_next[0], depth)
        x_next[0] += 1.0
        return
    for ch in node.children:
        _tree_layout(ch, depth + 1, x_next, pos)
    xs = [pos[id(ch)][0] for ch in node.children]
    pos[id(node)] = (sum(xs) / len(xs), depth)


def merge_tree_figure(tree: MergeNode, leaf_label=lambda s: s) -> SvgCanvas:
    """Dendrogram of the merge lineage, leaves at the bottom."""
    pos: dict[int, tuple[float, float]] = {}
    _tree_layout(tree, 0, [0.0], pos)
    n_leaves = len(tree.leaf_ids())
    depth = max(d for _x, d in pos.values()) if pos else 1
    cw, ch = 90.0, 50.0
    canvas = SvgCanvas(n_leaves * cw + 40, (depth + 1) * ch + 40)

    def xy(node: MergeNode):
        x, d = pos[id(node)]
        return (30 + x * cw, 20 + (depth - d) * ch)

    def walk(node: MergeNode):
        nx, ny = xy(node)
        if node.is_leaf:
            canvas.text((nx - 20, ny + 14), leaf_label(node.id), size=9)
            canvas.circle((nx, ny), 2.0, color="black", fill="black")
            return
        for ch_node in node.children:
            cx, cy = xy(ch_node)
            canvas.line((nx, ny), (cx, ny), color="black")
            canvas.line((cx, ny), (cx, cy), color="black")
            walk(ch_node)
        canvas.text((nx + 3, ny - 3), f"{node.cost:.3f}", size=8, color="#666666")
    walk(tree)
    return canvas


def mask_overlay_png(foreground: np.ndarray, mask: np.ndarray, path) -> None:
    """Instance in dark gray, mask in translucent purple, overlap blended."""
    h, w = foreground.shape
    img = np.zeros((h, w, 3), dtype=np.uint8)
    img[foreground] = (60, 60, 60)
    purple = np.array((150, 60, 200), dtype=np.float64)
    sel = np.asarray(mask, dtype=bool)
    img[sel] = (0.45 * img[sel] + 0.55 * purple).astype(np.uint8)
    Image.fromarray(img).save(path)


def retrieval_grid_figure(report, k: int = 6) -> SvgCanvas:
    """Per-query rows of the top-k retrieved ids; wrong-class hits in red."""
    rows = sorted(report.rankings)
    cw, ch = 120.0, 16.0
    canvas = SvgCanvas((k + 1) * cw + 20, len(rows) * ch + 30)
    canvas.text((10, 14), f"accuracy={report.accuracy:.3f} bullseye={report.bullseye:.3f}", size=11)
    for r, qid in enumerate(rows):
        y = 30 + r * ch
        canvas.text((10, y), qid, size=9)
        lab = report.labels[qid]
        for c, (gid, cost) in enumerate(report.rankings[qid][:k]):
            ok = report.labels[gid] == lab
            canvas.text(
                (10 + (c + 1) * cw, y),
                f"{gid} ({cost:.2f})",
                size=9,
                color="#2a7d2a" if ok else "#cc2222",
            )
    return canvas
