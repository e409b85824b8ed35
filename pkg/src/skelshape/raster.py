"""Silhouette ingestion, chamfer distance transform, and skeleton extraction.

The distance transform uses the integer 3-4 chamfer mask scaled by 1/3, so a
pixel's value approximates the radius of the largest inscribed disk centered
there.  Skeletons are ridges of that field: centers of maximal disks are kept
as anchors and everything else is thinned away without changing topology.
"""

from __future__ import annotations

import heapq
import io
from collections import deque
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, DegenerateSkeleton, EmptyShape

ORTHO_STEP = 3
DIAG_STEP = 4
_BIG = 1 << 40

# (dr, dc) ring in clockwise order starting east; used by the simple-point table.
NEIGHBORS8 = ((0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1))
NEIGHBORS4 = ((0, 1), (1, 0), (0, -1), (-1, 0))


@dataclass(frozen=True)
class BinaryShape:
    """A single-component silhouette with its closed outer contour.

    ``contour`` is an (K, 2) array of (x, y) pixel coordinates ordered
    counterclockwise (standard orientation, y axis up; equivalently negative
    shoelace area in row-down image coordinates).
    """

    width: int
    height: int
    foreground: np.ndarray
    contour: np.ndarray
    source_id: str = ""

    @property
    def pixel_count(self) -> int:
        return int(self.foreground.sum())


@dataclass(frozen=True)
class DistanceField:
    """Chamfer 3-4 distance to the nearest background pixel, divided by 3.

    ``thirds`` holds the raw integer chamfer values (3x the field) so exact
    comparisons never touch floats.  The image border counts as background.
    """

    values: np.ndarray
    thirds: np.ndarray

    @property
    def foreground(self) -> np.ndarray:
        return self.thirds > 0


@dataclass(frozen=True)
class Skeleton:
    """Thin, 8-connected ridge of a distance field.

    ``radius`` is the field value at each skeleton pixel (0 elsewhere).
    ``canon_rot`` records the quarter-turn count that maps this grid into the
    orientation-canonical frame; coordinate tie-breaks use that frame so the
    skeleton is identical (as a point set) for all four grid rotations of the
    input.
    """

    mask: np.ndarray
    radius: np.ndarray
    thirds: np.ndarray
    canon_rot: int

    def points(self) -> np.ndarray:
        """Skeleton pixels as an (K, 2) array of (row, col), row-major order."""
        return np.argwhere(self.mask)

    @property
    def max_radius(self) -> float:
        return float(self.radius.max())

    def canon_keys(self) -> np.ndarray:
        """(H, W, 2) array mapping each pixel to its canonical-frame (row, col)."""
        h, w = self.mask.shape
        if self.canon_rot % 2:
            ch, cw = w, h
        else:
            ch, cw = h, w
        ai, aj = np.indices((ch, cw))
        return np.stack(
            [np.rot90(ai, -self.canon_rot), np.rot90(aj, -self.canon_rot)], axis=-1
        )


def neighbor_count(mask: np.ndarray) -> np.ndarray:
    """Number of true 8-neighbors for every pixel of a boolean grid."""
    m = mask.astype(np.int8)
    p = np.pad(m, 1)
    out = np.zeros_like(m, dtype=np.int8)
    for dr, dc in NEIGHBORS8:
        out += p[1 + dr : 1 + dr + m.shape[0], 1 + dc : 1 + dc + m.shape[1]]
    return out


def _simple_point_table() -> np.ndarray:
    """Truth table: neighborhood bitmask -> pixel deletable without topology change.

    Foreground uses 8-connectivity, background 4-connectivity.  A pixel is
    simple iff its foreground ring forms exactly one 8-component and exactly
    one background 4-component touches an orthogonal neighbor.
    """
    table = np.zeros(256, dtype=bool)
    for code in range(256):
        fg = [i for i in range(8) if code >> i & 1]
        bg = [i for i in range(8) if not code >> i & 1]
        if not fg or not bg:
            continue

        def components(cells: list[int], diag: bool) -> list[set[int]]:
            comps: list[set[int]] = []
            seen: set[int] = set()
            for c in cells:
                if c in seen:
                    continue
                comp = {c}
                stack = [c]
                while stack:
                    a = stack.pop()
                    for b in cells:
                        if b in comp:
                            continue
                        da = NEIGHBORS8[a]
                        db = NEIGHBORS8[b]
                        dr, dc = abs(da[0] - db[0]), abs(da[1] - db[1])
                        near = max(dr, dc) == 1 if diag else dr + dc == 1
                        if near:
                            comp.add(b)
                            stack.append(b)
                seen |= comp
                comps.append(comp)
            return comps

        fg_comps = components(fg, diag=True)
        bg_comps = components(bg, diag=False)
        ortho = {0, 2, 4, 6}
        bg_touching = [c for c in bg_comps if c & ortho]
        table[code] = len(fg_comps) == 1 and len(bg_touching) == 1
    return table


_SIMPLE = _simple_point_table()


def _neighborhood_code(mask: np.ndarray, r: int, c: int) -> int:
    h, w = mask.shape
    code = 0
    for i, (dr, dc) in enumerate(NEIGHBORS8):
        rr, cc = r + dr, c + dc
        if 0 <= rr < h and 0 <= cc < w and mask[rr, cc]:
            code |= 1 << i
    return code


def _largest_component(mask: np.ndarray) -> np.ndarray:
    """Keep only the largest 8-connected foreground component."""
    h, w = mask.shape
    seen = np.zeros_like(mask, dtype=bool)
    best: list[tuple[int, int]] = []
    for r0, c0 in np.argwhere(mask):
        if seen[r0, c0]:
            continue
        comp = [(int(r0), int(c0))]
        seen[r0, c0] = True
        queue = deque(comp)
        while queue:
            r, c = queue.popleft()
            for dr, dc in NEIGHBORS8:
                rr, cc = r + dr, c + dc
                if 0 <= rr < h and 0 <= cc < w and mask[rr, cc] and not seen[rr, cc]:
                    seen[rr, cc] = True
                    comp.append((rr, cc))
                    queue.append((rr, cc))
        if len(comp) > len(best):
            best = comp
    out = np.zeros_like(mask)
    rows, cols = zip(*best)
    out[list(rows), list(cols)] = True
    return out


def trace_contour(mask: np.ndarray) -> np.ndarray:
    """Moore-neighbor trace of the outer boundary, returned as (K, 2) (x, y).

    Orientation is normalized to counterclockwise (y axis up).
    """
    start = tuple(int(v) for v in np.argwhere(mask)[0])
    h, w = mask.shape

    def fg(r: int, c: int) -> bool:
        return 0 <= r < h and 0 <= c < w and mask[r, c]

    if not any(fg(start[0] + dr, start[1] + dc) for dr, dc in NEIGHBORS8):
        return np.array([[start[1], start[0]]], dtype=np.int64)

    # Clockwise scan in image coordinates; start looking from the west side
    # (the scan reached ``start`` from empty rows above / columns left of it).
    ring = NEIGHBORS8
    path = [start]
    cur = start
    back = 4  # index of (0, -1) in the ring
    seen_states = {(cur, back)}
    while True:
        for k in range(8):
            d = (back + 1 + k) % 8
            rr, cc = cur[0] + ring[d][0], cur[1] + ring[d][1]
            if fg(rr, cc):
                back = (d + 4) % 8
                cur = (rr, cc)
                break
        state = (cur, back)
        if state in seen_states:
            break
        seen_states.add(state)
        path.append(cur)

    xy = np.array([[c, r] for r, c in path], dtype=np.int64)
    if len(xy) >= 3:
        x, y = xy[:, 0], xy[:, 1]
        area2 = np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        if area2 > 0:  # positive shoelace in row-down coords = visually clockwise
            xy = xy[::-1].copy()
    return xy


def load_silhouette(data: bytes, threshold: int = 128, source_id: str = "") -> BinaryShape:
    """Decode an image (PGM/PNG/BMP/...), binarize, and keep the main blob.

    Pixels with gray level >= ``threshold`` become foreground; only the
    largest 8-connected component survives.
    """
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise DecodeError(f"cannot decode image: {exc}") from exc
    gray = np.asarray(img.convert("L"))
    mask = gray >= threshold
    if not mask.any():
        raise EmptyShape(f"no foreground pixel at threshold {threshold}")
    mask = _largest_component(mask)
    contour = trace_contour(mask)
    h, w = mask.shape
    return BinaryShape(width=w, height=h, foreground=mask, contour=contour, source_id=source_id)


def shape_from_mask(mask: np.ndarray, source_id: str = "") -> BinaryShape:
    """Build a BinaryShape directly from a boolean array (in-memory pipelines)."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise EmptyShape("mask has no foreground pixel")
    mask = _largest_component(mask)
    h, w = mask.shape
    return BinaryShape(width=w, height=h, foreground=mask, contour=trace_contour(mask), source_id=source_id)


def distance_transform(shape: BinaryShape) -> DistanceField:
    """Two-pass 3-4 chamfer transform; the image border counts as background."""
    fg = shape.foreground
    h, w = fg.shape
    t = np.zeros((h + 2, w + 2), dtype=np.int64)
    t[1 : h + 1, 1 : w + 1] = np.where(fg, _BIG, 0)

    cols = np.arange(w + 2, dtype=np.int64)
    ramp = ORTHO_STEP * cols
    for i in range(1, h + 1):
        up = t[i - 1]
        cand = np.minimum(t[i, 1 : w + 1], up[1 : w + 1] + ORTHO_STEP)
        cand = np.minimum(cand, up[: w] + DIAG_STEP)
        cand = np.minimum(cand, up[2 : w + 2] + DIAG_STEP)
        row = t[i].copy()
        row[1 : w + 1] = cand
        # left-to-right: min over k <= j of row[k] + 3*(j-k)
        t[i] = np.minimum.accumulate(row - ramp) + ramp
    for i in range(h, 0, -1):
        down = t[i + 1]
        cand = np.minimum(t[i, 1 : w + 1], down[1 : w + 1] + ORTHO_STEP)
        cand = np.minimum(cand, down[: w] + DIAG_STEP)
        cand = np.minimum(cand, down[2 : w + 2] + DIAG_STEP)
        row = t[i].copy()
        row[1 : w + 1] = cand
        rev = row[::-1]
        t[i] = (np.minimum.accumulate(rev - ramp) + ramp)[::-1]

    thirds = t[1 : h + 1, 1 : w + 1]
    return DistanceField(values=thirds / 3.0, thirds=thirds)


def _canonical_rotation(mask: np.ndarray) -> int:
    """Quarter-turn count whose rotation of ``mask`` is lexicographically least.

    Used to fix a processing frame that is identical for all four grid
    rotations of the same shape.
    """
    best_rot = 0
    best_key = None
    for rot in range(4):
        m = np.rot90(mask, rot)
        key = (m.shape, m.tobytes())
        if best_key is None or key < best_key:
            best_key = key
            best_rot = rot
    return best_rot


def _squared_edt(fg: np.ndarray) -> np.ndarray:
    """Exact squared Euclidean distance to background (border = background).

    Separable two-stage transform: per-column nearest background, then a
    per-row lower envelope of parabolas.  Only used to order the grassfire
    erosion; reported radii stay on the chamfer field.
    """
    h, w = fg.shape
    # per-column distance to nearest background row, with virtual rows outside
    g = np.where(fg, 1 << 20, 0).astype(np.int64)
    g = np.vstack([np.zeros(w, dtype=np.int64), g, np.zeros(w, dtype=np.int64)])
    for i in range(1, h + 2):
        g[i] = np.minimum(g[i], g[i - 1] + 1)
    for i in range(h, -1, -1):
        g[i] = np.minimum(g[i], g[i + 1] + 1)
    fsq = g[1 : h + 1] ** 2

    out = np.empty((h, w), dtype=np.int64)
    for i in range(h):
        f = np.concatenate(([0], fsq[i], [0]))  # virtual background columns
        n = w + 2
        v = np.zeros(n, dtype=np.int64)
        z = np.empty(n + 1)
        z[0], z[1] = -np.inf, np.inf
        k = 0
        for q in range(1, n):
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2 * q - 2 * v[k])
            while s <= z[k]:
                k -= 1
                s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2 * q - 2 * v[k])
            k += 1
            v[k] = q
            z[k] = s
            z[k + 1] = np.inf
        k = 0
        for q in range(1, w + 1):
            while z[k + 1] < q:
                k += 1
            out[i, q - 1] = (q - v[k]) ** 2 + f[v[k]]
    return out


def _ridge_anchors(dist: np.ndarray, fg: np.ndarray) -> np.ndarray:
    """Strict local maxima of the erosion-order field: every 8-neighbor is smaller.

    Only true peaks are pinned; ridge runs, plateaus, and branch tips are
    kept by the distance-ordered, topology- and endpoint-preserving deletion
    instead, which cannot disconnect them from the peaks.
    """
    h, w = dist.shape
    p = np.full((h + 2, w + 2), -1, dtype=np.int64)
    p[1 : h + 1, 1 : w + 1] = np.where(fg, dist, -1)
    anchors = fg.copy()
    for dr, dc in NEIGHBORS8:
        nb = p[1 + dr : 1 + dr + h, 1 + dc : 1 + dc + w]
        anchors &= nb < dist
    return anchors


def extract_skeleton(field: DistanceField) -> Skeleton:
    """Ridge of the distance field: disk-center anchors plus connectivity glue.

    Deletion is topology preserving (simple points only), proceeds from the
    shallowest pixels outward, and runs in a rotation-canonical frame so grid
    rotations of the input yield the rotated skeleton exactly.
    """
    if not (field.thirds > 0).any():
        raise DegenerateSkeleton("distance field has no foreground")

    rot = _canonical_rotation(field.thirds > 0)
    thirds = np.rot90(field.thirds, rot).copy()
    h, w = thirds.shape
    mask = thirds > 0
    order = _squared_edt(mask)
    anchors = _ridge_anchors(order, mask)
    # shallow boundary extremities erode; the depth floor scales with the shape
    # but never exceeds it (a 1-pixel-thin shape is all tip)
    rstar_px = float(thirds.max()) / ORTHO_STEP
    freeze_floor = min(max(4.0, (0.08 * rstar_px) ** 2), max(1.0, 0.5 * rstar_px**2))

    heap: list[tuple[int, int, int]] = [
        (int(order[r, c]), int(r), int(c))
        for r, c in np.argwhere(mask & ~anchors)
    ]
    heapq.heapify(heap)
    while heap:
        d2, r, c = heapq.heappop(heap)
        if not mask[r, c] or anchors[r, c]:
            continue
        code = _neighborhood_code(mask, r, c)
        if d2 >= freeze_floor and bin(code).count("1") <= 1:
            # a ridge line has formed and is eating itself from its tip:
            # freeze it so branches keep reaching into protrusions (shallow
            # boundary extremities, d2 < 4, erode normally)
            continue
        if not _SIMPLE[code]:
            continue
        mask[r, c] = False
        for dr, dc in NEIGHBORS8:
            rr, cc = r + dr, c + dc
            if 0 <= rr < h and 0 <= cc < w and mask[rr, cc] and not anchors[rr, cc]:
                heapq.heappush(heap, (int(order[rr, cc]), rr, cc))

    _enforce_thin(mask, order)
    _trim_debris_spurs(mask, thirds / ORTHO_STEP)
    if not mask.any():
        raise DegenerateSkeleton("thinning removed every pixel")

    mask = np.rot90(mask, -rot).copy()
    radius = np.where(mask, field.values, 0.0)
    sk_thirds = np.where(mask, field.thirds, 0)
    return Skeleton(mask=mask, radius=radius, thirds=sk_thirds, canon_rot=rot)


def _enforce_thin(mask: np.ndarray, thirds: np.ndarray) -> None:
    """Delete simple pixels until no 2x2 block is entirely skeleton."""
    while True:
        blocks = mask[:-1, :-1] & mask[1:, :-1] & mask[:-1, 1:] & mask[1:, 1:]
        if not blocks.any():
            return
        cells: set[tuple[int, int]] = set()
        for r, c in np.argwhere(blocks):
            cells.update({(r, c), (r + 1, c), (r, c + 1), (r + 1, c + 1)})
        order = sorted(cells, key=lambda p: (int(thirds[p]), p[0], p[1]))
        progress = False
        for r, c in order:
            if not mask[r, c]:
                continue
            in_block = any(
                mask[rr, cc] and mask[rr, c] and mask[r, cc]
                for rr in (r - 1, r + 1)
                for cc in (c - 1, c + 1)
                if 0 <= rr < mask.shape[0] and 0 <= cc < mask.shape[1]
            )
            if in_block and _SIMPLE[_neighborhood_code(mask, r, c)]:
                mask[r, c] = False
                progress = True
        if not progress:
            return


DEBRIS_REACH = 1.0  # a real part's tip escapes the junction's own maximal disk


def _trim_debris_spurs(mask: np.ndarray, radius: np.ndarray) -> None:
    """Drop endpoint spurs that are erosion debris rather than shape parts.

    A spur whose tip stays inside the maximal disk of the junction it hangs
    off (notch corners between touching parts, plateau stubs) is a
    wave-collision artifact; the test is relative to the junction radius, so
    the rule is scale free.
    """
    h, w = mask.shape
    while True:
        deg = neighbor_count(mask)
        removed = []
        for r0, c0 in np.argwhere(mask & (deg == 1)):
            tip = (int(r0), int(c0))
            chain = [tip]
            prev = None
            cur = tip
            junction = None
            while True:
                nxt = None
                for dr, dc in NEIGHBORS8:
                    rr, cc = cur[0] + dr, cur[1] + dc
                    if 0 <= rr < h and 0 <= cc < w and mask[rr, cc] and (rr, cc) != prev:
                        nxt = (rr, cc)
                        break
                if nxt is None or deg[nxt] == 1:
                    break
                if deg[nxt] >= 3:
                    junction = nxt
                    break
                chain.append(nxt)
                prev, cur = cur, nxt
            if junction is None:
                continue
            junc_r = float(radius[junction])
            reach = np.hypot(tip[0] - junction[0], tip[1] - junction[1])
            if reach <= DEBRIS_REACH * junc_r:
                removed.extend(chain)
        if not removed:
            return
        for r, c in removed:
            mask[r, c] = False


def prune_skeleton(skel: Skeleton, significance: float = 0.08) -> Skeleton:
    """Remove insignificant spur branches.

    A spur (endpoint-to-junction chain) is deleted when both its tip radius
    and its arc length fall below ``significance * max_radius``.  All
    qualifying spurs of one round are removed together, and rounds repeat to a
    fixed point, so the operation is deterministic and idempotent.
    """
    mask = skel.mask.copy()
    limit = significance * skel.max_radius
    while True:
        deg = neighbor_count(mask)
        removed: list[tuple[int, int]] = []
        for r0, c0 in np.argwhere(mask & (deg == 1)):
            tip = (int(r0), int(c0))
            chain = [tip]
            prev = None
            cur = tip
            length = 0.0
            reached_junction = False
            while True:
                nxt = None
                for dr, dc in NEIGHBORS8:
                    rr, cc = cur[0] + dr, cur[1] + dc
                    if (
                        0 <= rr < mask.shape[0]
                        and 0 <= cc < mask.shape[1]
                        and mask[rr, cc]
                        and (rr, cc) != prev
                    ):
                        nxt = (rr, cc)
                        break
                if nxt is None:
                    break
                length += np.hypot(nxt[0] - cur[0], nxt[1] - cur[1])
                if deg[nxt] >= 3:
                    reached_junction = True
                    break
                if deg[nxt] == 1:
                    break  # pure path, not a spur
                chain.append(nxt)
                prev, cur = cur, nxt
            if reached_junction and skel.radius[tip] < limit and length < limit:
                removed.extend(chain)
        if not removed:
            break
        for r, c in removed:
            mask[r, c] = False
    if not mask.any():
        raise DegenerateSkeleton("pruning removed every pixel")
    return Skeleton(
        mask=mask,
        radius=np.where(mask, skel.radius, 0.0),
        thirds=np.where(mask, skel.thirds, 0),
        canon_rot=skel.canon_rot,
    )
