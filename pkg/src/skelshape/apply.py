"""Projecting a class prototype onto an instance.

Matching a prototype against an instance yields per-part correspondences;
drawing the prototype's radius profiles along the instance's own path
geometry produces an explanatory mask whose gaps and leftovers point at
occlusions, missing parts, and extra parts.  With at least two matched tips
a similarity transform maps the prototype exemplar's geometry into the
instance frame, which also lets missing parts be drawn back in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePairs, InsufficientCorrespondence
from .generalize import Grts
from .metric import MatchParams, endpoint_distance
from .osbmatch import MatchResult, match_shapes
from .rts import RTS


@dataclass(frozen=True)
class SimilarityTransform:
    scale: float
    rotation: float  # radians
    translation: tuple[float, float]

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        c, s = np.cos(self.rotation), np.sin(self.rotation)
        rot = np.array([[c, -s], [s, c]])
        return self.scale * pts @ rot.T + np.asarray(self.translation)


@dataclass(frozen=True)
class PartRecord:
    grts_index: int
    instance_index: int | None
    distance: float


@dataclass(frozen=True)
class CharacterMask:
    mask: np.ndarray  # bool, instance canvas
    records: tuple[PartRecord, ...]  # one per prototype part
    unmatched_instance: tuple[int, ...]
    unmatched_grts: tuple[int, ...]
    total_cost: float
    correspondence: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class CompletionResult:
    completed: np.ndarray  # bool, instance foreground plus rendered parts
    added: np.ndarray  # bool, just the rendered missing parts
    transform: SimilarityTransform
    unmatched_grts: tuple[int, ...]
    total_cost: float
    correspondence: tuple[tuple[int, int], ...]


def estimate_similarity_transform(pairs) -> SimilarityTransform:
    """Least-squares scale+rotation+translation mapping sources to targets.

    Exact for two distinct pairs; raises for fewer than two pairs or
    coincident (degenerate) sources.
    """
    pairs = list(pairs)
    if len(pairs) < 2:
        raise DegeneratePairs("need at least two point pairs")
    src = np.array([p[0] for p in pairs], dtype=float)
    dst = np.array([p[1] for p in pairs], dtype=float)
    sc = src.mean(axis=0)
    dc = dst.mean(axis=0)
    zs = (src - sc)[:, 0] + 1j * (src - sc)[:, 1]
    zd = (dst - dc)[:, 0] + 1j * (dst - dc)[:, 1]
    denom = float(np.sum(np.abs(zs) ** 2))
    if denom == 0.0:
        raise DegeneratePairs("source points are coincident")
    z = np.sum(np.conj(zs) * zd) / denom
    scale = float(np.abs(z))
    if scale == 0.0:
        raise DegeneratePairs("targets collapse to a point")
    theta = float(np.angle(z))
    c, s = np.cos(theta), np.sin(theta)
    t = dc - scale * np.array([c * sc[0] - s * sc[1], s * sc[0] + c * sc[1]])
    return SimilarityTransform(scale=scale, rotation=theta, translation=(float(t[0]), float(t[1])))


def _draw_disks(mask: np.ndarray, centers: np.ndarray, radii: np.ndarray) -> None:
    h, w = mask.shape
    for (x, y), r in zip(centers, radii):
        if r <= 0:
            continue
        r = float(r)
        r0 = max(0, int(np.floor(y - r)))
        r1 = min(h - 1, int(np.ceil(y + r)))
        c0 = max(0, int(np.floor(x - r)))
        c1 = min(w - 1, int(np.ceil(x + r)))
        if r0 > r1 or c0 > c1:
            continue
        yy, xx = np.mgrid[r0 : r1 + 1, c0 : c1 + 1]
        mask[r0 : r1 + 1, c0 : c1 + 1] |= (yy - y) ** 2 + (xx - x) ** 2 <= r * r


def _endpoint_pairs(g: Grts, x: RTS, corr) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    """Exemplar-frame tip coordinates matched to instance tips, root included."""
    pairs = [
        (g.features[gi].endpoint_xy, x.features[xi].endpoint_xy) for gi, xi in corr
    ]
    pairs.append((g.exemplar.root_xy, x.root_xy))
    return pairs


def apply_character(
    g: Grts, x: RTS, params: MatchParams | None = None, rotation_search: bool = True
) -> CharacterMask:
    """Render the prototype's parts over the instance's geometry.

    Matched parts draw the prototype's radius profile (scaled by the
    instance's maximal radius) as disks along the instance's resampled path;
    when the prototype part implies a longer path than the instance offers,
    the exemplar path's remainder is mapped through a fitted similarity
    transform so the mask keeps extending past the missing region.
    """
    params = params or MatchParams()
    res: MatchResult = match_shapes(g, x, params, rotation_search)
    corr = res.correspondence
    matched_g = {gi for gi, _ in corr}
    matched_x = {xi for _, xi in corr}

    transform = None
    if len(corr) >= 2:
        try:
            transform = estimate_similarity_transform(_endpoint_pairs(g, x, corr))
        except DegeneratePairs:
            transform = None

    mask = np.zeros((x.height, x.width), dtype=bool)
    records = []
    for gi in range(g.n_endpoints):
        xi = next((b for a, b in corr if a == gi), None)
        if xi is None:
            records.append(PartRecord(grts_index=gi, instance_index=None, distance=float("inf")))
            continue
        gf, xf = g.features[gi], x.features[xi]
        radii_px = gf.radii * x.rstar
        _draw_disks(mask, xf.path_xy, radii_px)
        implied = gf.length * x.total_length
        actual = xf.length * x.total_length
        if transform is not None and implied > actual * 1.1:
            # continue along the exemplar's path beyond the instance's reach
            start = int(np.clip(round(len(gf.radii) * actual / implied), 0, len(gf.radii) - 1))
            tail_xy = transform.apply(gf.path_xy[start:])
            _draw_disks(mask, tail_xy, radii_px[start:])
        records.append(
            PartRecord(grts_index=gi, instance_index=xi, distance=endpoint_distance(gf, xf, params))
        )

    return CharacterMask(
        mask=mask,
        records=tuple(records),
        unmatched_instance=tuple(i for i in range(x.n_endpoints) if i not in matched_x),
        unmatched_grts=tuple(i for i in range(g.n_endpoints) if i not in matched_g),
        total_cost=res.global_cost,
        correspondence=corr,
    )


def complete_shape(
    g: Grts,
    partial: RTS,
    foreground: np.ndarray,
    params: MatchParams | None = None,
    rotation_search: bool = True,
) -> CompletionResult:
    """Draw the prototype parts the partial instance is missing.

    Needs at least two matched tip pairs; those (plus the roots) fit the
    similarity transform from the exemplar frame to the image, and every
    unmatched prototype part is rendered through it at prototype radii.
    """
    params = params or MatchParams()
    res = match_shapes(g, partial, params, rotation_search)
    corr = res.correspondence
    if len(corr) < 2:
        raise InsufficientCorrespondence(
            f"only {len(corr)} matched tip pair(s); need at least 2"
        )
    transform = estimate_similarity_transform(_endpoint_pairs(g, partial, corr))

    matched_g = {gi for gi, _ in corr}
    missing = tuple(i for i in range(g.n_endpoints) if i not in matched_g)
    added = np.zeros_like(foreground, dtype=bool)
    ex_rstar = g.exemplar.rstar
    for gi in missing:
        gf = g.features[gi]
        centers = transform.apply(gf.path_xy)
        radii_px = gf.radii * ex_rstar * transform.scale
        _draw_disks(added, centers, radii_px)

    completed = np.asarray(foreground, dtype=bool) | added
    return CompletionResult(
        completed=completed,
        added=added,
        transform=transform,
        unmatched_grts=missing,
        total_cost=res.global_cost,
        correspondence=corr,
    )
