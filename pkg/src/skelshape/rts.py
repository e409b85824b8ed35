"""Fixed-length path features, the spine-like axis, and the assembled record.

Each root-to-tip path becomes 50 radius samples plus its normalized mass,
normalized length, and a spatial value: the absolute cosine between the
root-to-tip vector and a stable root-anchored axis picked by branch scoring.
The per-tip features, ordered along the contour, form the shape's record.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSkeleton, DegenerateVector, NoCandidate
from .raster import BinaryShape, Skeleton, distance_transform, extract_skeleton, prune_skeleton
from .skeltree import (
    Branch,
    EndPath,
    SkeletonGraph,
    SkeletonTree,
    _rooted_graph,
    build_skeleton_graph,
    build_skeleton_tree,
    classify_points,
)

SAMPLES = 50
DENSE_TAIL_FRACTION = 0.2  # last stretch of each path gets half the samples


@dataclass(frozen=True)
class SpineParams:
    """Branch-scoring constants; fixed, not tuned per dataset."""

    alpha: float = 0.65
    beta: float = 0.3
    threshold: float = 0.224


@dataclass(frozen=True)
class PipelineConfig:
    threshold: int = 128
    prune_significance: float = 0.08
    quantization: str = "uneven"  # uneven | uniform
    spine: SpineParams = field(default_factory=SpineParams)
    # silhouettes are resampled so sqrt(foreground area) matches this before
    # skeletonization; discrete structure decisions then behave identically
    # across input resolutions (None disables)
    norm_sqrt_area: float | None = 140.0


@dataclass(frozen=True)
class BranchScore:
    ml: float  # alpha * mass_frac + (1 - alpha) * length_frac
    dense: float  # mass_frac / length_frac
    smooth: float  # population std of the branch's normalized radii
    combined: float


@dataclass(frozen=True)
class SpineAxis:
    crossing1: tuple[float, float]  # (x, y) of the root
    crossing2: tuple[float, float]  # (x, y) of the picked node
    vector: tuple[float, float]  # crossing2 - crossing1, sign-free use only

    def as_array(self) -> np.ndarray:
        return np.array(self.vector, dtype=float)


@dataclass(frozen=True)
class EndFeature:
    """One tip's record: radius profile, mass/length shares, axis alignment."""

    radii: np.ndarray  # 50 normalized radii in (0, 1]
    mass: float  # path mass / skeleton mass
    length: float  # path length / summed branch length
    axis_value: float  # |cos| to the spine axis, in [0, 1]
    endpoint_xy: tuple[float, float]
    path_xy: np.ndarray  # (50, 2) resampled path coordinates (x, y)

    def component_vector(self) -> np.ndarray:
        return np.concatenate([self.radii, [self.mass, self.length, self.axis_value]])


@dataclass(frozen=True)
class RTS:
    features: tuple[EndFeature, ...]  # contour order, anchored at the axis-aligned tip
    spine: SpineAxis
    rstar: float
    total_mass: float
    total_length: float
    width: int
    height: int
    source_id: str = ""
    root_xy: tuple[float, float] = (0.0, 0.0)

    @property
    def n_endpoints(self) -> int:
        return len(self.features)


def _arc_positions(points: np.ndarray) -> np.ndarray:
    diffs = np.diff(points.astype(float), axis=0)
    steps = np.hypot(diffs[:, 0], diffs[:, 1])
    return np.concatenate([[0.0], np.cumsum(steps)])


def _sample_fractions(mode: str) -> np.ndarray:
    if mode == "uniform":
        return np.linspace(0.0, 1.0, SAMPLES)
    if mode == "uneven":
        head = np.linspace(0.0, 1.0 - DENSE_TAIL_FRACTION, SAMPLES // 2)
        tail = np.linspace(1.0 - DENSE_TAIL_FRACTION, 1.0, SAMPLES - SAMPLES // 2)
        return np.concatenate([head, tail])
    raise ValueError(f"unknown quantization mode: {mode}")


def _resample(path: EndPath, fractions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Radii and (x, y) coordinates interpolated at arc-length fractions."""
    arcs = _arc_positions(path.points)
    total = arcs[-1]
    if total <= 0:
        radii = np.full(len(fractions), path.radii[0], dtype=float)
        xy = np.repeat([[path.points[0][1], path.points[0][0]]], len(fractions), axis=0)
        return radii, xy.astype(float)
    at = fractions * total
    radii = np.interp(at, arcs, path.radii)
    xs = np.interp(at, arcs, path.points[:, 1].astype(float))
    ys = np.interp(at, arcs, path.points[:, 0].astype(float))
    return radii, np.stack([xs, ys], axis=1)


def quantize_uniform(path: EndPath) -> np.ndarray:
    """50 radius samples at equal arc-length spacing (sample k at fraction k/49)."""
    radii, _ = _resample(path, _sample_fractions("uniform"))
    return radii


def quantize_uneven(path: EndPath) -> np.ndarray:
    """25 samples over the first 80% of arc length, 25 over the tip-side 20%."""
    radii, _ = _resample(path, _sample_fractions("uneven"))
    return radii


def path_mass(path: EndPath) -> float:
    """Sum of the maximal-disk radii over the path's skeleton points."""
    return float(np.sum(path.radii))


def normalize_features(
    tree: SkeletonTree, graph: SkeletonGraph, quantization: str = "uneven"
) -> list[tuple[np.ndarray, float, float]]:
    """Per path: (normalized radius samples, mass share, length share).

    Radii divide by the skeleton's maximal radius, masses by the whole
    skeleton's mass, lengths by the summed branch length, so the triple is
    scale free.
    """
    rstar = graph.skeleton.max_radius
    total_mass = graph.total_mass()
    total_length = graph.total_length()
    fractions = _sample_fractions(quantization)
    out = []
    for ep in tree.end_paths:
        radii, _ = _resample(ep, fractions)
        out.append((radii / rstar, path_mass(ep) / total_mass, ep.length / total_length))
    return out


def _branch_scores(
    branches: tuple[Branch, ...],
    rstar: float,
    total_mass: float,
    total_length: float,
    params: SpineParams,
) -> dict[int, BranchScore]:
    """Score every branch: mass/length share, density, smoothness (Eq-style).

    The tip-reaching branches miss density and smoothness by construction, so
    they receive a constant computed from the junction-to-junction densities;
    the factor 10 keeps the two combined terms on the same order.
    """
    a, b = params.alpha, params.beta
    ml: dict[int, float] = {}
    dense: dict[int, float] = {}
    smooth: dict[int, float] = {}
    for br in branches:
        mhat = br.mass / total_mass
        lhat = br.length / total_length if total_length > 0 else 0.0
        ml[br.id] = a * mhat + (1.0 - a) * lhat
        if br.kind == "jp2jp":
            dense[br.id] = mhat / lhat if lhat > 0 else 0.0
            smooth[br.id] = float(np.std(br.radii / rstar))
    if dense:
        vals = np.array(list(dense.values()))
        jp2ep_cost = float(vals.min() + vals.std())
    else:
        jp2ep_cost = 0.0
    scores: dict[int, BranchScore] = {}
    for br in branches:
        if br.kind == "jp2jp":
            combined = b * dense[br.id] + (1.0 - b) * 10.0 * ml[br.id]
            scores[br.id] = BranchScore(ml[br.id], dense[br.id], smooth[br.id], combined)
        else:
            combined = b * jp2ep_cost + (1.0 - b) * 10.0 * ml[br.id]
            scores[br.id] = BranchScore(ml[br.id], jp2ep_cost, 0.0, combined)
    return scores


def find_spine_axis(graph: SkeletonGraph, params: SpineParams | None = None) -> SpineAxis:
    """Pick the stable root-anchored axis by combined branch score.

    Candidates are the nodes directly linked to the root; the best-scoring one
    wins, but a junction whose branch radii vary beyond the smoothness
    threshold is discarded and the next best is tried.  If every candidate is
    discarded the top scorer is used anyway (with a warning).
    """
    params = params or SpineParams()
    if graph.root_id < 0:
        graph = _rooted_graph(graph.skeleton, classify_points(graph.skeleton))
    skel = graph.skeleton
    scores = _branch_scores(
        graph.branches, skel.max_radius, graph.total_mass(), graph.total_length(), params
    )
    keys = skel.canon_keys()

    candidates = []
    for br in graph.branches:
        if graph.root_id in (br.node_a, br.node_b):
            other = graph.nodes[br.node_b if br.node_a == graph.root_id else br.node_a]
            if other.id == graph.root_id:
                continue  # self loop at root
            candidates.append((br, other))
    if not candidates:
        raise NoCandidate("root has no incident branch")

    def order(item) -> tuple:
        br, other = item
        ck = keys[other.rep]
        return (-scores[br.id].combined, int(ck[0]), int(ck[1]), br.id)

    ranked = sorted(candidates, key=order)
    # scores within a sliver of the top are a coin flip under re-rasterization;
    # settle such near-ties by branch mass, the most resolution-stable statistic
    top = scores[ranked[0][0].id].combined
    near = [it for it in ranked if scores[it[0].id].combined >= 0.85 * top]
    if len(near) > 1:
        near.sort(key=lambda it: (-it[0].mass,) + order(it))
        ranked = near + [it for it in ranked if it not in near]
    pick = None
    for br, other in ranked:
        if other.kind == "junction" and scores[br.id].smooth > params.threshold:
            continue
        pick = (br, other)
        break
    if pick is None:
        warnings.warn("every axis candidate failed the smoothness bound; using top score")
        pick = ranked[0]

    root_ctr = graph.root.center
    other_ctr = pick[1].center
    c1 = (float(root_ctr[1]), float(root_ctr[0]))
    c2 = (float(other_ctr[1]), float(other_ctr[0]))
    return SpineAxis(crossing1=c1, crossing2=c2, vector=(c2[0] - c1[0], c2[1] - c1[1]))


def spatial_value(
    root: tuple[float, float], endpoint: tuple[float, float], axis: SpineAxis
) -> float:
    """Absolute cosine between the axis and the root-to-endpoint vector."""
    v = np.array([endpoint[0] - root[0], endpoint[1] - root[1]], dtype=float)
    a = axis.as_array()
    nv, na = float(np.hypot(*v)), float(np.hypot(*a))
    if nv == 0.0 or na == 0.0:
        raise DegenerateVector("zero-length vector in spatial value")
    return float(abs(np.dot(a, v)) / (na * nv))


def _normalize_scale(shape: BinaryShape, target: float) -> tuple[BinaryShape, float]:
    """Resample so sqrt(foreground area) == target; returns (shape, factor).

    Nearest-neighbor sampling at pixel centers, so an integer-upscaled mask
    lands on exactly the same working raster as its original.
    """
    from PIL import Image

    from .raster import shape_from_mask

    s = target / float(np.sqrt(shape.pixel_count))
    w = max(8, int(round(shape.width * s)))
    h = max(8, int(round(shape.height * s)))
    img = Image.fromarray(shape.foreground.astype(np.uint8) * 255)
    resized = np.asarray(img.resize((w, h), Image.NEAREST)) > 0
    return shape_from_mask(resized, source_id=shape.source_id), s


def _unrotate_xy(xy: np.ndarray, rot: int, height: int, width: int) -> np.ndarray:
    """Map (x, y) coordinates from the rot90(mask, rot) frame back to the mask's."""
    xy = np.asarray(xy, dtype=float)
    x, y = xy[..., 0], xy[..., 1]
    if rot == 0:
        return xy
    if rot == 1:
        return np.stack([width - 1 - y, x], axis=-1)
    if rot == 2:
        return np.stack([width - 1 - x, height - 1 - y], axis=-1)
    return np.stack([y, height - 1 - x], axis=-1)


def build_rts(shape: BinaryShape, config: PipelineConfig | None = None) -> RTS:
    """Full pipeline: field, skeleton, prune, tree, features, axis, record.

    Geometry in the result (paths, tips, axis, max radius) is reported in the
    input image's pixel frame even when the working raster was rescaled.  The
    working raster is first brought to a canonical quarter-turn orientation
    and area, so grid rotations and integer rescalings of one image yield
    identical records (up to the geometry frame).
    """
    from .raster import _canonical_rotation, shape_from_mask

    config = config or PipelineConfig()
    original = shape
    rot = _canonical_rotation(shape.foreground)
    if rot:
        shape = shape_from_mask(np.rot90(shape.foreground, rot), source_id=shape.source_id)
    inv = 1.0
    if config.norm_sqrt_area:
        shape, s = _normalize_scale(shape, config.norm_sqrt_area)
        inv = 1.0 / s
    field_ = distance_transform(shape)
    skel = prune_skeleton(extract_skeleton(field_), config.prune_significance)
    if int(skel.mask.sum()) <= 4:
        raise DegenerateSkeleton("skeleton reduces to a point cluster")
    classes = classify_points(skel)
    graph = build_skeleton_graph(skel, classes)
    tree = build_skeleton_tree(graph, shape)
    axis = find_spine_axis(graph, config.spine)

    rstar = skel.max_radius
    total_mass = graph.total_mass()
    total_length = graph.total_length()
    fractions = _sample_fractions(config.quantization)
    if graph.root_id >= 0:
        root_xy = (float(graph.root.center[1]), float(graph.root.center[0]))
    else:
        root_xy = (float(tree.root[1]), float(tree.root[0]))

    oh, ow = original.height, original.width

    def to_input_frame(xy) -> np.ndarray:
        return _unrotate_xy(np.asarray(xy, dtype=float) * inv, rot, oh, ow)

    feats: list[EndFeature] = []
    for ep in tree.end_paths:
        radii, xy = _resample(ep, fractions)
        tip_xy = (float(ep.endpoint[1]), float(ep.endpoint[0]))
        try:
            v = spatial_value(root_xy, tip_xy, axis)
        except DegenerateVector:
            v = 0.0
        feats.append(
            EndFeature(
                radii=radii / rstar,
                mass=path_mass(ep) / total_mass,
                length=ep.length / total_length,
                axis_value=v,
                endpoint_xy=tuple(to_input_frame(tip_xy)),
                path_xy=to_input_frame(xy),
            )
        )

    if not feats:
        raise DegenerateSkeleton("no end paths")
    keys = skel.canon_keys()

    def anchor_rank(i: int) -> tuple:
        ep = tree.end_paths[i]
        ck = keys[ep.endpoint]
        return (-feats[i].axis_value, int(ck[0]), int(ck[1]))

    start = min(range(len(feats)), key=anchor_rank)
    ordered = tuple(feats[(start + k) % len(feats)] for k in range(len(feats)))
    c1 = tuple(to_input_frame(axis.crossing1))
    c2 = tuple(to_input_frame(axis.crossing2))
    return RTS(
        features=ordered,
        spine=SpineAxis(crossing1=c1, crossing2=c2, vector=(c2[0] - c1[0], c2[1] - c1[1])),
        rstar=rstar * inv,
        total_mass=total_mass,
        total_length=total_length,
        width=original.width,
        height=original.height,
        source_id=original.source_id,
        root_xy=tuple(to_input_frame(root_xy)),
    )


def rts_to_dict(rts: RTS) -> dict:
    return {
        "n": rts.n_endpoints,
        "spine": {
            "x1": rts.spine.crossing1[0],
            "y1": rts.spine.crossing1[1],
            "x2": rts.spine.crossing2[0],
            "y2": rts.spine.crossing2[1],
        },
        "features": [
            {
                "lhat": [float(v) for v in f.radii],
                "mhat": f.mass,
                "lhat_len": f.length,
                "v": f.axis_value,
                "endpoint": [f.endpoint_xy[0], f.endpoint_xy[1]],
                "path": [[float(x), float(y)] for x, y in f.path_xy],
            }
            for f in rts.features
        ],
        "rstar": rts.rstar,
        "total_mass": rts.total_mass,
        "total_length": rts.total_length,
        "width": rts.width,
        "height": rts.height,
        "source_id": rts.source_id,
        "root": [rts.root_xy[0], rts.root_xy[1]],
    }


def rts_from_dict(doc: dict) -> RTS:
    feats = tuple(
        EndFeature(
            radii=np.array(f["lhat"], dtype=float),
            mass=float(f["mhat"]),
            length=float(f["lhat_len"]),
            axis_value=float(f["v"]),
            endpoint_xy=(float(f["endpoint"][0]), float(f["endpoint"][1])),
            path_xy=np.array(f["path"], dtype=float),
        )
        for f in doc["features"]
    )
    spine = doc["spine"]
    c1 = (float(spine["x1"]), float(spine["y1"]))
    c2 = (float(spine["x2"]), float(spine["y2"]))
    return RTS(
        features=feats,
        spine=SpineAxis(crossing1=c1, crossing2=c2, vector=(c2[0] - c1[0], c2[1] - c1[1])),
        rstar=float(doc.get("rstar", 1.0)),
        total_mass=float(doc.get("total_mass", 1.0)),
        total_length=float(doc.get("total_length", 1.0)),
        width=int(doc.get("width", 0)),
        height=int(doc.get("height", 0)),
        source_id=str(doc.get("source_id", "")),
        root_xy=tuple(doc.get("root", (0.0, 0.0))),
    )


def save_rts(rts: RTS, path) -> None:
    with open(path, "w") as fh:
        json.dump(rts_to_dict(rts), fh)


def load_rts(path) -> RTS:
    with open(path) as fh:
        return rts_from_dict(json.load(fh))
