"""Inductive prototype learning over same-class shape records.

Shapes start as singleton prototypes and are repeatedly merged pairwise,
closest first, until one remains.  A merge keeps only the matched tip pairs
and averages their features with weights proportional to the number of
instances behind each side, which makes every original shape count equally
in the final prototype regardless of the merge order.  The lineage tree and
a medoid exemplar (for geometric reconstruction) ride along.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyCorrespondence, EmptyInput
from .metric import MatchParams
from .osbmatch import MatchResult, match_shapes
from .rts import RTS, EndFeature


@dataclass(frozen=True)
class MergeNode:
    """Lineage tree node: a leaf shape or a merge event with its cost."""

    id: str
    cost: float = 0.0
    matched: int = 0  # |correspondence| kept by this merge
    children: tuple["MergeNode", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaf_ids(self) -> list[str]:
        if self.is_leaf:
            return [self.id]
        out: list[str] = []
        for ch in self.children:
            out.extend(ch.leaf_ids())
        return out

    def internal_count(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + sum(ch.internal_count() for ch in self.children)


@dataclass(frozen=True)
class Grts:
    """A generalized record: same feature schema as a single shape's record."""

    features: tuple[EndFeature, ...]
    count: int  # instances merged into this node
    label: str
    merge_tree: MergeNode
    exemplar: RTS  # medoid leaf backing geometric reconstruction
    exemplar_id: str
    leaves: tuple[RTS, ...]
    # per feature, per leaf id: the feature index it descends from
    feature_trace: tuple[dict[str, int], ...] = field(default=())

    @property
    def n_endpoints(self) -> int:
        return len(self.features)


def grts_from_rts(rts: RTS, label: str = "") -> Grts:
    """Wrap a single shape's record as a count-1 prototype."""
    trace = tuple({rts.source_id: i} for i in range(len(rts.features)))
    return Grts(
        features=rts.features,
        count=1,
        label=label,
        merge_tree=MergeNode(id=rts.source_id),
        exemplar=rts,
        exemplar_id=rts.source_id,
        leaves=(rts,),
        feature_trace=trace,
    )


def grts_distance(
    x: Grts, y: Grts, params: MatchParams | None = None, rotation_search: bool = True
) -> MatchResult:
    """Same matching semantics as between two plain shape records."""
    return match_shapes(x, y, params, rotation_search)


def _pair_cost(a: RTS, b: RTS, params, cache: dict) -> float:
    key = (a.source_id, b.source_id) if a.source_id <= b.source_id else (b.source_id, a.source_id)
    if key not in cache:
        cache[key] = match_shapes(a, b, params).global_cost
    return cache[key]


def _medoid(leaves: tuple[RTS, ...], params, cache: dict) -> RTS:
    if len(leaves) == 1:
        return leaves[0]
    sums = [
        sum(_pair_cost(a, b, params, cache) for b in leaves if b is not a) for a in leaves
    ]
    return leaves[int(np.argmin(sums))]


def merge_grts(
    x: Grts,
    y: Grts,
    f: tuple[tuple[int, int], ...],
    params: MatchParams | None = None,
    cost: float = 0.0,
    leaf_costs: dict | None = None,
) -> Grts:
    """Merge two prototypes along correspondence ``f`` by instance voting.

    Feature ``k`` of the result averages x's feature f[k][0] and y's feature
    f[k][1] with weights count_x/(count_x+count_y) and count_y/(..); tips
    left unmatched by ``f`` are dropped (their absence is visible in the
    lineage's ``matched`` counts).
    """
    if not f:
        raise EmptyCorrespondence("merge needs at least one matched pair")
    params = params or MatchParams()
    wx = x.count / (x.count + y.count)
    wy = y.count / (x.count + y.count)
    cache = leaf_costs if leaf_costs is not None else {}
    leaves = tuple(x.leaves) + tuple(y.leaves)
    exemplar = _medoid(leaves, params, cache)

    feats: list[EndFeature] = []
    trace: list[dict[str, int]] = []
    for i, j in f:
        fx, fy = x.features[i], y.features[j]
        tr = {}
        tr.update({k: v for k, v in x.feature_trace[i].items()})
        tr.update({k: v for k, v in y.feature_trace[j].items()})
        ex_idx = tr.get(exemplar.source_id)
        if ex_idx is not None:
            geom = exemplar.features[ex_idx]
            endpoint_xy, path_xy = geom.endpoint_xy, geom.path_xy
        else:
            endpoint_xy, path_xy = fx.endpoint_xy, fx.path_xy
        feats.append(
            EndFeature(
                radii=wx * fx.radii + wy * fy.radii,
                mass=wx * fx.mass + wy * fy.mass,
                length=wx * fx.length + wy * fy.length,
                axis_value=wx * fx.axis_value + wy * fy.axis_value,
                endpoint_xy=endpoint_xy,
                path_xy=path_xy,
            )
        )
        trace.append(tr)

    node = MergeNode(
        id=f"{x.merge_tree.id}+{y.merge_tree.id}",
        cost=cost,
        matched=len(f),
        children=(x.merge_tree, y.merge_tree),
    )
    return Grts(
        features=tuple(feats),
        count=x.count + y.count,
        label=x.label or y.label,
        merge_tree=node,
        exemplar=exemplar,
        exemplar_id=exemplar.source_id,
        leaves=leaves,
        feature_trace=tuple(trace),
    )


def generalize_set(
    shapes: list[RTS],
    label: str = "",
    params: MatchParams | None = None,
) -> tuple[Grts, MergeNode]:
    """Greedy closest-pair agglomeration of same-class records into one.

    Ties in the pair costs break on the smaller (id, id) pair, ids being
    assigned in input order, so identical input yields an identical tree.
    """
    if not shapes:
        raise EmptyInput("no shapes to generalize")
    params = params or MatchParams()
    active: dict[int, Grts] = {i: grts_from_rts(r, label) for i, r in enumerate(shapes)}
    next_id = len(shapes)
    leaf_costs: dict = {}

    pair_info: dict[tuple[int, int], MatchResult] = {}

    def info(i: int, j: int) -> MatchResult:
        key = (i, j) if i < j else (j, i)
        if key not in pair_info:
            pair_info[key] = grts_distance(active[key[0]], active[key[1]], params)
        return pair_info[key]

    while len(active) > 1:
        ids = sorted(active)
        best_key = min(
            ((i, j) for a, i in enumerate(ids) for j in ids[a + 1 :]),
            key=lambda k: (info(*k).global_cost, k),
        )
        res = info(*best_key)
        i, j = best_key
        merged = merge_grts(
            active[i], active[j], res.correspondence, params, cost=res.global_cost,
            leaf_costs=leaf_costs,
        )
        del active[i], active[j]
        pair_info = {k: v for k, v in pair_info.items() if i not in k and j not in k}
        active[next_id] = merged
        next_id += 1

    root = active[next_id - 1] if next_id - 1 in active else next(iter(active.values()))
    return root, root.merge_tree


def grts_to_dict(g: Grts) -> dict:
    def tree_doc(node: MergeNode) -> dict:
        if node.is_leaf:
            return {"leaf": node.id}
        return {
            "id": node.id,
            "cost": node.cost,
            "matched": node.matched,
            "children": [tree_doc(ch) for ch in node.children],
        }

    from .rts import rts_to_dict

    return {
        "n": g.n_endpoints,
        "label": g.label,
        "count": g.count,
        "exemplar_id": g.exemplar_id,
        "merge_tree": tree_doc(g.merge_tree),
        "features": [
            {
                "lhat": [float(v) for v in f.radii],
                "mhat": f.mass,
                "lhat_len": f.length,
                "v": f.axis_value,
                "endpoint": list(f.endpoint_xy),
                "path": [[float(a), float(b)] for a, b in f.path_xy],
            }
            for f in g.features
        ],
        "exemplar": rts_to_dict(g.exemplar),
        "feature_trace": [dict(t) for t in g.feature_trace],
    }


def grts_from_dict(doc: dict) -> Grts:
    from .rts import rts_from_dict

    def tree_node(d: dict) -> MergeNode:
        if "leaf" in d:
            return MergeNode(id=d["leaf"])
        return MergeNode(
            id=d["id"],
            cost=float(d.get("cost", 0.0)),
            matched=int(d.get("matched", 0)),
            children=tuple(tree_node(ch) for ch in d["children"]),
        )

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
    exemplar = rts_from_dict(doc["exemplar"])
    return Grts(
        features=feats,
        count=int(doc["count"]),
        label=str(doc.get("label", "")),
        merge_tree=tree_node(doc["merge_tree"]),
        exemplar=exemplar,
        exemplar_id=str(doc["exemplar_id"]),
        leaves=(exemplar,),
        feature_trace=tuple({k: int(v) for k, v in t.items()} for t in doc.get("feature_trace", [])),
    )


def save_grts(g: Grts, path) -> None:
    with open(path, "w") as fh:
        json.dump(grts_to_dict(g), fh)


def load_grts(path) -> Grts:
    with open(path) as fh:
        return grts_from_dict(json.load(fh))
