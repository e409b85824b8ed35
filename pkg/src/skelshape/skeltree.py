"""Skeleton point classification, branch graph, and the root-to-tip tree.

Pixels are classified by their 8-neighbor degree (tip = 1, junction >= 3,
connection = 2), adjacent junction pixels collapse into one graph node, and
the graph is then flattened into a depth-1 tree of root-to-endpoint paths
ordered counterclockwise along the shape contour.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSkeleton
from .raster import NEIGHBORS8, BinaryShape, Skeleton, neighbor_count


@dataclass(frozen=True)
class PointClass:
    kind: str  # endpoint | junction | connection
    is_root: bool


@dataclass(frozen=True)
class GraphNode:
    id: int
    kind: str  # endpoint | junction | connection (connection only for a mid-path root)
    rep: tuple[int, int]  # max-radius pixel; deterministic anchor for traversals
    pixels: tuple[tuple[int, int], ...]
    radius: float
    is_root: bool
    center: tuple[float, float] = (0.0, 0.0)  # radius^2-weighted centroid (row, col)


@dataclass(frozen=True)
class Branch:
    id: int
    node_a: int
    node_b: int
    points: np.ndarray  # polyline (k, 2) of (row, col), node reps included
    radii: np.ndarray
    length: float
    kind: str  # jp2jp | jp2ep
    mass: float  # radii summed over the pixels this branch owns
    owned: int  # owned pixel count; branches partition the skeleton


@dataclass(frozen=True)
class SkeletonGraph:
    nodes: tuple[GraphNode, ...]
    branches: tuple[Branch, ...]
    root_id: int
    skeleton: Skeleton

    @property
    def root(self) -> GraphNode:
        return self.nodes[self.root_id]

    def total_mass(self) -> float:
        return float(self.skeleton.radius[self.skeleton.mask].sum())

    def total_length(self) -> float:
        """Summed length of all branches, measured as skeleton arc length.

        Each pixel adjacency counts once (1 straight, sqrt(2) diagonal); this
        equals the polyline sum over the branch partition but does not depend
        on how junction regions were grouped, so it is resolution stable.
        """
        m = self.skeleton.mask
        ortho = int((m[:, :-1] & m[:, 1:]).sum() + (m[:-1, :] & m[1:, :]).sum())
        diag = int((m[:-1, :-1] & m[1:, 1:]).sum() + (m[:-1, 1:] & m[1:, :-1]).sum())
        return float(ortho + diag * np.sqrt(2.0))


@dataclass(frozen=True)
class EndPath:
    points: np.ndarray  # (k, 2) of (row, col), root first, endpoint last
    radii: np.ndarray
    length: float
    mass: float
    endpoint: tuple[int, int]
    contour_pos: int


@dataclass(frozen=True)
class SkeletonTree:
    root: tuple[int, int]
    end_paths: tuple[EndPath, ...]  # counterclockwise by contour position


def classify_points(skel: Skeleton) -> dict[tuple[int, int], PointClass]:
    """Degree-based point classes plus the root designation.

    The root is the junction with the largest radius; radius ties break on
    the smaller canonical-frame coordinate, and a skeleton without junctions
    roots at its point of maximal radius.
    """
    deg = neighbor_count(skel.mask)
    keys = skel.canon_keys()
    kinds: dict[tuple[int, int], str] = {}
    for r, c in skel.points():
        d = deg[r, c]
        if d <= 1:
            kind = "endpoint"
        elif d == 2:
            kind = "connection"
        else:
            kind = "junction"
        kinds[(int(r), int(c))] = kind

    def rank(p: tuple[int, int]) -> tuple[int, int, int]:
        return (-int(skel.thirds[p]), int(keys[p][0]), int(keys[p][1]))

    junctions = [p for p, k in kinds.items() if k == "junction"]
    pool = junctions if junctions else list(kinds)
    root = min(pool, key=rank)
    return {p: PointClass(kind=k, is_root=(p == root)) for p, k in kinds.items()}


def _polyline_length(points: np.ndarray) -> float:
    if len(points) < 2:
        return 0.0
    diffs = np.diff(points.astype(float), axis=0)
    return float(np.hypot(diffs[:, 0], diffs[:, 1]).sum())


LIGATURE_FACTOR = 0.8  # junction-junction branches shorter than this x local radius merge


def build_skeleton_graph(
    skel: Skeleton,
    classes: dict[tuple[int, int], PointClass],
    split_at_root: bool = False,
    ligature: float = LIGATURE_FACTOR,
) -> SkeletonGraph:
    """Collapse junction clusters to nodes and trace the branches between them.

    Adjacent junction pixels always form one node; in addition, two junction
    nodes whose connecting branch is shorter than ``ligature`` times the
    smaller node radius merge into one (such stubs live inside one maximal
    disk and are artifacts of nearby part attachments, not structure).
    ``split_at_root`` promotes a mid-branch root (a skeleton with no
    junctions) to its own node so root-anchored traversals work; the plain
    graph keeps such a skeleton as a single endpoint-to-endpoint branch.
    """
    mask = skel.mask
    h, w = mask.shape
    keys = skel.canon_keys()

    def canon(p: tuple[int, int]) -> tuple[int, int]:
        return (int(keys[p][0]), int(keys[p][1]))

    def rep_of(pixels) -> tuple[int, int]:
        return min(pixels, key=lambda p: (-int(skel.thirds[p]), canon(p)))

    root_px = next(p for p, pc in classes.items() if pc.is_root)

    junction_px = sorted(p for p, pc in classes.items() if pc.kind == "junction")
    clusters: list[set[tuple[int, int]]] = []
    seen: set[tuple[int, int]] = set()
    for start in junction_px:
        if start in seen:
            continue
        cluster = {start}
        seen.add(start)
        stack = [start]
        while stack:
            r, c = stack.pop()
            for dr, dc in NEIGHBORS8:
                q = (r + dr, c + dc)
                if q in seen or classes.get(q) is None or classes[q].kind != "junction":
                    continue
                seen.add(q)
                cluster.add(q)
                stack.append(q)
        clusters.append(cluster)

    endpoint_px = sorted(p for p, pc in classes.items() if pc.kind == "endpoint")

    def neighbors(p: tuple[int, int]) -> list[tuple[int, int]]:
        out = []
        for dr, dc in NEIGHBORS8:
            q = (p[0] + dr, p[1] + dc)
            if 0 <= q[0] < h and 0 <= q[1] < w and mask[q]:
                out.append(q)
        return out

    nodes: list[GraphNode] = []
    branches: list[Branch] = []
    node_pixels: dict[tuple[int, int], int] = {}

    for _round in range(32):
        nodes = []
        branches = []
        node_pixels = {}

        def add_node(pixels, kind: str) -> None:
            rep = rep_of(pixels)
            nid = len(nodes)
            for p in pixels:
                node_pixels[p] = nid
            arr = np.array(sorted(pixels), dtype=float)
            wts = skel.radius[arr[:, 0].astype(int), arr[:, 1].astype(int)] ** 2
            ctr = tuple((arr * wts[:, None]).sum(axis=0) / wts.sum())
            nodes.append(
                GraphNode(
                    id=nid,
                    kind=kind,
                    rep=rep,
                    pixels=tuple(sorted(pixels)),
                    radius=float(skel.radius[rep]),
                    is_root=False,
                    center=(float(ctr[0]), float(ctr[1])),
                )
            )

        for cluster in clusters:
            add_node(cluster, "junction")
        for p in endpoint_px:
            add_node([p], "endpoint")
        if split_at_root and root_px not in node_pixels:
            add_node([root_px], "connection")

        def add_branch(a: int, b: int, interior) -> None:
            pts = np.array([nodes[a].rep] + interior + [nodes[b].rep], dtype=np.int64)
            radii = skel.radius[pts[:, 0], pts[:, 1]]
            kind = (
                "jp2jp"
                if nodes[a].kind == "junction" and nodes[b].kind == "junction"
                else "jp2ep"
            )
            branches.append(
                Branch(
                    id=len(branches),
                    node_a=a,
                    node_b=b,
                    points=pts,
                    radii=np.asarray(radii, dtype=float),
                    length=_polyline_length(pts),
                    kind=kind,
                    mass=0.0,
                    owned=0,
                )
            )

        interiors: list[list[tuple[int, int]]] = []
        visited = np.zeros_like(mask, dtype=bool)
        for node in nodes:
            for p in node.pixels:
                for q in sorted(neighbors(p)):
                    if q in node_pixels:
                        other = node_pixels[q]
                        if other == node.id:
                            continue
                        if (node.id, p, q) > (other, q, p):
                            continue  # dedupe direct node-node contact
                        add_branch(node.id, other, [])
                        interiors.append([])
                        continue
                    if visited[q]:
                        continue
                    chain: list[tuple[int, int]] = []
                    prev: tuple[int, int] = p
                    cur = q
                    while cur not in node_pixels:
                        visited[cur] = True
                        chain.append(cur)
                        nxt = None
                        for cand in neighbors(cur):
                            if cand != prev and (cand in node_pixels or not visited[cand]):
                                nxt = cand
                                break
                        if nxt is None:
                            break
                        prev, cur = cur, nxt
                    if cur in node_pixels:
                        add_branch(node.id, node_pixels[cur], chain)
                        interiors.append(chain)

        to_merge = [
            br
            for br in branches
            if br.kind == "jp2jp"
            and br.node_a != br.node_b
            and br.length < ligature * min(nodes[br.node_a].radius, nodes[br.node_b].radius)
        ]
        if not to_merge:
            break
        # union the clusters (plus stub interiors) and re-trace
        cluster_of: dict[int, int] = {}
        for ci, cluster in enumerate(clusters):
            for nid, node in enumerate(nodes):
                if node.kind == "junction" and node.rep in cluster:
                    cluster_of[nid] = ci
        parent = list(range(len(clusters)))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        extra: dict[int, set[tuple[int, int]]] = {}
        for br in to_merge:
            ra, rb = find(cluster_of[br.node_a]), find(cluster_of[br.node_b])
            if ra != rb:
                parent[rb] = ra
            extra.setdefault(find(ra), set()).update(map(tuple, interiors[br.id]))
        merged: dict[int, set[tuple[int, int]]] = {}
        for ci, cluster in enumerate(clusters):
            merged.setdefault(find(ci), set()).update(cluster)
        for root_ci, pix in extra.items():
            merged[find(root_ci)].update(pix)
        clusters = [merged[k] for k in sorted(merged)]

    # renumber branches in canonical-frame order so downstream tie-breaks
    # (node-pixel ownership, axis candidate ranking) are rotation-stable
    branches.sort(key=lambda br: tuple(sorted(map(canon, map(tuple, br.points)))))
    branches = [
        Branch(i, br.node_a, br.node_b, br.points, br.radii, br.length, br.kind, br.mass, br.owned)
        for i, br in enumerate(branches)
    ]

    # partition masses: every pixel belongs to exactly one branch
    owner: dict[tuple[int, int], int] = {}
    for br in branches:
        for p in map(tuple, br.points[1:-1]):
            owner[p] = br.id
    for p, nid in node_pixels.items():
        incident = [br.id for br in branches if nid in (br.node_a, br.node_b)]
        if incident:
            owner.setdefault(p, min(incident))
    mass_by_branch = {br.id: 0.0 for br in branches}
    count_by_branch = {br.id: 0 for br in branches}
    for p, bid in owner.items():
        mass_by_branch[bid] += float(skel.radius[p])
        count_by_branch[bid] += 1
    branches = [
        Branch(
            id=br.id,
            node_a=br.node_a,
            node_b=br.node_b,
            points=br.points,
            radii=br.radii,
            length=br.length,
            kind=br.kind,
            mass=mass_by_branch[br.id],
            owned=count_by_branch[br.id],
        )
        for br in branches
    ]

    root_id = node_pixels.get(root_px)
    if root_id is None:
        # root is a connection pixel inside some branch (no-junction skeleton)
        root_id = -1
    nodes = [
        GraphNode(n.id, n.kind, n.rep, n.pixels, n.radius, is_root=(n.id == root_id), center=n.center)
        for n in nodes
    ]
    return SkeletonGraph(
        nodes=tuple(nodes), branches=tuple(branches), root_id=root_id, skeleton=skel
    )


def _rooted_graph(skel: Skeleton, classes: dict[tuple[int, int], PointClass]) -> SkeletonGraph:
    """Graph view where the root pixel is always a node (splits its branch)."""
    return build_skeleton_graph(skel, classes, split_at_root=True)


def _pixel_geodesics(skel: Skeleton, root: tuple[int, int]) -> dict[tuple[int, int], tuple[int, int]]:
    """Dijkstra over skeleton pixels (1 / sqrt(2) steps); returns parent map."""
    mask = skel.mask
    h, w = mask.shape
    dist: dict[tuple[int, int], float] = {root: 0.0}
    parent: dict[tuple[int, int], tuple[int, int]] = {}
    heap: list[tuple[float, tuple[int, int]]] = [(0.0, root)]
    while heap:
        d, p = heapq.heappop(heap)
        if d > dist.get(p, float("inf")) + 1e-12:
            continue
        for dr, dc in NEIGHBORS8:
            q = (p[0] + dr, p[1] + dc)
            if not (0 <= q[0] < h and 0 <= q[1] < w and mask[q]):
                continue
            nd = d + (1.0 if dr == 0 or dc == 0 else 1.4142135623730951)
            if nd < dist.get(q, float("inf")) - 1e-12:
                dist[q] = nd
                parent[q] = p
                heapq.heappush(heap, (nd, q))
    return parent


def _contour_position(endpoint: tuple[int, int], contour: np.ndarray) -> int:
    exy = np.array([endpoint[1], endpoint[0]], dtype=float)
    d = np.hypot(contour[:, 0] - exy[0], contour[:, 1] - exy[1])
    return int(np.argmin(d))


def build_skeleton_tree(graph: SkeletonGraph, shape: BinaryShape) -> SkeletonTree:
    """One root-to-endpoint pixel geodesic per endpoint, counterclockwise.

    Paths follow the skeleton pixels themselves (shortest pixel path from the
    root), so their lengths and radius profiles track the geometry rather
    than node-to-node shortcuts.
    """
    skel = graph.skeleton
    keys = skel.canon_keys()
    if graph.root_id >= 0:
        # start the geodesics at the cluster pixel nearest the weighted
        # centroid: the max-radius pixel can sit anywhere on a flat plateau,
        # the centroid cannot
        ctr = graph.root.center
        root_rep = min(
            graph.root.pixels,
            key=lambda p: (
                (p[0] - ctr[0]) ** 2 + (p[1] - ctr[1]) ** 2,
                tuple(int(v) for v in keys[p]),
            ),
        )
        endpoints = [n.rep for n in graph.nodes if n.kind == "endpoint" and not n.is_root]
    else:
        classes = classify_points(skel)
        root_rep = next(p for p, pc in classes.items() if pc.is_root)
        endpoints = sorted(p for p, pc in classes.items() if pc.kind == "endpoint" and p != root_rep)
    parent = _pixel_geodesics(skel, root_rep)

    end_paths: list[EndPath] = []
    for ep in endpoints:
        if ep != root_rep and ep not in parent:
            continue
        pts = [ep]
        while pts[-1] != root_rep:
            pts.append(parent[pts[-1]])
        arr = np.array(pts[::-1], dtype=np.int64)
        radii = np.asarray(skel.radius[arr[:, 0], arr[:, 1]], dtype=float)
        end_paths.append(
            EndPath(
                points=arr,
                radii=radii,
                length=_polyline_length(arr),
                mass=float(radii.sum()),
                endpoint=ep,
                contour_pos=_contour_position(ep, shape.contour),
            )
        )
    if not end_paths:
        raise DegenerateSkeleton("skeleton has no endpoints")
    end_paths.sort(key=lambda ep: (ep.contour_pos, tuple(int(v) for v in keys[ep.endpoint])))
    return SkeletonTree(root=root_rep, end_paths=tuple(end_paths))


def graph_debug_json(graph: SkeletonGraph, tree: SkeletonTree | None = None) -> str:
    """JSON dump of nodes, branches, and (optionally) end paths for inspection."""
    doc: dict = {
        "root": list(graph.root.rep) if graph.root_id >= 0 else None,
        "nodes": [
            {
                "id": n.id,
                "kind": n.kind,
                "rep": list(n.rep),
                "radius": n.radius,
                "is_root": n.is_root,
                "pixels": [list(p) for p in n.pixels],
            }
            for n in graph.nodes
        ],
        "branches": [
            {
                "id": b.id,
                "nodes": [b.node_a, b.node_b],
                "kind": b.kind,
                "length": b.length,
                "mass": b.mass,
                "points": b.points.tolist(),
            }
            for b in graph.branches
        ],
    }
    if tree is not None:
        doc["end_paths"] = [
            {
                "endpoint": list(ep.endpoint),
                "length": ep.length,
                "mass": ep.mass,
                "contour_pos": ep.contour_pos,
                "points": ep.points.tolist(),
            }
            for ep in tree.end_paths
        ]
    return json.dumps(doc, indent=2)
