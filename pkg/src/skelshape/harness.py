"""Dataset ingestion, retrieval scoring, and cross-dataset classification.

Datasets are directories of silhouette files; labels come from per-class
subdirectories or from the filename prefix before the trailing index.  The
retrieval report counts, for every query, the same-class hits at each rank
over the first class-size results (the query itself counts as rank 1 unless
self-exclusion is requested) and the bulls-eye hits within twice the class
size.
"""

from __future__ import annotations

import configparser
import os
import re
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyDataset, EmptyGallery, EmptyInput
from .generalize import Grts
from .metric import MatchParams
from .osbmatch import match_shapes
from .raster import BinaryShape, load_silhouette
from .rts import RTS, PipelineConfig, SpineParams, build_rts

_EXTS = (".pgm", ".png", ".bmp", ".pbm", ".ppm", ".tif", ".tiff", ".gif", ".jpg", ".jpeg")


@dataclass(frozen=True)
class Dataset:
    name: str
    shapes: tuple[tuple[BinaryShape, str, str], ...]  # (shape, label, id)
    errors: tuple[tuple[str, str], ...] = ()  # (path, message) for skipped files

    def __len__(self) -> int:
        return len(self.shapes)

    @property
    def labels(self) -> list[str]:
        return [lab for _, lab, _ in self.shapes]


@dataclass
class RetrievalReport:
    rankings: dict[str, list[tuple[str, float]]]  # query id -> [(gallery id, cost)]
    labels: dict[str, str]
    topk_counts: list[int]  # same-class count at rank k, k = 1..max class size
    accuracy: float
    bullseye: float
    errors: list[tuple[str, int, str]]  # (query id, rank, wrong id)
    include_self: bool
    n_queries: int
    seconds: float = 0.0
    params: dict = field(default_factory=dict)

    def table_row(self, k: int = 4) -> str:
        cells = " & ".join(str(c) for c in self.topk_counts[:k])
        return f"{cells} & {100 * self.accuracy:.1f}"


def _label_from_name(stem: str) -> str:
    m = re.match(r"^(.*?)[-_ ]?\d+$", stem)
    return m.group(1) if m else stem


def load_dataset(
    directory: str, layout: str = "flat-labeled", threshold: int = 128, name: str | None = None
) -> Dataset:
    """Ingest every silhouette under ``directory``.

    ``layout`` names the expected convention (tari56: 14x4, kimia99: 9x11,
    flat-labeled: anything); labels parse the same way for all three, from
    subdirectory names when present and filename prefixes otherwise.  Decode
    failures are collected, not fatal.
    """
    if not os.path.isdir(directory):
        raise EmptyDataset(f"not a directory: {directory}")
    entries: list[tuple[str, str]] = []  # (path, label)
    for root, _dirs, files in os.walk(directory):
        for fn in sorted(files):
            if not fn.lower().endswith(_EXTS):
                continue
            path = os.path.join(root, fn)
            rel = os.path.relpath(root, directory)
            stem = os.path.splitext(fn)[0]
            label = rel.split(os.sep)[0] if rel != "." else _label_from_name(stem)
            entries.append((path, label))
    entries.sort()
    shapes = []
    errors = []
    for path, label in entries:
        sid = os.path.splitext(os.path.basename(path))[0]
        try:
            with open(path, "rb") as fh:
                shape = load_silhouette(fh.read(), threshold=threshold, source_id=sid)
            shapes.append((shape, label, sid))
        except Exception as exc:  # noqa: BLE001 - per-file errors are data, not bugs
            errors.append((path, str(exc)))
    if not shapes:
        raise EmptyDataset(f"no usable silhouettes in {directory}")
    return Dataset(
        name=name or os.path.basename(os.path.normpath(directory)) or layout,
        shapes=tuple(shapes),
        errors=tuple(errors),
    )


def build_all(dataset: Dataset, config: PipelineConfig | None = None) -> list[RTS]:
    """Records for every dataset shape, in dataset order."""
    config = config or PipelineConfig()
    return [build_rts(shape, config) for shape, _lab, _sid in dataset.shapes]


def retrieve(
    query: RTS,
    gallery: list[RTS],
    params: MatchParams | None = None,
    rotation_search: bool = True,
) -> list[tuple[int, float]]:
    """Gallery indices sorted by ascending matching cost against the query."""
    if not gallery:
        raise EmptyGallery("gallery is empty")
    costs = [
        match_shapes(query, g, params, rotation_search).global_cost for g in gallery
    ]
    order = sorted(range(len(gallery)), key=lambda i: (costs[i], i))
    return [(i, costs[i]) for i in order]


def _cost_matrix(records: list[RTS], params: MatchParams, rotation_search: bool) -> np.ndarray:
    n = len(records)
    costs = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            c = match_shapes(records[i], records[j], params, rotation_search).global_cost
            costs[i, j] = costs[j, i] = c
    return costs


def evaluate(
    dataset: Dataset,
    params: MatchParams | None = None,
    protocol: str = "topk",
    config: PipelineConfig | None = None,
    include_self: bool = True,
    rotation_search: bool = True,
    records: list[RTS] | None = None,
) -> RetrievalReport:
    """Leave-in retrieval over the whole dataset, scored two ways.

    ``topk`` counts same-class results at each rank over the first class-size
    results; ``bullseye`` counts same-class hits within twice the class size.
    Both rates are always computed; ``protocol`` only picks the headline.
    """
    params = params or MatchParams()
    t0 = time.time()
    if records is None:
        records = build_all(dataset, config)
    ids = [sid for _s, _l, sid in dataset.shapes]
    labels = {sid: lab for _s, lab, sid in dataset.shapes}
    class_size = {lab: dataset.labels.count(lab) for lab in set(dataset.labels)}
    costs = _cost_matrix(records, params, rotation_search)

    rankings: dict[str, list[tuple[str, float]]] = {}
    max_c = max(class_size.values())
    topk = [0] * max_c
    hits = total_slots = 0
    bull_hits = bull_slots = 0
    errors: list[tuple[str, int, str]] = []
    for qi, qid in enumerate(ids):
        order = sorted(range(len(ids)), key=lambda j: (costs[qi, j], j))
        if not include_self:
            order = [j for j in order if j != qi]
        rankings[qid] = [(ids[j], float(costs[qi, j])) for j in order]
        lab = labels[qid]
        c = class_size[lab]
        depth = c if include_self else c - 1
        for k in range(min(depth, len(order))):
            same = labels[ids[order[k]]] == lab
            if same:
                topk[k] += 1
                hits += 1
            else:
                errors.append((qid, k + 1, ids[order[k]]))
        total_slots += min(depth, len(order))
        window = [labels[ids[j]] for j in order[: 2 * c]]
        bull_hits += sum(1 for w in window if w == lab)
        bull_slots += depth
    report = RetrievalReport(
        rankings=rankings,
        labels=labels,
        topk_counts=topk,
        accuracy=hits / total_slots if total_slots else 0.0,
        bullseye=min(1.0, bull_hits / bull_slots) if bull_slots else 0.0,
        errors=errors,
        include_self=include_self,
        n_queries=len(ids),
        seconds=time.time() - t0,
        params={"beta1": params.beta1, "beta2": params.beta2, "protocol": protocol},
    )
    return report


def cross_classify(
    queries: list[RTS],
    query_labels: list[str],
    prototypes: list[Grts],
    params: MatchParams | None = None,
    rotation_search: bool = True,
    accept: dict[str, set[str]] | None = None,
) -> dict:
    """Assign each query the label of its minimum-cost prototype.

    ``accept`` optionally maps a query label to the set of prototype labels
    counted as semantically correct (for cross-dataset category names).
    """
    if not prototypes:
        raise EmptyInput("no prototypes")
    results = []
    correct = 0
    for rts, lab in zip(queries, query_labels):
        costs = [
            match_shapes(g, rts, params, rotation_search).global_cost for g in prototypes
        ]
        best = int(np.argmin(costs))
        pred = prototypes[best].label
        ok = pred in accept.get(lab, {lab}) if accept else pred == lab
        correct += bool(ok)
        results.append(
            {"id": rts.source_id, "label": lab, "predicted": pred, "cost": float(costs[best]), "correct": bool(ok)}
        )
    return {
        "results": results,
        "accuracy": correct / len(results) if results else 0.0,
        "n": len(results),
    }


def load_config(path: str, section: str = "DEFAULT") -> tuple[PipelineConfig, MatchParams, bool]:
    """Key-value config with per-dataset sections.

    Recognized keys: threshold, prune_significance, quantization, alpha,
    beta, smooth_threshold, beta1, beta2, rotation_search.
    """
    cp = configparser.ConfigParser()
    with open(path) as fh:
        cp.read_file(fh)
    sec = cp[section] if section in cp else cp["DEFAULT"]
    spine = SpineParams(
        alpha=sec.getfloat("alpha", 0.65),
        beta=sec.getfloat("beta", 0.3),
        threshold=sec.getfloat("smooth_threshold", 0.224),
    )
    pipeline = PipelineConfig(
        threshold=sec.getint("threshold", 128),
        prune_significance=sec.getfloat("prune_significance", 0.08),
        quantization=sec.get("quantization", "uneven"),
        spine=spine,
    )
    params = MatchParams(
        beta1=sec.getfloat("beta1", 30.0),
        beta2=sec.getfloat("beta2", 0.6),
        alpha=spine.alpha,
    )
    rotation = sec.getboolean("rotation_search", True)
    return pipeline, params, rotation
