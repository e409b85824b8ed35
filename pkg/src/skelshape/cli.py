"""Command-line interface.

Subcommands mirror the pipeline stages: build a record from an image, match
two records, retrieve against a gallery, evaluate a dataset, generalize a
class into a prototype, apply a prototype to an instance, and complete a
partial shape.  Any pipeline error exits nonzero with a message on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .apply import apply_character, complete_shape
from .errors import SkelshapeError
from .generalize import generalize_set, load_grts, save_grts
from .harness import build_all, evaluate, load_config, load_dataset, retrieve
from .metric import MatchParams
from .osbmatch import match_shapes
from .raster import load_silhouette
from .render import mask_overlay_png, match_figure, merge_tree_figure, retrieval_grid_figure
from .rts import PipelineConfig, SpineParams, build_rts, load_rts, rts_to_dict, save_rts


def _pipeline_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threshold", type=int, default=128, help="binarization gray level")
    p.add_argument("--prune-significance", type=float, default=0.08)
    p.add_argument("--quantization", choices=("uneven", "uniform"), default="uneven")
    p.add_argument("--config", help="INI config file")
    p.add_argument("--section", default="DEFAULT", help="config section to use")


def _match_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--beta1", type=float, default=30.0)
    p.add_argument("--beta2", type=float, default=0.6)
    p.add_argument("--no-rotation-search", action="store_true")


def _resolve(args) -> tuple[PipelineConfig, MatchParams, bool]:
    if getattr(args, "config", None):
        return load_config(args.config, args.section)
    pipeline = PipelineConfig(
        threshold=getattr(args, "threshold", 128),
        prune_significance=getattr(args, "prune_significance", 0.08),
        quantization=getattr(args, "quantization", "uneven"),
        spine=SpineParams(),
    )
    params = MatchParams(
        beta1=getattr(args, "beta1", 30.0), beta2=getattr(args, "beta2", 0.6)
    )
    return pipeline, params, not getattr(args, "no_rotation_search", False)


def _build_one(path: str, pipeline: PipelineConfig):
    with open(path, "rb") as fh:
        shape = load_silhouette(
            fh.read(), threshold=pipeline.threshold,
            source_id=os.path.splitext(os.path.basename(path))[0],
        )
    return build_rts(shape, pipeline)


def _load_record(path: str, pipeline: PipelineConfig):
    if path.lower().endswith(".json"):
        return load_rts(path)
    return _build_one(path, pipeline)


def cmd_build(args) -> int:
    pipeline, _params, _rot = _resolve(args)
    rts = _build_one(args.image, pipeline)
    if args.output:
        save_rts(rts, args.output)
    else:
        json.dump(rts_to_dict(rts), sys.stdout)
        print()
    return 0


def cmd_match(args) -> int:
    pipeline, params, rotation = _resolve(args)
    x = _load_record(args.a, pipeline)
    y = _load_record(args.b, pipeline)
    res = match_shapes(x, y, params, rotation)
    doc = {
        "cost": res.global_cost,
        "raw_cost": res.raw_cost,
        "jumpcost": res.jumpcost,
        "correspondence": [list(p) for p in res.correspondence],
    }
    json.dump(doc, sys.stdout)
    print()
    if args.svg:
        match_figure(x, y, res).save(args.svg)
    return 0


def cmd_retrieve(args) -> int:
    pipeline, params, rotation = _resolve(args)
    query = _load_record(args.query, pipeline)
    dataset = load_dataset(args.gallery, threshold=pipeline.threshold)
    gallery = build_all(dataset, pipeline)
    ranked = retrieve(query, gallery, params, rotation)
    doc = [
        {"id": dataset.shapes[i][2], "label": dataset.shapes[i][1], "cost": c}
        for i, c in ranked
    ]
    out = json.dumps(doc, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        print(out)
    return 0


def cmd_eval(args) -> int:
    pipeline, params, rotation = _resolve(args)
    dataset = load_dataset(args.dataset, layout=args.layout, threshold=pipeline.threshold)
    report = evaluate(
        dataset, params, protocol=args.protocol, config=pipeline,
        include_self=not args.exclude_self, rotation_search=rotation,
    )
    doc = {
        "dataset": dataset.name,
        "n": report.n_queries,
        "topk_counts": report.topk_counts,
        "accuracy": report.accuracy,
        "bullseye": report.bullseye,
        "errors": [list(e) for e in report.errors],
        "include_self": report.include_self,
        "seconds": report.seconds,
        "table_row": report.table_row(),
    }
    out = json.dumps(doc, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    print(f"top-k counts: {report.topk_counts[:4]}")
    print(f"accuracy: {report.accuracy:.4f}  bullseye: {report.bullseye:.4f}")
    if args.svg:
        retrieval_grid_figure(report).save(args.svg)
    return 0


def cmd_generalize(args) -> int:
    pipeline, params, _rotation = _resolve(args)
    if os.path.isdir(args.shapes):
        dataset = load_dataset(args.shapes, threshold=pipeline.threshold)
        keep = [
            (shape, lab, sid)
            for shape, lab, sid in dataset.shapes
            if not args.label or lab == args.label
        ]
        if not keep:
            raise SkelshapeError(f"no shapes labeled {args.label!r} in {args.shapes}")
        records = [build_rts(s, pipeline) for s, _l, _sid in keep]
        label = args.label or keep[0][1]
    else:
        records = [load_rts(p) for p in args.shapes.split(",")]
        label = args.label or "class"
    grts, tree = generalize_set(records, label=label, params=params)
    save_grts(grts, args.output)
    print(f"prototype over {grts.count} shapes, {grts.n_endpoints} parts -> {args.output}")
    if args.tree_svg:
        merge_tree_figure(tree).save(args.tree_svg)
    return 0


def cmd_apply(args) -> int:
    pipeline, params, rotation = _resolve(args)
    grts = load_grts(args.grts)
    rts = _build_one(args.image, pipeline)
    with open(args.image, "rb") as fh:
        shape = load_silhouette(fh.read(), threshold=pipeline.threshold)
    result = apply_character(grts, rts, params, rotation)
    os.makedirs(args.output, exist_ok=True)
    mask_overlay_png(shape.foreground, result.mask, os.path.join(args.output, "overlay.png"))
    doc = {
        "total_cost": result.total_cost,
        "correspondence": [list(p) for p in result.correspondence],
        "unmatched_prototype_parts": list(result.unmatched_grts),
        "unmatched_instance_parts": list(result.unmatched_instance),
        "parts": [
            {
                "prototype": r.grts_index,
                "instance": r.instance_index,
                "distance": None if r.instance_index is None else r.distance,
            }
            for r in result.records
        ],
    }
    with open(os.path.join(args.output, "report.json"), "w") as fh:
        json.dump(doc, fh, indent=2)
    res = match_shapes(grts, rts, params, rotation)
    match_figure(grts.exemplar, rts, res).save(os.path.join(args.output, "figure.svg"))
    print(f"cost {result.total_cost:.4f}; wrote {args.output}/overlay.png, report.json, figure.svg")
    return 0


def cmd_complete(args) -> int:
    pipeline, params, rotation = _resolve(args)
    grts = load_grts(args.grts)
    with open(args.image, "rb") as fh:
        shape = load_silhouette(fh.read(), threshold=pipeline.threshold)
    rts = build_rts(shape, pipeline)
    result = complete_shape(grts, rts, shape.foreground, params, rotation)
    os.makedirs(args.output, exist_ok=True)
    mask_overlay_png(result.completed, result.added, os.path.join(args.output, "completed.png"))
    doc = {
        "total_cost": result.total_cost,
        "added_parts": list(result.unmatched_grts),
        "transform": {
            "scale": result.transform.scale,
            "rotation": result.transform.rotation,
            "translation": list(result.transform.translation),
        },
    }
    with open(os.path.join(args.output, "report.json"), "w") as fh:
        json.dump(doc, fh, indent=2)
    print(f"completed with {len(result.unmatched_grts)} added part(s) -> {args.output}/")
    return 0


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="skelshape", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a record from a silhouette image")
    p.add_argument("image")
    p.add_argument("-o", "--output")
    _pipeline_args(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("match", help="match two records (images or record JSON)")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--svg", help="write a correspondence figure")
    _pipeline_args(p)
    _match_args(p)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("retrieve", help="rank a gallery directory against a query")
    p.add_argument("query")
    p.add_argument("gallery")
    p.add_argument("-o", "--output")
    _pipeline_args(p)
    _match_args(p)
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("eval", help="retrieval evaluation over a dataset directory")
    p.add_argument("dataset")
    p.add_argument("--layout", choices=("tari56", "kimia99", "flat-labeled"), default="flat-labeled")
    p.add_argument("--protocol", choices=("topk", "bullseye"), default="topk")
    p.add_argument("--exclude-self", action="store_true")
    p.add_argument("-o", "--output")
    p.add_argument("--svg")
    _pipeline_args(p)
    _match_args(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("generalize", help="merge same-class shapes into a prototype")
    p.add_argument("shapes", help="dataset directory or comma-separated record JSONs")
    p.add_argument("--label", default="")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--tree-svg")
    _pipeline_args(p)
    _match_args(p)
    p.set_defaults(func=cmd_generalize)

    p = sub.add_parser("apply", help="project a prototype onto an instance image")
    p.add_argument("grts")
    p.add_argument("image")
    p.add_argument("-o", "--output", required=True)
    _pipeline_args(p)
    _match_args(p)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("complete", help="draw a prototype's missing parts onto a partial shape")
    p.add_argument("grts")
    p.add_argument("image")
    p.add_argument("-o", "--output", required=True)
    _pipeline_args(p)
    _match_args(p)
    p.set_defaults(func=cmd_complete)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except SkelshapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
