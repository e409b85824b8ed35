import numpy as np
from PIL import Image

import skelshape as ss
from skelshape.generalize import generalize_set, grts_from_rts
from skelshape.render import (
    SvgCanvas,
    mask_overlay_png,
    match_figure,
    merge_tree_figure,
    retrieval_grid_figure,
)

from conftest import class_shape


def test_svg_canvas_elements():
    c = SvgCanvas(100, 80)
    c.line((0, 0), (10, 10), color="red")
    c.polyline([(0, 0), (5, 5), (9, 2)])
    c.circle((4, 4), 2, fill="blue")
    c.text((1, 1), "hi & <bye>")
    s = c.to_string()
    assert s.startswith("<svg") and s.rstrip().endswith("</svg>")
    assert "<line" in s and "<polyline" in s and "<circle" in s
    assert "hi &amp; &lt;bye&gt;" in s


def test_match_figure(tmp_path, match_params):
    a = ss.build_rts(ss.shape_from_mask(class_shape("hammer"), source_id="a"))
    b = ss.build_rts(ss.shape_from_mask(class_shape("hammer", 1), source_id="b"))
    res = ss.match_shapes(a, b, match_params)
    fig = match_figure(a, b, res)
    out = tmp_path / "match.svg"
    fig.save(str(out))
    text = out.read_text()
    assert text.count("<circle") >= a.n_endpoints + b.n_endpoints
    assert "cost=" in text


def test_merge_tree_figure(tmp_path, match_params):
    recs = [
        ss.build_rts(ss.shape_from_mask(class_shape("hammer", k), source_id=f"h{k}"))
        for k in range(3)
    ]
    _g, tree = generalize_set(recs, label="hammer", params=match_params)
    fig = merge_tree_figure(tree)
    out = tmp_path / "tree.svg"
    fig.save(str(out))
    text = out.read_text()
    for k in range(3):
        assert f"h{k}" in text


def test_mask_overlay_png(tmp_path):
    fg = np.zeros((20, 30), dtype=bool)
    fg[5:15, 5:25] = True
    mask = np.zeros_like(fg)
    mask[8:12, 10:20] = True
    out = tmp_path / "overlay.png"
    mask_overlay_png(fg, mask, str(out))
    img = np.asarray(Image.open(out))
    assert img.shape == (20, 30, 3)
    assert img[10, 15].tolist() != [0, 0, 0]  # blended region
    assert img[0, 0].tolist() == [0, 0, 0]  # background untouched


def test_retrieval_grid_figure(tmp_path, match_params):
    report = ss.RetrievalReport(
        rankings={"a_0": [("a_0", 0.0), ("a_1", 0.3), ("b_0", 1.0)]},
        labels={"a_0": "a", "a_1": "a", "b_0": "b"},
        topk_counts=[1, 1],
        accuracy=1.0,
        bullseye=1.0,
        errors=[],
        include_self=True,
        n_queries=1,
    )
    fig = retrieval_grid_figure(report, k=3)
    out = tmp_path / "grid.svg"
    fig.save(str(out))
    assert "a_1" in out.read_text()
