import json

import numpy as np
import pytest

from skelshape.cli import main
from skelshape.shapegen import make_shape, write_pgm


@pytest.fixture(scope="module")
def shape_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli_shapes")
    for cls, base in (("hammer", 13000), ("star", 8000)):
        for k in range(3):
            write_pgm(make_shape(cls, base + k), str(d / f"{cls}_{k:02d}.pgm"))
    return d


def test_build_writes_record(shape_dir, tmp_path, capsys):
    out = tmp_path / "r.json"
    rc = main(["build", str(shape_dir / "hammer_00.pgm"), "-o", str(out)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["n"] >= 2
    assert len(doc["features"][0]["lhat"]) == 50
    assert {"x1", "y1", "x2", "y2"} == set(doc["spine"])


def test_match_outputs_cost_and_pairs(shape_dir, tmp_path, capsys):
    a, b = shape_dir / "hammer_00.pgm", shape_dir / "hammer_01.pgm"
    svg = tmp_path / "fig.svg"
    rc = main(["match", str(a), str(b), "--beta1", "30", "--beta2", "0.6", "--svg", str(svg)])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["cost"] >= 0
    assert all(len(p) == 2 for p in doc["correspondence"])
    assert svg.exists()


def test_match_accepts_record_json(shape_dir, tmp_path, capsys):
    r = tmp_path / "a.json"
    assert main(["build", str(shape_dir / "star_00.pgm"), "-o", str(r)]) == 0
    rc = main(["match", str(r), str(r)])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["cost"] == pytest.approx(0.0, abs=1e-12)


def test_retrieve(shape_dir, tmp_path, capsys):
    out = tmp_path / "ranked.json"
    rc = main(["retrieve", str(shape_dir / "hammer_00.pgm"), str(shape_dir), "-o", str(out)])
    assert rc == 0
    ranked = json.loads(out.read_text())
    assert ranked[0]["id"] == "hammer_00"
    assert ranked[0]["cost"] == pytest.approx(0.0, abs=1e-12)
    assert len(ranked) == 6


def test_eval(shape_dir, tmp_path, capsys):
    out = tmp_path / "report.json"
    svg = tmp_path / "grid.svg"
    rc = main(["eval", str(shape_dir), "-o", str(out), "--svg", str(svg)])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert 0 <= doc["accuracy"] <= 1
    assert doc["n"] == 6
    assert "table_row" in doc
    assert svg.exists()


def test_generalize_apply_complete(shape_dir, tmp_path, capsys):
    grts_path = tmp_path / "star.json"
    tree_svg = tmp_path / "tree.svg"
    rc = main([
        "generalize", str(shape_dir), "--label", "star",
        "-o", str(grts_path), "--tree-svg", str(tree_svg),
    ])
    assert rc == 0
    doc = json.loads(grts_path.read_text())
    assert doc["count"] == 3
    assert tree_svg.exists()

    apply_dir = tmp_path / "applied"
    rc = main(["apply", str(grts_path), str(shape_dir / "star_01.pgm"), "-o", str(apply_dir)])
    assert rc == 0
    assert (apply_dir / "overlay.png").exists()
    assert (apply_dir / "figure.svg").exists()
    report = json.loads((apply_dir / "report.json").read_text())
    assert "total_cost" in report and "parts" in report

    done_dir = tmp_path / "completed"
    rc = main(["complete", str(grts_path), str(shape_dir / "star_02.pgm"), "-o", str(done_dir)])
    assert rc == 0
    assert (done_dir / "completed.png").exists()
    rep2 = json.loads((done_dir / "report.json").read_text())
    assert "transform" in rep2


def test_error_exits_nonzero(tmp_path, capsys):
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"junk")
    rc = main(["build", str(bad)])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_config_file_drives_params(shape_dir, tmp_path, capsys):
    cfg = tmp_path / "cfg.ini"
    cfg.write_text("[DEFAULT]\nbeta1 = 0\nbeta2 = 0\n")
    rc = main([
        "match", str(shape_dir / "hammer_00.pgm"), str(shape_dir / "star_00.pgm"),
        "--config", str(cfg),
    ])
    assert rc == 0
    no_weights = json.loads(capsys.readouterr().out)["cost"]
    rc = main(["match", str(shape_dir / "hammer_00.pgm"), str(shape_dir / "star_00.pgm")])
    assert rc == 0
    default = json.loads(capsys.readouterr().out)["cost"]
    assert no_weights != default
