import json
import subprocess
import sys

import numpy as np
import pytest
from PIL import Image

from imbaclust.cli import main
from imbaclust.core import read_csv


def run(*args):
    return main([str(a) for a in args])


def test_gen(tmp_path):
    out = tmp_path / "f1.csv"
    assert run("gen", "--preset", "fig1", "--seed", 1, "--out", out) == 0
    P, _, lab = read_csv(out)
    assert P.shape == (1275, 2) and (lab == 1).sum() == 25
    assert run("gen", "--preset", "appendixG2", "--n", 3, "--out", out) == 0
    assert read_csv(out)[0].shape[0] == 810


def test_gen_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        run("gen", "--out", tmp_path / "x.csv")
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        run("gen", "--preset", "nope", "--out", tmp_path / "x.csv")


def test_cluster_four_points(tmp_path):
    data = tmp_path / "four.csv"
    data.write_text("0\n1\n3\n10\n")
    rep = tmp_path / "r.json"
    labels = tmp_path / "lab.csv"
    assert run("cluster", "--method", "approx", "--k", 2, "--in", data, "--out", labels, "--report", rep) == 0
    doc = json.loads(rep.read_text())
    assert doc["centers"] == [[1.0], [10.0]]
    assert doc["losses"]["relaxed"] == pytest.approx(0.75)
    assert doc["losses"]["fitting"] == pytest.approx(0.75)
    for key in ("method", "k", "seed", "version", "params", "silhouette", "wall_time_ms"):
        assert key in doc
    assert read_csv(labels)[2].tolist() == [0, 0, 0, 1]


def test_cluster_k_too_large(tmp_path, capsys):
    data = tmp_path / "four.csv"
    data.write_text("0\n1\n3\n10\n")
    assert run("cluster", "--method", "approx", "--k", 5, "--in", data) != 0
    assert "exceeds" in capsys.readouterr().err


def test_cluster_deterministic_reports(tmp_path):
    data = tmp_path / "f1.csv"
    run("gen", "--preset", "fig1", "--out", data)
    for method in ("approx-on-coreset", "kmeanspp", "bicriteria", "choice"):
        docs = []
        for i in range(2):
            rep = tmp_path / f"{method}{i}.json"
            assert run("cluster", "--method", method, "--k", 2, "--seed", 4, "--in", data, "--report", rep) == 0
            doc = json.loads(rep.read_text())
            doc.pop("wall_time_ms")
            doc["params"].pop("report")
            docs.append(json.dumps(doc, sort_keys=True))
        assert docs[0] == docs[1]


def test_cluster_exhaustive_budget_message(tmp_path, capsys):
    data = tmp_path / "f1.csv"
    run("gen", "--preset", "fig1", "--out", data)
    assert run("cluster", "--method", "approx", "--k", 2, "--in", data) == 1
    assert "coreset" in capsys.readouterr().err


def test_coreset_command(tmp_path):
    data = tmp_path / "f1.csv"
    run("gen", "--preset", "fig1", "--out", data)
    out = tmp_path / "cs.csv"
    assert run("coreset", "--k", 2, "--mode", "practical", "--seed", 3, "--in", data, "--out", out) == 0
    side = json.loads((tmp_path / "cs.csv.json").read_text())
    assert side["lambda"] == 128 and side["seed"] == 3
    _, w, _ = read_csv(out)
    assert abs(w.sum() - 1275) < 1e-9

    small = tmp_path / "small.csv"
    run("gen", "--preset", "appendixG1", "--n", 2, "--out", small)
    assert run("coreset", "--k", 2, "--in", small, "--out", out, "--sidecar", tmp_path / "s.json") == 0
    _, w, _ = read_csv(out)
    assert w.shape[0] == 52 and np.all(w == 1.0)


def _two_color_png(path):
    rng = np.random.default_rng(0)
    img = np.empty((64, 64, 3), dtype=np.uint8)
    img[:] = (250, 250, 10)
    img[rng.random((64, 64)) < 0.1] = (0, 0, 128)
    Image.fromarray(img).save(path)
    return img


def test_quantize_command(tmp_path):
    src = tmp_path / "two.png"
    img = _two_color_png(src)
    out = tmp_path / "q.png"
    assert run("quantize", "--method", "flat", "--k", 2, "--in", src, "--out", out) == 0
    assert np.array_equal(np.asarray(Image.open(out)), img)

    big = tmp_path / "big.png"
    Image.fromarray(np.random.default_rng(1).integers(0, 256, (512, 512, 3), dtype=np.uint8)).save(big)
    out = tmp_path / "q.ppm"
    rep = tmp_path / "q.json"
    assert run("quantize", "--method", "divisive", "--depth", 4, "--border-strip", 1,
               "--in", big, "--out", out, "--report", rep) == 0
    doc = json.loads(rep.read_text())
    assert doc["output_shape"] == [510, 510] and doc["colors_out"] <= 16


def test_quantize_errors(tmp_path):
    bad = tmp_path / "bad.png"
    bad.write_bytes(b"not an image")
    assert run("quantize", "--method", "flat", "--k", 2, "--in", bad, "--out", tmp_path / "o.png") == 1
    src = tmp_path / "two.png"
    _two_color_png(src)
    assert run("quantize", "--method", "flat", "--in", src, "--out", tmp_path / "o.png") == 1


def test_repro(tmp_path, monkeypatch):
    monkeypatch.setenv("IMBACLUST_THREADS", "2")
    out = tmp_path / "rep"
    assert run("repro", "--experiment", "fig1", "--runs", 4, "--seed", 10, "--out", out) == 0
    summary = json.loads((out / "summary.json").read_text())
    groups = {g["method"]: g for g in summary["groups"]}
    assert set(groups) == {"approx-on-coreset", "kmeans"}
    assert 0.0 <= groups["approx-on-coreset"]["separation_rate"] <= 1.0
    rows = (out / "runs.csv").read_text().strip().splitlines()
    assert len(rows) == 1 + 4 * 2
    assert rows[1].split(",")[2] == "10"  # per-run seed = seed + run


def test_repro_single_run_summary_equals_run(tmp_path):
    out = tmp_path / "rep"
    assert run("repro", "--experiment", "appendixG1", "--runs", 1, "--out", out) == 0
    summary = json.loads((out / "summary.json").read_text())
    import csv
    with open(out / "runs.csv") as fh:
        rows = list(csv.DictReader(fh))
    for g in summary["groups"]:
        row = next(r for r in rows if r["method"] == g["method"])
        loss = float(row["loss_fitting"])
        assert g["loss"] == {"median": loss, "p25": loss, "p75": loss}
        assert g["separation_rate"] == float(row["separated"])
    approx = next(g for g in summary["groups"] if g["method"] == "approx")
    assert approx["loss_normalized"]["median"] == 1.0


def test_repro_tree_and_deterministic(tmp_path):
    docs = []
    for i in range(2):
        out = tmp_path / f"rep{i}"
        assert run("repro", "--experiment", "appendixG2", "--runs", 2, "--out", out) == 0
        with open(out / "runs.csv") as fh:
            docs.append([line.rsplit(",", 1)[0] for line in fh])  # drop time_ms
    assert docs[0] == docs[1]
    assert docs[0][0].startswith("config,run,seed,method,loss_variance")


def test_repro_unknown_experiment(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run("repro", "--experiment", "fig9", "--out", tmp_path)
    assert exc.value.code == 2


def test_entry_point(tmp_path):
    out = tmp_path / "g.csv"
    res = subprocess.run([sys.executable, "-m", "imbaclust.cli", "gen", "--preset", "fig2", "--n", "10",
                          "--out", str(out)], capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert read_csv(out)[0].shape[0] == 35
