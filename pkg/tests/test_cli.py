import csv
import json
import subprocess
import sys

import pytest

from margulis.cli import EXIT_CONFIG, EXIT_OK, EXIT_VERIFY, main
from margulis.schottky import data_path

MIXED = str(data_path("mixed_sign.json"))


def run(*args):
    return main([str(a) for a in args])


def test_spectrum_reference_pass(tmp_path, capsys):
    assert run("spectrum", "--max-len", 6, "--out", tmp_path) == EXIT_OK
    assert "PASS" in capsys.readouterr().out
    rows = list(csv.DictReader(open(tmp_path / "spectrum.csv")))
    assert list(rows[0]) == ["word", "length", "ell", "alpha", "alpha_over_ell"]
    ells = [round(float(r["ell"]), 9) for r in rows]
    assert ells == sorted(ells)
    data = json.load(open(tmp_path / "spectrum.json"))
    assert data["verdict"] == "PASS" and len(data["rows"]) == len(rows) == 234


def test_spectrum_mixed_fail(tmp_path, capsys):
    assert run("spectrum", "--max-len", 6, "--presentation", MIXED, "--out", tmp_path) == EXIT_VERIFY
    data = json.load(open(tmp_path / "spectrum.json"))
    assert data["verdict"] == "FAIL" and len(data["witnesses"]) == 2
    alphas = {r["word"]: r["alpha"] for r in data["rows"]}
    a, b = data["witnesses"]
    assert alphas[a] > 0 > alphas[b]


def test_max_len_zero_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run("spectrum", "--max-len", 0, "--out", tmp_path)
    assert exc.value.code == 2


def test_missing_presentation(tmp_path):
    assert run("spectrum", "--presentation", tmp_path / "nope.json", "--out", tmp_path) == EXIT_CONFIG
    bad = tmp_path / "bad.json"
    bad.write_text('{"generators": [{"linear": [1, 2], "translation": [0, 0, 0]}]}')
    assert run("spectrum", "--presentation", bad, "--out", tmp_path) == EXIT_CONFIG
    data = json.loads(data_path("reference.json").read_text())
    del data["disks"]["A"]
    bad.write_text(json.dumps(data))
    assert run("spectrum", "--presentation", bad, "--out", tmp_path) == EXIT_CONFIG


def test_plot_limit_points_and_determinism(tmp_path):
    assert run("plot", "--max-len", 1, "--out", tmp_path / "a") == EXIT_OK
    svg = (tmp_path / "a" / "limit_set.svg").read_text()
    assert svg.count('class="limit"') == 4
    assert run("plot", "--max-len", 1, "--out", tmp_path / "b") == EXIT_OK
    for name in ("limit_set.svg", "axes.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_plot_dots_inside_arcs(tmp_path, G_ref):
    import re

    import numpy as np

    assert run("plot", "--max-len", 4, "--out", tmp_path) == EXIT_OK
    svg = (tmp_path / "limit_set.svg").read_text()
    pts = re.findall(r'class="limit"[^>]*cx="([-\d.]+)" cy="([-\d.]+)"', svg)
    assert pts
    for cx, cy in pts:
        # invert the canvas map: 600 px square, margin 1.1
        x = (float(cx) - 300) / (300 / 1.1)
        y = -(float(cy) - 300) / (300 / 1.1)
        ang = np.arctan2(y, x)
        assert any(d.contains(ang, strict=True) for d in G_ref.disks.values())


def test_recurrence_batch(tmp_path):
    code = run("recurrence", "--random-timelike", 5, "--axis-probes", 2, "--null", 2,
               "--seed", 3, "--out", tmp_path)
    assert code == EXIT_OK
    data = json.load(open(tmp_path / "recurrence.json"))
    assert data["summary"]["timelike"] == {"probes": 5, "returned": 0}
    assert data["summary"]["spacelike"]["returned"] == data["summary"]["spacelike"]["probes"] == 8
    assert all(r["period_ok"] for r in data["reports"] if r["probe"].startswith("axis"))
    assert json.loads(json.dumps(data)) == data


def test_recurrence_deterministic(tmp_path):
    for sub in ("a", "b"):
        run("recurrence", "--random-timelike", 3, "--seed", 11, "--out", tmp_path / sub)
    a = json.load(open(tmp_path / "a" / "recurrence.json"))
    b = json.load(open(tmp_path / "b" / "recurrence.json"))
    a["config"]["out"] = b["config"]["out"] = ""
    assert a == b


def test_recurrence_empty_and_malformed(tmp_path):
    assert run("recurrence", "--out", tmp_path) == EXIT_OK
    data = json.load(open(tmp_path / "recurrence.json"))
    assert data["reports"] == [] and data["summary"] == {}
    probes = tmp_path / "p.json"
    probes.write_text(json.dumps([{"kind": "axis", "word": "aB"},
                                  {"kind": "state", "point": [0, 0, 0], "velocity": [0, 0, 1]}]))
    assert run("recurrence", "--probes", probes, "--out", tmp_path) == EXIT_OK
    probes.write_text(json.dumps([{"kind": "state", "point": [0, 0]}]))
    assert run("recurrence", "--probes", probes, "--out", tmp_path) == EXIT_CONFIG
    probes.write_text(json.dumps([{"kind": "axis", "word": "aA"}]))
    assert run("recurrence", "--probes", probes, "--out", tmp_path) == EXIT_CONFIG


def test_equivalence(tmp_path):
    assert run("equivalence", "--max-len", 3, "--out", tmp_path) == EXIT_OK
    rows = list(csv.DictReader(open(tmp_path / "equivalence.csv")))
    assert len(rows) == 24 and rows[0]["word"] == "a"
    data = json.load(open(tmp_path / "equivalence.json"))
    assert [d["word"] for d in data] == [r["word"] for r in rows]


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "margulis", "spectrum", "--max-len", "2", "--out", str(tmp_path)],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "PASS" in out.stdout
