import io
import json
import subprocess
import sys

import pytest

from hypgraph import families as fam
from hypgraph.cli import main
from hypgraph.experiments import CSV_HEADER
from hypgraph.io import load_graph, save_graph


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def test_gen_then_delta_and_diam(tmp_path):
    f = tmp_path / "g.txt"
    code, text = run(["gen", "--n", "60", "--p", "0.3", "--seed", "4", "--out", str(f)])
    assert code == 0
    info = json.loads(text)
    assert info["m"] == load_graph(f).m
    code, text = run(["delta", "--in", str(f), "--json", "--witness"])
    assert code == 0
    res = json.loads(text)
    assert text.endswith("\n") and text.count("\n") == 1
    assert set(res) >= {"delta_doubled", "delta", "witness"}
    code, naive = run(["delta", "--in", str(f), "--json", "--witness", "--algo", "naive"])
    assert json.loads(naive)["witness"] == res["witness"]
    code, text = run(["diam", "--in", str(f), "--json"])
    assert code == 0 and json.loads(text)["diameter"] in (2, 3, 4)


def test_delta_text_output(tmp_path):
    f = tmp_path / "c5.txt"
    save_graph(fam.cycle(5), f)
    code, text = run(["delta", "--in", str(f), "--witness"])
    assert code == 0
    assert text.splitlines()[0] == "delta_H = 0.5 (doubled 1)"


def test_diam_disconnected(tmp_path):
    f = tmp_path / "two.txt"
    save_graph(fam.disjoint_union(fam.path(3), fam.path(2)), f)
    code, text = run(["diam", "--in", str(f), "--json"])
    assert code == 0 and json.loads(text)["diameter"] == "inf"
    assert run(["diam", "--in", str(f)])[1] == "diameter = inf\n"


def test_predict_json():
    code, text = run(["predict", "--n", "3000", "--d", "400", "--json"])
    js = json.loads(text)
    assert code == 0
    assert (js["j"], js["case"], js["predicted_delta_doubled"]) == (2, "I", 2)
    code, text = run(["predict", "--n", "3000", "--p", "0.02", "--json"])
    assert code == 0 and json.loads(text)["case"] == "III"
    assert run(["predict", "--n", "3000"])[0] == 1
    assert run(["predict", "--n", "3000", "--p", "0"])[0] == 1


def test_probe(tmp_path):
    f = tmp_path / "t.txt"
    save_graph(fam.complete_binary_tree(4), f)
    forb = tmp_path / "forb.txt"
    forb.write_text("1\n")
    code, text = run(["probe", "--in", str(f), "--samples", "5", "--radius", "2", "--seed", "0", "--forbidden", str(forb)])
    assert code == 0
    lines = [json.loads(x) for x in text.splitlines()]
    assert len(lines) == 6
    assert all(x["vertex"] != 1 for x in lines[:5])
    assert lines[-1]["tree_fraction"] == 1.0


def test_exp_dense(tmp_path):
    out = tmp_path / "d.csv"
    code, text = run(["exp", "dense", "--n", "40", "--c", "1", "--trials", "20", "--seed", "9", "--out", str(out)])
    assert code == 0
    rows = out.read_text().splitlines()
    assert rows[0] == CSV_HEADER and len(rows) == 21
    js = json.loads(text)
    assert js["trials"] == 20 and js["violations"] == 0


def test_exp_regime(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"kind": "regime", "n": 120, "d": 30, "trials": 4, "seed": 1, "algo": "pruned", "threads": 2}))
    out = tmp_path / "r.csv"
    code, text = run(["exp", "regime", "--config", str(cfg), "--out", str(out)])
    assert code == 0
    assert "prediction" in json.loads(text)


def test_zero_trials(tmp_path):
    out = tmp_path / "z.csv"
    code, text = run(["exp", "dense", "--n", "40", "--c", "1", "--trials", "0", "--seed", "9", "--out", str(out)])
    assert code == 1 and json.loads(text)["trials"] == 0
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"n": 50, "p": 0.1, "trials": 0, "seed": 1}))
    code, text = run(["exp", "regime", "--config", str(cfg), "--out", str(out)])
    assert code == 1 and json.loads(text)["trials"] == 0


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("hypgraph v1\n4 1\n3 1\n")
    assert run(["delta", "--in", str(bad)])[0] == 1
    assert run(["delta", "--in", str(tmp_path / "missing.txt")])[0] == 1
    assert run(["bogus"])[0] == 1
    assert run(["gen", "--n", "0", "--p", "0.5", "--seed", "1", "--out", str(tmp_path / "x")])[0] == 1
    long = tmp_path / "long.txt"
    save_graph(fam.path(300), long)
    assert run(["diam", "--in", str(long)])[0] == 2
    cfg = tmp_path / "broken.json"
    cfg.write_text("{not json")
    assert run(["exp", "regime", "--config", str(cfg), "--out", str(tmp_path / "o.csv")])[0] == 1


def test_bound_violation_exit_code(tmp_path, monkeypatch):
    import hypgraph.experiments as exps

    monkeypatch.setattr(exps, "check_delta_diameter_bound", lambda dd, D: False)
    out = tmp_path / "v.csv"
    code, text = run(["exp", "dense", "--n", "30", "--c", "1", "--trials", "3", "--seed", "0", "--out", str(out)])
    assert code == 3
    assert json.loads(text)["violations"] == 3


def test_module_entry_point(tmp_path):
    r = subprocess.run(
        [sys.executable, "-m", "hypgraph", "predict", "--n", "150", "--p", str(1 - 2 / 150 ** 2), "--json"],
        capture_output=True, text=True,
    )
    assert r.returncode == 0
    assert json.loads(r.stdout)["case"] == "IV"
