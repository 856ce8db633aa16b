import csv
import json
import subprocess
import sys

import pytest

from bbqmis.cli import main
from bbqmis.graph import save_graph, unit_disk_graph


@pytest.fixture
def small_dataset(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"sizes": {"10": 2, "11": 1}, "seed": 2}))
    assert main(["gen", "--spec", str(spec), "--out", str(tmp_path / "ds")]) == 0
    return tmp_path / "ds"


def test_gen_writes_graphs(small_dataset):
    names = sorted(p.name for p in small_dataset.glob("udg_*.json"))
    assert names == ["udg_n10_000.json", "udg_n10_001.json", "udg_n11_000.json"]
    d = json.loads((small_dataset / names[0]).read_text())
    assert set(d) == {"n", "edges", "coords", "labels"}


def test_solve_report(small_dataset, tmp_path):
    out = tmp_path / "r.json"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bb": {"node_budget": 10}, "shots": 200}))
    rc = main(["solve", "--graph", str(small_dataset / "udg_n10_000.json"), "--solver", "bbq",
               "--sampler", "exact", "--config", str(cfg), "--seed", "4", "--out", str(out)])
    assert rc == 0
    rep = json.loads(out.read_text())
    assert rep["seed"] == 4 and rep["config"]["node_budget"] == 10
    assert set(rep["nodes_pruned"]) == {"non_improving", "unfeasible", "redundant"}
    assert rep["trace"] and {"id", "parent", "depth", "priority", "lb", "ub", "action"} <= set(rep["trace"][0])


def test_bench_report_budget(small_dataset, tmp_path, capsys):
    matrix = tmp_path / "m.json"
    matrix.write_text(json.dumps({"solvers": ["greedy", "bbq"], "samplers": ["exact", "rgreedy"]}))
    out = tmp_path / "res.csv"
    assert main(["bench", "--dataset", str(small_dataset), "--matrix", str(matrix), "--parallel", "2",
                 "--out", str(out), "--strict"]) == 0
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == "instance,n,m,solver,sampler,k,chi,nodes_explored,shots,wall_s,terminated_by,seed".split(",")
    assert len(rows) == 1 + 3 * 4
    assert (small_dataset / "udg_n10_000.chi.json").exists()
    assert main(["report", "--in", str(out), "--out", str(tmp_path / "sum.json")]) == 0
    summary = json.loads((tmp_path / "sum.json").read_text())
    assert set(summary["series"]) == {"greedy:exact", "greedy:rgreedy", "bbq:exact", "bbq:rgreedy"}
    assert main(["budget", "--nodes", "50", "--rate-hz", "5"]) == 0
    assert json.loads(capsys.readouterr().out)["shots"] == 255_000


def test_bench_no_timing_is_byte_stable(small_dataset, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert main(["bench", "--dataset", str(small_dataset), "--out", str(out), "--no-timing"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_strict_exit_code(tmp_path):
    ds = tmp_path / "ds"
    ds.mkdir()
    save_graph(unit_disk_graph([(0, 0), (5, 0), (5, 5.1)], 5.05), ds / "bad.json")
    matrix = tmp_path / "m.json"
    matrix.write_text(json.dumps({"solvers": ["greedy"], "samplers": ["qaoa"]}))
    args = ["bench", "--dataset", str(ds), "--matrix", str(matrix), "--out", str(tmp_path / "r.csv")]
    assert main(args) == 0
    assert main(args + ["--strict"]) != 0


def test_budget_from_report(tmp_path, capsys):
    rep = tmp_path / "r.json"
    rep.write_text(json.dumps({"nodes_explored": 8}))
    assert main(["budget", "--report", str(rep), "--rate-hz", "5"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["shots"] == 40_800 and 2.0 <= out["hours"] <= 6.0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "bbqmis", "budget", "--nodes", "20"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["shots"] == 102_000
