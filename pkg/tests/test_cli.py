import csv
import json

import pytest

from minmaxmin.cli import main


def test_solve_generated_knapsack(capsys, tmp_path):
    out = tmp_path / "sol.json"
    code = main([
        "solve", "--gen", "knapsack", "--n", "20", "--seed", "1",
        "--k", "4", "--time-limit", "30", "--out", str(out),
    ])
    captured = capsys.readouterr().out
    assert code in (0, 3)
    assert "value" in captured and "root gap" in captured
    doc = json.loads(out.read_text())
    assert len(doc["tuple"]) == 4
    assert all(len(x) == 20 for x in doc["tuple"])


def test_solve_instance_file_k1_classical_robust(capsys, tmp_path):
    from minmaxmin import evaluate, gen_knapsack, save
    from minmaxmin.bnb import brute_force

    inst = gen_knapsack(12, 2)
    path = tmp_path / "inst.json"
    save(inst, path)
    code = main(["solve", "--instance", str(path), "--k", "1", "--time-limit", "30"])
    out = capsys.readouterr().out
    assert code == 0
    value = float([l for l in out.splitlines() if l.startswith("value")][0].split()[-1])
    _, opt1 = brute_force(inst.to_problem(), 1, cap=4000)
    assert value == pytest.approx(opt1, abs=1e-5)


def test_solve_missing_file_exits_2(capsys):
    assert main(["solve", "--instance", "/nonexistent/f.json", "--k", "1"]) == 2
    assert "error" in capsys.readouterr().err


def test_time_limit_exit_code(capsys):
    # zero time budget: incumbent printed, exit 3
    code = main([
        "solve", "--gen", "knapsack", "--n", "60", "--seed", "1",
        "--k", "2", "--time-limit", "0", "--gap-tol", "1e-12",
    ])
    out = capsys.readouterr().out
    if code == 3:  # the root may still close the gap on easy draws
        assert "value" in out


def test_bench_row_count_and_schema(capsys, tmp_path):
    out = tmp_path / "bench.csv"
    code = main([
        "bench", "--problem", "knapsack", "--sizes", "20", "--ks", "2,4",
        "--per-cell", "2", "--seed-base", "1", "--time-limit", "10",
        "--out", str(out), "--aggregate",
    ])
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 4  # 1 size x 2 ks x 2 instances
    assert list(rows[0].keys()) == [
        "problem", "n_or_V", "gamma", "k", "seed",
        "solved", "time_s", "nodes", "root_gap_pct", "opt_gap_pct",
    ]
    for row in rows:
        assert row["problem"] == "knapsack"
        assert float(row["root_gap_pct"]) >= 0.0
    agg = out.with_name(out.stem + "_agg.csv")
    assert agg.exists()
    assert len(list(csv.DictReader(agg.open()))) == 2


def test_bounds_recoverable_table(capsys):
    assert main(["bounds", "--example", "recoverable"]) == 0
    out = capsys.readouterr().out
    for cell in ("0.998n", "0.98n", "0.93n", "0.67n", "0.23n", "0.06n"):
        assert cell in out


def test_bounds_kadapt_mult(capsys):
    assert main(["bounds", "--kadapt", "--mode", "mult", "--mtilde", "2", "--a", "1"]) == 0
    out = capsys.readouterr().out
    assert "q = 0.666667" in out


def test_bounds_additive(capsys):
    assert main(["bounds", "--additive", "--M", "10", "--n", "1000", "--k", "999"]) == 0
    assert "0.01" in capsys.readouterr().out


def test_bounds_requires_a_mode(capsys):
    assert main(["bounds"]) == 2


def test_gen_writes_loadable_file(tmp_path, capsys):
    out = tmp_path / "gen.json"
    assert main(["gen", "--problem", "shortest_path", "--nodes", "8", "--gamma", "3",
                 "--seed", "2", "--out", str(out)]) == 0
    from minmaxmin import load

    inst = load(out)
    assert inst.num_nodes == 8


def test_out_dir_env_var(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("MINMAXMIN_OUT_DIR", str(tmp_path))
    assert main(["gen", "--problem", "knapsack", "--n", "10", "--seed", "1",
                 "--out", "sub/inst.json"]) == 0
    assert (tmp_path / "sub" / "inst.json").exists()


def test_bench_root_gap_zero_when_solved_at_root(tmp_path):
    # large k relative to the hull support: the approximation is exact at the
    # root, and those rows must carry an exactly zero root gap
    out = tmp_path / "root.csv"
    assert main([
        "bench", "--problem", "knapsack", "--sizes", "30", "--ks", "12",
        "--per-cell", "3", "--time-limit", "20", "--out", str(out),
    ]) == 0
    rows = list(csv.DictReader(out.open()))
    root_solved = [r for r in rows if r["solved"] == "1" and r["nodes"] == "1"]
    assert root_solved
    for row in root_solved:
        assert float(row["root_gap_pct"]) <= 1e-4
