import json
import subprocess
import sys

import pytest

from obi.cli import CSV_FIELDS, format_rows, main, parse_csv_rows, run_sweep, SweepConfig, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve(capsys):
    code, out, _ = run(capsys, "solve", "--n", "12", "--a", "4")
    rec = json.loads(out)
    assert code == 0 and rec["beta"] == 8 and rec["optimal"]
    assert rec["predicted"]["source"].startswith("exact:n=qa")


def test_solve_rejects_a_equal_n_minus_1(capsys):
    code, _, err = run(capsys, "solve", "--n", "12", "--a", "11")
    assert code == 1 and "error" in err


def test_solve_n_2a(capsys):
    code, out, _ = run(capsys, "solve", "--n", "8", "--a", "4")
    assert json.loads(out)["beta"] == 4


def test_solve_budget_exit_code(capsys):
    code, out, _ = run(capsys, "solve", "--n", "24", "--a", "5", "--node-limit", "1")
    assert code == 2 and not json.loads(out)["optimal"]


def test_solve_general_steps(capsys):
    code, out, _ = run(capsys, "solve", "--n", "13", "--steps", "1", "3", "9")
    assert code == 0 and "predicted" not in json.loads(out)


def test_sweep_csv_rows_and_round_trip(capsys):
    code, out, _ = run(capsys, "sweep", "--a", "4", "--n", "8..20", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == ",".join(CSV_FIELDS) and len(lines) == 14
    rows = parse_csv_rows(out)
    for r in rows:
        assert r["optimal"]
        if r["predicted"] is not None:
            assert r["predicted"] == r["beta"]
    assert format_rows(rows, "csv") == out


def test_sweep_zero_budget_flags_rows(capsys):
    code, out, _ = run(capsys, "sweep", "--a", "5", "--n", "20..22", "--time-limit", "0")
    rows = [json.loads(line) for line in out.splitlines()]
    assert len(rows) == 3 and not any(r["optimal"] for r in rows)


def test_sweep_family_qa(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "qa", "--q", "3", "--k", "2..3")
    rows = [json.loads(line) for line in out.splitlines()]
    assert [(r["n"], r["beta"]) for r in rows] == [(21, 14), (30, 20)]


def test_sweep_output_file(tmp_path, capsys):
    path = tmp_path / "s.csv"
    code, out, _ = run(capsys, "sweep", "--a", "4", "--n", "8..10", "--format", "csv", "--output", str(path))
    assert code == 0 and out == "" and len(parse_csv_rows(path.read_text())) == 3
    code, _, err = run(capsys, "sweep", "--a", "4", "--n", "8", "--output", str(tmp_path / "no" / "x.csv"))
    assert code == 1 and "cannot write" in err


def test_sweep_parallel_matches_serial():
    pairs = [(n, 5) for n in range(10, 18)]
    serial = run_sweep(SweepConfig(pairs))
    parallel = run_sweep(SweepConfig(pairs, workers=3))
    strip = lambda rows: [{k: v for k, v in r.items() if k != "ms"} for r in rows]
    assert strip(serial) == strip(parallel)


def test_sweep_config_validation():
    with pytest.raises(UsageError):
        SweepConfig([])
    with pytest.raises(UsageError):
        SweepConfig([(8, 4)], node_limit=0)


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "8")
    rep = json.loads(out)
    assert code == 0 and rep["ok"]
    assert rep["checks"]["exact:n=2a"]["pass"] >= 1
    code, out, _ = run(capsys, "verify", "--max-n", "7")
    assert code == 1


def test_construct(capsys):
    code, out, _ = run(capsys, "construct", "3a-1", "--a", "6")
    rec = json.loads(out)
    assert code == 0 and rec["cost"] == 8 and rec["valid"]
    code, out, _ = run(capsys, "construct", "k(a-1)", "--a", "4", "--k", "3", "--s", "0")
    assert json.loads(out)["cost"] == 6
    code, _, err = run(capsys, "construct", "qa", "--a", "7", "--q", "3", "--k", "1", "--s", "0")
    assert code == 1 and "a = kq+1+s" in err


def test_export_dot(capsys):
    code, out, _ = run(capsys, "export-dot", "--n", "12", "--a", "4")
    assert code == 0 and out.startswith("digraph")
    assert out.count("->") == 24
    assert sum(1 for line in out.splitlines() if "[label=" in line) == 12
    code, out, _ = run(capsys, "export-dot", "--n", "12", "--a", "4", "--broadcast", "0:2,3:2,6:2,9:2")
    assert out.count("fillcolor") == 4


def test_transform(capsys):
    code, out, _ = run(capsys, "transform", "--n", "30", "--a", "6", "--broadcast", "2:7", "--explain")
    rec = json.loads(out)
    assert code == 0 and rec["output"] == "2:4,7:2,12:1" and rec["trace"]["steps"]
    code, out, _ = run(capsys, "transform", "--n", "10", "--a", "4", "--broadcast", "0:4")
    assert code == 3 and json.loads(out)["error"] == "LemmaGapError"
    code, _, _ = run(capsys, "transform", "--n", "12", "--a", "4", "--broadcast", "0:2,1:2")
    assert code == 1


def test_distance_check(capsys):
    code, out, _ = run(capsys, "distance-check", "--n", "20", "--a", "7")
    assert code == 0 and json.loads(out)["mismatch_count"] == 0
    code, _, _ = run(capsys, "distance-check", "--n", "12", "--a", "3")
    assert code == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "obi", "solve", "--n", "21", "--a", "7"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["beta"] == 14
