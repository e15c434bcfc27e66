import csv
import io
import json
import subprocess
import sys

import pytest

from comma.cli import main
from comma.instances import validate_result_document

from conftest import FIXTURES

FIG2 = str(FIXTURES / "crossing.json")


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_match_to_file(tmp_path, capsys):
    out = tmp_path / "result.json"
    code, _, _ = run(["match", "--instance", FIG2, "--radius", 10, "--out", out], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    validate_result_document(doc)
    assert doc["status"] == "feasible"
    assert [l["tau"] for l in doc["locations"]] == [5.0, 45.0]


def test_match_require_feasible(capsys):
    code, out, _ = run(["match", "--instance", FIG2, "--radius", 1, "--require-feasible"], capsys)
    assert code == 1 and json.loads(out)["status"] == "infeasible"
    code, _, _ = run(["match", "--instance", FIG2, "--radius", 1], capsys)
    assert code == 0


def test_match_strategies_and_naive(capsys):
    _, out, _ = run(["match", "--instance", FIG2, "--strategy", "earliest", "--naive"], capsys)
    assert [l["tau"] for l in json.loads(out)["locations"]] == [2.5, 42.5]


def test_baseline_endpoints_only(capsys):
    code, out, _ = run(["baseline", "--instance", FIG2, "--radius", 10, "--endpoints-only"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "infeasible" and doc["edges"] == 0


def test_baseline_sampled(capsys):
    code, out, _ = run(["baseline", "--instance", FIG2, "--sampling-distance", 1], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "feasible" and doc["candidates"] == 11 + 16  # x = 0..10 and x = 85..100


def test_gen_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        assert run(["gen", "--n", 1000, "--k", 100, "--r", 1, "--seed", 7, "--out", f], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert len(doc["nodes"]) == 1001 and len(doc["measurements"]) == 100


def test_gtfs(tmp_path, capsys):
    out = tmp_path / "g.json"
    code, _, _ = run(["gtfs", "--feed", FIXTURES / "gtfs_line", "--trip", "T1", "--radius", 10,
                      "--out", out], capsys)
    assert code == 0
    code, res, _ = run(["match", "--instance", out], capsys)
    assert json.loads(res)["status"] == "feasible"


def test_gtfs_errors(capsys):
    code, _, err = run(["gtfs", "--feed", FIXTURES / "gtfs_no_stop_times", "--trip", "T1",
                        "--radius", 10], capsys)
    assert code == 2 and "stop_times.txt" in err


def test_verify(tmp_path, capsys):
    res = tmp_path / "r.json"
    run(["match", "--instance", FIG2, "--out", res], capsys)
    code, out, _ = run(["verify", "--instance", FIG2, "--result", res], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["sequence"]["ok"] and rep["coverage"]["ok"]
    doc = json.loads(res.read_text())
    doc["locations"][1].update(tau=50.0, **{"lambda": 1.0, "x": 100.0})
    res.write_text(json.dumps(doc))
    code, out, _ = run(["verify", "--instance", FIG2, "--result", res], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["sequence"]["violations"][0]["kind"] == "travel_time"


def test_export(tmp_path, capsys):
    code, out, _ = run(["export", "--instance", FIG2, "--format", "geojson", "--with-candidates", 1],
                       capsys)
    doc = json.loads(out)
    roles = {f["properties"]["role"] for f in doc["features"]}
    assert code == 0 and roles == {"path", "measurement", "disk", "interval", "location", "candidate"}


def test_bench(tmp_path, capsys):
    out = tmp_path / "b.csv"
    code, _, _ = run(["bench", "--n", 200, "--k", 20, "--r", 1, "--d", "none", 0.1, "--seeds", "0..2",
                      "--with-naive", "--out", out], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == 3 * 3
    assert {r["algo"] for r in rows} == {"comma", "baseline"}
    assert all(r["t_naive_intervals"] for r in rows if r["algo"] == "comma")
    assert {r["d"] for r in rows if r["algo"] == "baseline"} == {"none", "0.1"}


def test_bench_parallel_same_rows(tmp_path, capsys):
    cols = ["n", "k", "r", "d", "seed", "algo", "status", "failed_index", "intervals", "candidates",
            "edges"]
    rows = []
    for jobs in (1, 2):
        out = tmp_path / f"b{jobs}.csv"
        run(["bench", "--n", 100, "--k", 10, "--r", 0.5, "--seeds", "0..3", "--jobs", jobs,
             "--out", out], capsys)
        rows.append([[r[c] for c in cols] for r in csv.DictReader(io.StringIO(out.read_text()))])
    assert rows[0] == rows[1]


@pytest.mark.parametrize("argv", [
    ["match", "--instance", "/does/not/exist.json"],
    ["match", "--instance", FIG2, "--radius", "-1"],
])
def test_input_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and err.startswith("comma match: error:")


def test_bad_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(["match", "--instance", bad], capsys)
    assert code == 2 and "error" in err


def test_unknown_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["match", "--instance", FIG2, "--bogus"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "comma", "match", "--instance", FIG2],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["status"] == "feasible"
