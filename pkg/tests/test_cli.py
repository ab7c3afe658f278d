import csv
import json
import subprocess
import sys

import pytest

from zslice import cli


def run(*args):
    return cli.main(list(args))


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_lambda_map_grid(tmp_path):
    out = tmp_path / "map.csv"
    assert run("lambda-map", "--m", "1", "--kt", "-3:3:61", "--kx", "-3:3:61", "--ky", "0", "--out", str(out)) == 0
    rows = read_csv(out)
    assert len(rows) == 61 * 61
    for r in rows:
        kx, kt = float(r["kx"]), float(r["kt"])
        gap = kt * kt - kx * kx - 1
        expect = "P1" if gap > 1e-12 else "P2" if gap < -1e-12 else "Boundary"
        assert r["region"] == expect
        if r["region"] == "P2":
            assert float(r["re_lambda"]) == 0
        assert r["accuracy"] == "exact"


def test_lambda_map_regulated_rows_in_upper_half_plane(tmp_path):
    out = tmp_path / "map.csv"
    assert run("lambda-map", "--eps", "0.05", "--kx", "-1:1:5", "--ky", "-1:1:3", "--kt", "0:2:4", "--out", str(out)) == 0
    rows = read_csv(out)
    assert len(rows) == 60
    assert all(float(r["im_lambda"]) > 0 for r in rows)


def test_propagator_single_method(tmp_path):
    out = tmp_path / "p.json"
    assert run("propagator", "--method", "zform", "--point", "0.5,0,0.5,0.5", "--nodes", "16", "--out", str(out)) == 0
    rec = cli.ResultRecord.from_json(out.read_text())
    (entry,) = rec.outputs
    assert set(entry["values"]) == {"zform"}
    assert entry["values"]["zform"]["error"] >= 0


def test_propagator_all_reports_deviations(tmp_path):
    out = tmp_path / "p.json"
    code = run("propagator", "--point", "0.5,0,0.5,0.5", "--out", str(out))
    rec = json.loads(out.read_text())
    devs = rec["outputs"][0]["deviations"]
    assert set(devs) == {"zform-tform", "zform-fourd", "tform-fourd"}
    ok = all(d["within_tolerance"] for d in devs.values())
    assert code == (0 if ok else 1)


def test_propagator_invalid_eps_exit_2_and_no_file(tmp_path, capsys):
    out = tmp_path / "p.json"
    assert run("propagator", "--eps", "0", "--out", str(out)) == 2
    assert not out.exists()
    assert "eps" in capsys.readouterr().err


def test_bad_point_is_invalid_input(tmp_path):
    assert run("propagator", "--point", "1,2,3", "--out", str(tmp_path / "p.json")) == 2


@pytest.mark.parametrize("suite", ["algebra", "fieldops", "evolution", "oracle"])
def test_invariant_suites_pass(tmp_path, suite):
    out = tmp_path / "inv.json"
    assert run("invariants", "--suite", suite, "--out", str(out)) == 0
    rec = json.loads(out.read_text())
    assert rec["outputs"] and all(o["passed"] for o in rec["outputs"])
    assert all(o["suite"] == suite for o in rec["outputs"])


def test_evolution_suite_hermitian_residuals(tmp_path):
    out = tmp_path / "inv.json"
    run("invariants", "--suite", "evolution", "--out", str(out))
    rec = json.loads(out.read_text())
    herm = [o for o in rec["outputs"] if o["name"].startswith("hermitian") and o["comparison"] == "<="]
    assert herm and all(o["value"] <= 1e-10 for o in herm)


def test_unknown_suite(tmp_path):
    out = tmp_path / "inv.json"
    assert run("invariants", "--suite", "nope", "--out", str(out)) == 2
    assert not out.exists()


def test_oracle_default(tmp_path):
    out = tmp_path / "o.json"
    assert run("oracle", "--out", str(out)) == 0
    rec = cli.ResultRecord.from_json(out.read_text())
    assert len(rec.outputs) == 20
    assert max(r["max_deviation"] for r in rec.outputs) <= 1e-8
    assert rec.seed == 42 and "Philox" in rec.generator


def test_oracle_csv(tmp_path):
    out = tmp_path / "o.csv"
    assert run("oracle", "--format", "csv", "--count", "5", "--out", str(out)) == 0
    assert len(read_csv(out)) == 5


@pytest.mark.parametrize("args", [["--delta", "0"], ["--lattice", "20x20x20x20"], ["--lattice", "3x3"]])
def test_oracle_invalid_input(tmp_path, args):
    out = tmp_path / "o.json"
    assert run("oracle", *args, "--out", str(out)) == 2
    assert not out.exists()


def test_unwritable_output(tmp_path):
    assert run("oracle", "--out", str(tmp_path / "missing" / "o.json")) == 2


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"count": 3, "seed": 7}))
    out = tmp_path / "o.json"
    assert run("oracle", "--config", str(cfg), "--seed", "9", "--out", str(out)) == 0
    rec = json.loads(out.read_text())
    assert len(rec["outputs"]) == 3
    assert rec["seed"] == 9


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run("oracle", "--config", str(cfg), "--out", str(tmp_path / "o.json")) == 2


def test_record_round_trip(tmp_path):
    out = tmp_path / "p.json"
    run("propagator", "--point", "0.3,0.3,0.3,0.8", "--nodes", "16", "--nodes-4d", "16", "--out", str(out))
    text = out.read_text()
    rec = cli.ResultRecord.from_json(text)
    assert rec.to_json() == text
    v = rec.outputs[0]["values"]["tform"]["value"]
    assert isinstance(cli.uncplx(v), complex)
    assert rec.schema == cli.SCHEMA and "numpy" in rec.versions


def test_timing_is_opt_in(tmp_path):
    out = tmp_path / "o.json"
    run("oracle", "--count", "2", "--out", str(out))
    assert "wall_time" not in json.loads(out.read_text())
    run("oracle", "--count", "2", "--timing", "--out", str(out))
    assert json.loads(out.read_text())["wall_time"] >= 0


@pytest.mark.parametrize(
    "args",
    [
        ["oracle"],
        ["lambda-map", "--kx", "-2:2:11", "--kt", "-2:2:11"],
        ["invariants", "--suite", "oracle"],
    ],
)
def test_subprocess_runs_are_byte_identical(tmp_path, args):
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}"
        proc = subprocess.run([sys.executable, "-m", "zslice", *args, "--out", str(out)], capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
