"""End-to-end checks of the walkerhol executable."""

import json
import os
import pathlib
import subprocess

import jsonschema
import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]
CORPUS = ROOT / "corpus"
DATA = ROOT / "tests" / "data"
CLI = os.environ.get("WALKERHOL_CLI", str(ROOT / "build" / "tools" / "walkerhol"))
SCHEMA = json.loads((ROOT / "schema" / "report.schema.json").read_text())


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("WH_TOL", None)
    full_env.update(env or {})
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, env=full_env)


def test_analyze_ppwave_is_type_2():
    r = run("analyze", CORPUS / "ppwave_n2.wh", "--curves", 16)
    assert r.returncode == 0, r.stderr
    report = json.loads(r.stdout)
    jsonschema.validate(report, SCHEMA)
    assert report["holonomy"]["type"] == 2
    assert report["holonomy"]["orthogonal_part_dim"] == 0
    assert report["propositions"]["prop1"]["verdict"] is True


def test_analyze_flat_is_indeterminate():
    r = run("analyze", DATA / "flat_n2.wh", "--curves", 8)
    assert r.returncode == 2
    report = json.loads(r.stdout)
    jsonschema.validate(report, SCHEMA)
    assert report["holonomy"]["type"] is None
    assert report["holonomy"]["weakly_irreducible"] is False


def test_malformed_profile_exits_1(tmp_path):
    spec = tmp_path / "bad.wh"
    spec.write_text('n = 2\nf = "x1^^2"\n')
    r = run("analyze", spec)
    assert r.returncode == 1
    assert "offset" in r.stderr
    assert r.stdout == ""


def test_missing_file_and_bad_flags_exit_1(tmp_path):
    assert run("analyze", tmp_path / "missing.wh").returncode == 1
    assert run("analyze", DATA / "flat_n2.wh", "--point", "1,2").returncode == 1
    assert run("analyze", DATA / "flat_n2.wh", "--tol", "-1").returncode == 1
    assert run("frobnicate").returncode == 1


def test_output_is_byte_identical():
    args = ("analyze", CORPUS / "conformal_type3_n2.wh", "--curves", 12, "--seed", 7)
    first, second = run(*args), run(*args)
    assert first.returncode == 0
    assert first.stdout == second.stdout


def test_seed_changes_the_sample():
    a = run("analyze", CORPUS / "walker_n4.wh", "--curves", 4, "--seed", 1)
    b = run("analyze", CORPUS / "walker_n4.wh", "--curves", 4, "--seed", 2)
    assert json.loads(a.stdout)["points"] != json.loads(b.stdout)["points"]


def test_wh_tol_override():
    r = run("analyze", CORPUS / "ppwave_n2.wh", "--curves", 4, env={"WH_TOL": "1e-6"})
    assert json.loads(r.stdout)["provenance"]["tol"] == 1e-6
    r = run("analyze", CORPUS / "ppwave_n2.wh", "--curves", 4, "--tol", "1e-4", env={"WH_TOL": "1e-6"})
    assert json.loads(r.stdout)["provenance"]["tol"] == 1e-4
    assert run("analyze", CORPUS / "ppwave_n2.wh", env={"WH_TOL": "nope"}).returncode == 1


def test_text_output():
    r = run("analyze", CORPUS / "ppwave_n2.wh", "--curves", 4, "--text")
    assert r.returncode == 0
    assert "holonomy type: 2" in r.stdout
    assert run("analyze", CORPUS / "ppwave_n2.wh", "--json", "--text").returncode == 1


@pytest.mark.parametrize("spec", [CORPUS / "ppwave_n2.wh", DATA / "flat_n2.wh"])
def test_verify_passes(spec):
    r = run("verify", spec, "--points", 4)
    assert r.returncode == 0, r.stdout
    assert "FAIL" not in r.stdout


def test_verify_degenerate_screen(tmp_path):
    spec = tmp_path / "degenerate.wh"
    spec.write_text('n = 2\nf = "x1^2"\ng_1_1 = "x1 - 0.5"\n')
    r = run("verify", spec)
    assert r.returncode == 1
    assert "screen_positive_definite" in r.stdout and "FAIL" in r.stdout


def test_decompose():
    r = run("decompose", CORPUS / "ppwave_n2.wh", "--point", "0,1,2,0")
    assert r.returncode == 0
    d = json.loads(r.stdout)
    assert set(["r_h", "p_map", "t_sym", "lambda", "l_row", "route_residual"]) <= set(d)
    assert d["lambda"] == 0.0
    assert d["l_row"] == [0.0, 0.0]
    assert sum(d["t_sym"], []) == pytest.approx([-1.0, 0.0, 0.0, -1.0], abs=1e-12)

    flat = json.loads(run("decompose", DATA / "flat_n2.wh", "--point", "0,1,2,0").stdout)
    assert flat["t_sym"] == [[0.0, 0.0], [0.0, 0.0]]

    bent = json.loads(run("decompose", CORPUS / "x0_coupled_n2.wh", "--point", "0,1,1,0").stdout)
    assert bent["l_row"] == pytest.approx([-1.0, 0.0], abs=1e-12)


def test_every_corpus_report_validates():
    for spec in sorted(CORPUS.glob("*.wh")):
        r = run("analyze", spec, "--curves", 4, "--samples", 2)
        assert r.returncode in (0, 2), (spec, r.stderr)
        jsonschema.validate(json.loads(r.stdout), SCHEMA)
