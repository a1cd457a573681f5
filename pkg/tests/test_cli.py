"""Exit codes, report shapes and determinism of the command line."""

import json

import pytest

from a4diff.cli import JobSpec, run_cli
from a4diff.gf import FieldSpec

S5 = '{"num":[0,0,0,0,0,1],"den":[1]}'
S3 = '{"num":[0,0,0,1],"den":[1]}'
S2S = '{"num":[0,1,1],"den":[1]}'


def run(capsys, *argv):
    code = run_cli(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------- analyze

def test_analyze_quintic_human(capsys):
    code, out, _ = run(capsys, "analyze", "--alpha", S5, "--verify")
    assert code == 0
    assert "genus 6" in out
    assert "N_{2,0,2}" in out and "M_{3,1,1}" in out and "S_0" in out
    assert "verification: PASS" in out
    assert "timings:" in out


def test_analyze_quintic_json(capsys):
    code, out, _ = run(capsys, "analyze", "--alpha", S5, "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["schema"] == 1
    assert obj["ram"]["genus"] == 6
    assert obj["verification"] == "skipped"
    assert obj["kG"]["total_dim"] == 6
    assert "timings" not in obj


def test_trivial_alpha_exits_2(capsys):
    code, _, err = run(capsys, "analyze", "--alpha", S2S)
    assert code == 2
    assert "xi^2 - xi" in err


def test_nonzero_trace_exits_2(capsys):
    code, _, err = run(capsys, "analyze", "--alpha", S3)
    assert code == 2
    assert "trace nonzero" in err


def test_odd_field_degree_exits_2(capsys):
    code, _, err = run(capsys, "analyze", "--alpha", S5, "--m", "7")
    assert code == 2
    assert "cube root" in err


def test_usage_errors_exit_1(capsys):
    assert run(capsys, "analyze", "--alpha", "{oops")[0] == 1
    assert run(capsys, "analyze")[0] == 1
    assert run(capsys)[0] == 1
    code, _, err = run(capsys, "analyze", "--alpha", '{"num":[1]}')
    assert code == 1 and "num" in err


def test_alpha_from_file_and_trunc(tmp_path, capsys):
    path = tmp_path / "alpha.json"
    path.write_text(S5, encoding="utf-8")
    code, out, _ = run(capsys, "analyze", "--alpha", f"@{path}",
                       "--trunc", "1", "--json")
    assert code == 0
    obj = json.loads(out)
    assert all(len(bp["theta"]) <= 1 for bp in obj["ram"]["special"])


# ---------------------------------------------------------------- hkg

def test_hkg_invariants_block(capsys):
    code, out, _ = run(capsys, "hkg", "--alpha", S5, "--json")
    assert code == 0
    h = json.loads(out)["hkg"]
    assert h["p"] == 5 and h["mu"] == [2, 3, 4]
    assert h["l"] == 1 and h["genus"] == 6


def test_hkg_rejects_orbit_data(capsys):
    # the degenerate-orbit family is branched beyond infinity
    code, out, _ = run(capsys, "examples", "--which", "2", "--n", "1",
                      "--json")
    alpha = json.dumps(json.loads(out)["job"]["alpha"])
    code, _, err = run(capsys, "hkg", "--alpha", alpha)
    assert code == 2
    assert "not an HKG datum" in err


# ---------------------------------------------------------------- examples

def test_examples_family1_verified(capsys):
    code, out, _ = run(capsys, "examples", "--which", "1", "--n", "1",
                       "--x", "1", "--verify", "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["ram"]["genus"] == 69
    assert obj["verification"]["status"] == "PASS"


def test_examples_family3_field_enlargement(capsys):
    code, out, _ = run(capsys, "examples", "--which", "3", "--m", "2",
                       "--json")
    assert code == 0
    obj = json.loads(out)
    # GF(4) has no band root outside {0, 1, zeta, zeta^2}
    assert obj["job"]["field"]["m"] == 4
    assert "psi" in obj["job"]["options"]["example"]


def test_examples_family3_bad_psi(capsys):
    code, _, err = run(capsys, "examples", "--which", "3", "--psi", "1")
    assert code == 2
    assert "psi" in err


# ---------------------------------------------------------------- verify

def test_verify_single_alpha(capsys):
    code, out, _ = run(capsys, "verify", "--alpha", S5, "--json")
    assert code == 0
    assert json.loads(out)["verification"]["status"] == "PASS"


def test_verify_mismatch_exits_3(capsys, monkeypatch):
    class Hollow:
        residual = "zero"
        multiplicities = {}
        def to_json(self):
            return {}
    monkeypatch.setattr("a4diff.cli.decompose_rep", lambda rep: Hollow())
    code, out, _ = run(capsys, "verify", "--alpha", S5, "--json")
    assert code == 3
    assert json.loads(out)["verification"]["status"] == "FAIL"


def test_json_reports_are_byte_identical(capsys):
    _, out1, _ = run(capsys, "analyze", "--alpha", S5, "--json", "--verify")
    _, out2, _ = run(capsys, "analyze", "--alpha", S5, "--json", "--verify")
    assert out1 == out2


def test_batch_runs_jobs_in_order(tmp_path, capsys):
    jobs = [
        {"m": 8, "alpha": json.loads(S5), "mode": "verify"},
        {"m": 8, "mode": "examples",
         "options": {"example": {"which": 2, "n": 1}}},
        {"m": 8, "alpha": json.loads(S2S), "mode": "verify"},
    ]
    path = tmp_path / "batch.jsonl"
    path.write_text("\n".join(json.dumps(j) for j in jobs),
                    encoding="utf-8")
    code, out, _ = run(capsys, "verify", "--batch", str(path))
    assert code == 2   # worst job: the trivial datum
    lines = out.strip().splitlines()
    assert len(lines) == 3
    assert json.loads(lines[0])["verification"]["status"] == "PASS"
    assert json.loads(lines[1])["ram"]["genus"] == 24
    assert "xi^2 - xi" in json.loads(lines[2])["error"]


def test_batch_accepts_json_array(tmp_path, capsys):
    path = tmp_path / "batch.json"
    path.write_text(json.dumps([{"m": 8, "alpha": json.loads(S5)}]),
                    encoding="utf-8")
    code, out, _ = run(capsys, "verify", "--batch", str(path))
    assert code == 0
    assert json.loads(out)["verification"]["status"] == "PASS"


def test_batch_accepts_shorthand_field_object(tmp_path, capsys):
    path = tmp_path / "batch.jsonl"
    path.write_text(json.dumps({"field": {"m": 8},
                                "alpha": json.loads(S5)}),
                    encoding="utf-8")
    code, out, _ = run(capsys, "verify", "--batch", str(path))
    assert code == 0
    assert json.loads(out)["verification"]["status"] == "PASS"


def test_batch_survives_malformed_jobs(tmp_path, capsys):
    # one healthy job between two broken ones; the pool must report
    # every line and the healthy job must still verify
    jobs = [
        {"field": {"degree": 8}, "alpha": json.loads(S5)},
        {"field": {"m": 8}, "alpha": json.loads(S5)},
        {"field": {"m": 7}, "alpha": json.loads(S5)},
        {"m": 8, "alpha": [1, 2, 3]},
    ]
    path = tmp_path / "batch.jsonl"
    path.write_text("\n".join(json.dumps(j) for j in jobs),
                    encoding="utf-8")
    code, out, _ = run(capsys, "verify", "--batch", str(path))
    assert code == 2   # worst failure: the odd field degree
    lines = [json.loads(l) for l in out.strip().splitlines()]
    assert len(lines) == 4
    assert "field must be an object" in lines[0]["error"]
    assert lines[1]["verification"]["status"] == "PASS"
    assert "cube root" in lines[2]["error"]
    assert "alpha" in lines[3]["error"]


# ---------------------------------------------------------------- zoo

def test_zoo_table_all_valid(capsys):
    code, out, _ = run(capsys, "zoo", "--m", "4", "--max-dim", "4",
                       "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["entries"] and all(e["valid"] for e in obj["entries"])
    sides = {e["side"] for e in obj["entries"]}
    assert sides == {"kH", "kG"}


def test_zoo_single_label_dump(capsys):
    code, out, _ = run(capsys, "zoo", "--label", "B[6n=6,mu=9]", "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["dim"] == 6 and obj["side"] == "kG"
    assert len(obj["generators"]["rho"]) == 6


# ---------------------------------------------------------------- jobspec

def test_jobspec_json_roundtrip():
    field = FieldSpec(8)
    job = JobSpec(field, None, "examples",
                  {"example": {"which": 2, "n": 1}, "trunc": 3})
    again = JobSpec.from_json(job.to_json())
    assert again.to_json() == job.to_json()
    assert again.field == field and again.mode == "examples"
