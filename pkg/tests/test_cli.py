import json
import subprocess
import sys
from pathlib import Path


from wavereduce.cli import main

ROOT = Path(__file__).resolve().parents[1]
PROBLEMS = ROOT / "problems"


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_reduce_radial(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, text, _ = run(["reduce", "--problem", PROBLEMS / "radial.txt", "--out", out], capsys)
    assert code == 0
    assert "phi_yy - phi_zz - (2/z)*phi_z = F(phi)" in text
    doc = json.loads(out.read_text())
    assert doc["classification"]["tag"] == "hyperbolic"
    assert doc["profile"]["reduced_equation"]["text"] == "phi_yy - phi_zz - (2/z)*phi_z = F(phi)"
    assert doc["meta"] == {"command": "reduce", "n": 3, "passed": True, "seed": 1729, "tolerance": 1e-09}


def test_reduce_boosted(capsys):
    code, text, _ = run(["reduce", "--problem", PROBLEMS / "radial.txt", "--frame", "boosted"], capsys)
    assert code == 0 and "hyperbolic" in text


def test_reduce_with_wrong_form_fails(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("y: x0\nz: x3\nshat: 1\n")
    code, text, _ = run(["reduce", "--problem", p], capsys)
    assert code == 1 and "Nonzero" in text


def test_empty_problem_is_input_error(tmp_path, capsys):
    p = tmp_path / "empty.txt"
    p.write_text("")
    code, _, err = run(["reduce", "--problem", p], capsys)
    assert code == 2 and "missing required key: y" in err


def test_line_numbers_reach_the_user(tmp_path, capsys):
    p = tmp_path / "dup.txt"
    p.write_text("y: x0\nz: x1\nz: x2\n")
    code, _, err = run(["reduce", "--problem", p], capsys)
    assert code == 2 and "line 3" in err


def test_check_compat_light_cone(tmp_path, capsys):
    out = tmp_path / "c.json"
    code, text, _ = run(
        ["check-compat", "--case", "hyperbolic", "--problem", PROBLEMS / "lightcone-compat.txt", "--out", out],
        capsys,
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["compat"]["passed"] and doc["compat"]["nilpotence"] == {"Phi": 3, "Psi": 3}


def test_check_compat_case_conflict(capsys):
    code, _, err = run(["check-compat", "--case", "elliptic", "--problem", PROBLEMS / "lightcone-compat.txt"], capsys)
    assert code == 2 and "disagrees" in err


def test_check_compat_failure(tmp_path, capsys):
    p = tmp_path / "fo.txt"
    p.write_text("V: v\nW: 0\n")
    code, text, _ = run(["check-compat", "--case", "first-order", "--problem", p], capsys)
    assert code == 1 and "FAIL" in text


def test_check_compat_closed_form_family(tmp_path, capsys):
    p = tmp_path / "s.txt"
    p.write_text("F: 1/(2*u + 2)\nlambda: 1\nN: 2\nC: 1\n")
    code, _, _ = run(["check-compat", "--case", "one-variable", "--problem", p], capsys)
    assert code == 0
    p.write_text("F: u^2\nlambda: 1\n")
    code, _, err = run(["check-compat", "--case", "one-variable", "--problem", p], capsys)
    assert code == 2 and "missing required key: Phi" in err


def test_lemmas(tmp_path, capsys):
    out = tmp_path / "l.json"
    code, text, _ = run(
        ["lemmas", "--problem", PROBLEMS / "lightcone-lemmas.txt", "--kmax", "4", "--out", out], capsys
    )
    assert code == 0
    doc = json.loads(out.read_text())
    names = [b["name"] for b in doc["lemmas"]]
    assert names == ["lemma2[v]", "lemma2[w]", "lemma3[v]", "lemma3[w]"]


def test_lemmas_bad_kmax(capsys):
    code, _, _ = run(["lemmas", "--problem", PROBLEMS / "lightcone-lemmas.txt", "--kmax", "0"], capsys)
    assert code == 2


def test_lift(tmp_path, capsys):
    out = tmp_path / "lift.json"
    code, text, _ = run(["lift", "--problem", PROBLEMS / "radial-lift.txt", "--out", out], capsys)
    assert code == 0
    lift = json.loads(out.read_text())["lift"]
    assert lift["status"] == "pass" and lift["samples"] == 100 and lift["max_residual"] < 1e-10


def test_lift_precondition_failure(tmp_path, capsys):
    p = tmp_path / "l.txt"
    p.write_text((PROBLEMS / "radial-lift.txt").read_text().replace("phi: (y - z)/z", "phi: y^3"))
    out = tmp_path / "o.json"
    code, text, _ = run(["lift", "--problem", p, "--out", out], capsys)
    assert code == 1
    assert json.loads(out.read_text())["lift"]["status"] == "precondition-failed"


def test_catalog_run_both(tmp_path, capsys):
    out = tmp_path / "cat.json"
    code, text, _ = run(["catalog", "run", "--frame", "both", "--out", out], capsys)
    assert code == 0
    assert text.count("[pass]") == 8
    assert len(json.loads(out.read_text())["catalog"]) == 8


def test_catalog_phi3_option(capsys):
    code, _, _ = run(["catalog", "run", "--phi3", "sin(u)"], capsys)
    assert code == 0
    code, _, _ = run(["catalog", "run", "--phi3", "y"], capsys)
    assert code == 2


def test_seed_changes_are_recorded(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["reduce", "--problem", PROBLEMS / "radial.txt", "--seed", "7", "--out", a], capsys)
    run(["reduce", "--problem", PROBLEMS / "radial.txt", "--seed", "7", "--out", b], capsys)
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["meta"]["seed"] == 7


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "wavereduce.cli", "reduce", "--problem", str(PROBLEMS / "radial.txt")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "result: PASS" in proc.stdout
