from __future__ import annotations

import json
import subprocess
import sys

import jsonschema
import pytest

from cubecat.algebras import DIAMOND
from cubecat.cli import main, report_schema


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_term_eq_kleene_witness(capsys):
    code, out, _ = run(capsys, "term-eq", "--rules", "wec", "--sig", "jmr", "--theory", "canonical",
                       "--arity", "1", "x1/\\x1'", "0")
    assert code == 1 and "x1↦u" in out


def test_term_eq_boolean(capsys):
    code, out, _ = run(capsys, "term-eq", "--rules", "wec", "--sig", "jmr", "--theory", "boolean",
                       "--arity", "1", "x1/\\x1'", "0")
    assert code == 0 and out.startswith("equal")


def test_term_eq_associativity(capsys):
    code, _, _ = run(capsys, "term-eq", "--rules", "w", "--sig", "j", "--arity", "3",
                     "x1\\/(x2\\/x3)", "(x1\\/x2)\\/x3")
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["term-eq", "--rules", "w", "--sig", "j", "--arity", "2", "x2 ∨ x1", "x1"],
    ["term-eq", "--rules", "w", "--sig", "m", "--arity", "2", "x1 ∨ x2", "x1"],
    ["term-eq", "--rules", "c", "--sig", "j", "--arity", "1", "x1", "x1"],
    ["term-eq", "--rules", "w", "--sig", "j", "--arity", "1", "x1 ∨", "x1"],
    ["hom", "--rules", "wec", "--sig", "jmr", "3", "3", "--bound", "1000"],
    ["experiment", "a-homology", "--rules", "w", "--sig", "jm"],
    ["experiment", "a-homology"],
    ["nonsense"],
])
def test_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_custom_algebra(capsys, tmp_path):
    path = tmp_path / "diamond.json"
    path.write_text(json.dumps(DIAMOND.to_dict()))
    code, out, _ = run(capsys, "term-eq", "--rules", "wec", "--sig", "jmr", "--arity", "2",
                       "--algebra", str(path), "(x1 ∧ x1′) ∧ (x2 ∨ x2′)", "x1 ∧ x1′")
    assert code == 1 and "x1↦u, x2↦v" in out


@pytest.mark.parametrize("rules, sig, m, n, count", [
    ("w", "∅", 1, 1, 3),
    ("wec", "jmr", 1, 1, 6),
    ("e", "r", 0, 1, 2),
    ("wec", "jm", 2, 1, 6),
])
def test_hom_count(capsys, rules, sig, m, n, count):
    code, out, _ = run(capsys, "hom", "--rules", rules, "--sig", sig, str(m), str(n), "--count")
    assert code == 0 and out.strip() == str(count)


def test_hom_list_sorted_and_stable(capsys):
    _, first, _ = run(capsys, "hom", "--rules", "w", "--sig", "r", "1", "1", "--list")
    _, second, _ = run(capsys, "hom", "--rules", "w", "--sig", "r", "1", "1", "--list")
    assert first == second
    assert first.split() == ["(0)", "(x1)", "(x1′)", "(1)"]


def test_experiment_a_homology(capsys):
    code, out, _ = run(capsys, "experiment", "a-homology", "--rules", "w", "--sig", "∅")
    assert code == 0 and "Betti (1, 1, 1)" in out and "PASS" in out and "S²∨S¹" in out


def test_experiment_collapse(capsys):
    code, out, _ = run(capsys, "experiment", "contraction-collapse", "--rules", "wec", "--sig", "∅")
    assert code == 0 and "(x,y)" in out and "PASS" in out


def test_experiment_a_poset_dot(capsys, tmp_path):
    dot = tmp_path / "a.dot"
    code, out, _ = run(capsys, "experiment", "a-poset", "--rules", "we", "--sig", "r", "--dot", str(dot))
    assert code == 0
    text = dot.read_text()
    assert text.startswith('digraph "C(we,′)"') and '"(0,1)" -> "(x,x′)"' in text


def test_experiment_coslice(capsys):
    code, out, _ = run(capsys, "experiment", "coslice-check", "--rules", "w", "--sig", "∅", "--max-dim", "2")
    assert code == 0 and "29/29" in out


def test_axioms_exit_codes(capsys):
    assert run(capsys, "axioms", "--rules", "wec", "--sig", "jmr")[0] == 0
    code, out, _ = run(capsys, "axioms", "--rules", "wec", "--sig", "jmr", "--theory", "demorgan")
    assert code == 1 and "Kleene's law" in out


def test_factor(capsys):
    code, out, _ = run(capsys, "factor", "--rules", "we", "--sig", "r", "--arity", "2", "x2′", "x1")
    assert code == 0 and "iso: True" in out


def test_prop_suite_seeded(capsys):
    a = run(capsys, "prop-suite", "--seed", "3", "--pairs", "50", "--json")
    b = run(capsys, "prop-suite", "--seed", "3", "--pairs", "50", "--json")
    ra, rb = json.loads(a[1]), json.loads(b[1])
    assert a[0] == 0
    assert ra["results"] == rb["results"]


@pytest.mark.parametrize("argv", [
    ["term-eq", "--rules", "wec", "--sig", "jmr", "--arity", "1", "x1 ∧ x1′", "0"],
    ["hom", "--rules", "w", "--sig", "r", "2", "1", "--list"],
    ["axioms", "--rules", "we", "--sig", "jm"],
    ["factor", "--rules", "w", "--sig", "∅", "--arity", "2", "x1", "1", "x2"],
    ["experiment", "a-poset", "--rules", "w", "--sig", "∅"],
    ["experiment", "a-homology", "--rules", "we", "--sig", "r"],
    ["experiment", "contraction-collapse", "--rules", "wec", "--sig", "r"],
    ["experiment", "coslice-check", "--rules", "we", "--sig", "∅", "--max-dim", "1"],
])
def test_json_reports_validate_and_agree_with_text(capsys, argv):
    code_text, text, _ = run(capsys, *argv)
    code_json, out, _ = run(capsys, *argv, "--json")
    report = json.loads(out)
    jsonschema.validate(report, report_schema())
    assert code_text == code_json
    assert report["passed"] == (code_json == 0)


def test_table2_json(capsys):
    code, out, _ = run(capsys, "experiment", "table2", "--max-dim", "1", "--json")
    report = json.loads(out)
    assert code == 0 and len(report["results"]["rows"]) == 20
    assert all(r["matches"] for r in report["results"]["rows"])


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cubecat", "hom", "--rules", "w", "--sig", "∅", "1", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "3"
