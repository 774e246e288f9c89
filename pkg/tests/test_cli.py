import json
import subprocess
import sys

import pytest

from semgus.cli import EXIT, exit_status, main
from semgus.solve import SolveResult

from helpers import ROOT

P = ROOT / "problems"
solver = pytest.mark.solver


def run(capsys, *args):
    code = main(["solve", *map(str, args)])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_exit_status_is_a_function_of_kind():
    assert exit_status(SolveResult.unrealizable()) == 1
    assert exit_status(SolveResult.unknown("timeout")) == 2
    assert EXIT == {"realizable": 0, "unrealizable": 1, "unknown": 2}


def test_enum_prints_surface_and_listing(capsys):
    code, out, _ = run(capsys, P / "xor_one_example.sem", "--mode", "enum", "--max-size", "8")
    assert code == 0
    assert "term: while (x < y) do { x := (x | y) }" in out
    assert "listing: 1 2 6 7 4 9 6 7" in out


def test_json_report(capsys):
    code, out, _ = run(capsys, P / "xor_one_example.sem", "--mode", "enum", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1 and doc["status"] == "realizable"
    assert doc["listing"] == [1, 2, 6, 7, 4, 9, 6, 7] and doc["strategy"] == "enum"
    assert "seconds" in doc and "diagnostics" in doc


def test_enum_unknown_status(capsys):
    code, out, _ = run(capsys, P / "xor_gex.sem", "--mode", "enum", "--max-size", "6")
    assert code == 2 and "enumerationBound" in out


def test_emit_only_spawns_no_solver(capsys, tmp_path, monkeypatch):
    def boom(*a, **k):
        raise AssertionError("solver started")

    monkeypatch.setattr(subprocess, "Popen", boom)
    out_file = tmp_path / "out.smt2"
    code, _, _ = run(capsys, P / "xor_gex.sem", "--emit-only", out_file)
    assert code == 0
    assert out_file.read_text().startswith("(set-logic HORN)")


def test_emit_only_matches_golden(capsys, tmp_path):
    out_file = tmp_path / "g.smt2"
    run(capsys, P / "xor_gex.sem", "--rep", "array", "--sem", "vectorized", "--fuse", "--emit-only", out_file)
    assert out_file.read_text() == (ROOT / "tests" / "golden" / "xor_array_fused_vectorized.smt2").read_text()


def test_usage_errors(capsys, tmp_path):
    code, _, err = run(capsys, P / "xor_gex.sem", "--rep", "tree", "--fuse")
    assert code == 3 and "--fuse" in err
    code, _, err = run(capsys, tmp_path / "missing.sem")
    assert code == 3
    bad = tmp_path / "bad.sem"
    bad.write_text("(set-info :format 1)\n(declare-nonterminal E :input\n")
    code, _, err = run(capsys, bad)
    assert code == 3 and "line" in err
    code, _, err = run(capsys, P / "xor_gex.sem", "--mode", "cegis")
    assert code == 3
    code, _, err = run(capsys, P / "triple_rules.sem", "--sem", "vectorized")
    assert code == 3


def test_argparse_usage_error_status():
    with pytest.raises(SystemExit) as e:
        main(["solve", "x.sem", "--rep", "graph"])
    assert e.value.code == 3


@solver
def test_chc_unrealizable_xor(capsys):
    code, out, _ = run(capsys, P / "xor_gex.sem", "--mode", "chc", "--rep", "array", "--sem", "vectorized",
                       "--fuse", "--timeout", "600")
    assert code == 1 and out.startswith("unrealizable")


@solver
def test_cegis_limited_plus(capsys):
    code, out, _ = run(capsys, P / "limited_plus.sem", "--mode", "cegis", "--format", "json")
    doc = json.loads(out)
    assert code == 1 and doc["status"] == "unrealizable" and len(doc["examples"]) <= 6


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "semgus.cli", "solve", str(P / "xor_one_example.sem"),
                        "--mode", "enum"], capture_output=True, text=True)
    assert r.returncode == 0 and "realizable" in r.stdout
