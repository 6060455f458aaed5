import json
import subprocess
import sys

import pytest

from ncs4.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    data = json.loads(out)
    assert data["schema"] == "ncs4/1"
    return code, data


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "all", "--delta", "(1+T^2)^2", "--seed", "7")
    assert code == 0
    assert "all checks passed" in out
    assert "fail" not in out.replace("failed", "")


def test_verify_connection_line(capsys):
    code, out, _ = run(capsys, "verify", "connection", "--delta", "1")
    assert code == 0
    assert "levi-civita-unique: pass (Koszul = closed form)" in out


def test_verify_rejects_non_unit(capsys):
    code, _, err = run(capsys, "verify", "all", "--delta", "T")
    assert code == 2
    assert "UnsupportedDelta" in err


def test_verify_parse_error(capsys):
    code, _, err = run(capsys, "verify", "algebra", "--delta", "(1+T^2")
    assert code == 2
    assert "ParseError" in err


def test_verify_json_shape(capsys):
    code, data = run_json(capsys, "verify", "derivations", "--delta", "1+T^2")
    assert code == 0 and data["exit_code"] == 0
    for c in data["checks"]:
        assert set(c) == {"id", "ref", "status", "detail"}
        assert c["status"] == "pass"


def test_verify_formal_skips_polynomial_checks(capsys):
    code, data = run_json(capsys, "verify", "trace", "--alpha", "(1/2)*(T^2-1)")
    assert code == 0
    status = {c["id"]: c["status"] for c in data["checks"]}
    assert status["trace-commutator"] == "skip"
    assert status["euler-characteristic"] == "pass"


def test_json_is_deterministic(capsys):
    argv = ("verify", "all", "--delta", "(1+T^2)", "--seed", "3", "--json")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_same_seed_same_report(capsys):
    _, a = run_json(capsys, "verify", "algebra", "--seed", "1")
    _, b = run_json(capsys, "verify", "algebra", "--seed", "1")
    assert a == b


@pytest.mark.parametrize("argv", [("--delta", "(1+T^2)^5"), ("--N", "3"),
                                  ("--alpha", "(1/2)*(T^2-1)")])
def test_gcb_chi_two(capsys, argv):
    code, data = run_json(capsys, "gcb", *argv)
    assert code == 0
    assert data["chi"] == "2" and data["exact"] is True
    assert data["alpha_at_1"] == "0" and data["alpha_at_minus1"] == "0"
    assert "num" in data["integrand"]


def test_gcb_text(capsys):
    code, out, _ = run(capsys, "gcb", "--delta", "(1+T^2)^5")
    assert code == 0
    assert "chi = 2 (exact)" in out


def test_gcb_alpha_boundary(capsys):
    code, out, err = run(capsys, "gcb", "--delta", "(1-T^2)")
    assert code == 1
    assert "AlphaBoundaryNonzero" in err and out == ""
    code, data = run_json(capsys, "gcb", "--delta", "(1-T^2)")
    assert code == 1
    assert data["alpha_at_1"] == "1" and data["alpha_at_minus1"] == "-1"


def test_gcb_numeric(capsys):
    code, out, _ = run(capsys, "gcb", "--N", "1", "--numeric")
    assert code == 0
    assert "agrees" in out


def test_gcb_conflicting_flags(capsys):
    code, _, err = run(capsys, "gcb", "--N", "1", "--delta", "1")
    assert code == 2


def test_connection(capsys):
    code, data = run_json(capsys, "connection", "--delta", "2*(1-T^2)", "--compare-closed-form")
    assert code == 0
    assert data["metric_compatible"] and data["torsion_free"]
    assert data["closed_form_mismatches"] == []
    assert len(data["table"]) == 16


def test_curvature(capsys):
    code, data = run_json(capsys, "curvature", "--delta", "1+T^2")
    assert code == 0
    assert data["closed_form_agrees"] is True
    assert len(data["components"]) == 24


def test_curvature_text(capsys):
    code, out, _ = run(capsys, "curvature")
    assert code == 0
    assert "S = 12" in out
    assert "integrand = 24" in out


def test_trace(capsys):
    code, out, _ = run(capsys, "trace", "1")
    assert code == 0
    assert out.strip() == "tau = (8/3)*pi^2"
    code, data = run_json(capsys, "trace", "(1-T^2)^-1")
    assert data["value"]["text"] == "(4)*pi^2"


def test_trace_divergent(capsys):
    code, _, err = run(capsys, "trace", "(1-T^2)^-2")
    assert code == 1
    assert "DivergentIntegral" in err


def test_trace_numeric(capsys):
    code, out, _ = run(capsys, "trace", "Z Zs", "--numeric")
    assert code == 0
    assert "numeric" in out


def test_center(capsys):
    code, out, _ = run(capsys, "center", "T^2")
    assert code == 0
    assert "(-1) |Z|^2 |W|^0 T^0" in out
    code, out, _ = run(capsys, "center", "Z")
    assert code == 1


def test_mul(capsys):
    code, out, _ = run(capsys, "mul", "W", "Z")
    assert code == 0
    assert out.strip() == "q*Z W"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ncs4", "mul", "Z", "Zs"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.strip() == "Z Zs"
