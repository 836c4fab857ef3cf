from __future__ import annotations

import json
import subprocess
import sys

import pytest

from pva_lab.cli import main

from conftest import DATA


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count(capsys):
    assert run(capsys, "count", "--degree", "3")[:2] == (0, "172\n")
    assert run(capsys, "count", "--degree", "5")[:2] == (0, "1774\n")


def test_dims(capsys):
    code, out, _ = run(capsys, "dims", "--p", "2", "--dmax", "10")
    assert code == 0 and out.strip() == "2,0,4,0,4,2,4,2,6,2"
    code, out, _ = run(capsys, "dims", "--p", "2", "--dmax", "3", "--scalar")
    assert out.strip() == "1,0,2"


def test_flow(capsys):
    code, out, _ = run(capsys, "flow", "--bracket", "p2-defo3", "--hamiltonian", "q")
    assert code == 0 and out.strip() == "p_t = 0; q_t = -2*p[0,3]"
    code, out, _ = run(capsys, "flow", "--bracket", "p1", "--hamiltonian", "p^2/2")
    assert out.strip() == "p_t = p[1,0]; q_t = 0"
    code, out, _ = run(capsys, "flow", "--bracket", "p2-defo3", "--hamiltonian", "q", "--symbolic")
    assert out.strip() == "p_t = 0; q_t = -4/3*c3*p[0,3]"


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "--bracket", "plp", "--f", "p", "--g", "q")
    assert code == 0 and out.strip() == "q*l1 + p*l2 + q[1,0]"


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "jacobi", "--bracket", "plp")
    assert code == 0 and "0 nonzero coefficients" in out
    code, out, _ = run(capsys, "verify", "skew", "--bracket", "h23-plp-2")
    assert code == 0
    code, out, _ = run(capsys, "verify", "skew", "--bracket", str(DATA / "h23_p2_uncorrected.pva"))
    assert code == 1
    code, out, _ = run(capsys, "verify", "mokhov", "--bracket", "plp")
    assert code == 0
    code, out, _ = run(capsys, "verify", "mokhov", "--bracket", "plp", "--swap-b")
    assert code == 1 and "M2: " in out and "M3: 0 nonzero" in out


def test_verify_jacobi_failure_lists_residuals(capsys):
    code, out, _ = run(capsys, "verify", "jacobi", "--bracket", "h23-p1", "--show", "1")
    assert code == 1
    assert out.count("\n") == 2


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "nontrivial", "--base", "p1")
    assert code == 0
    assert "rank over the constants: 4 of 4" in out
    assert "A^{222}_{11} = c1*p + 1/2*c3" in out


def test_obstruction_p1(capsys):
    code, out, _ = run(capsys, "obstruction", "--base", "p1")
    assert code == 0
    assert "source 12*c2^2*q + 6*c2*c4; base contribution 0" in out
    assert "obstructed" in out


def test_obstruction_plp_without_bound(capsys):
    code, out, _ = run(capsys, "obstruction", "--base", "plp")
    assert code == 0
    assert "c1^2, c1*c2, c2^2" in out
    assert "--prolong" in out


def test_repro_single_claim(capsys):
    code, out, err = run(capsys, "repro", "ansatz-counts")
    assert code == 0
    doc = json.loads(out)
    assert doc["claims"][0]["claim_id"] == "ansatz-counts"
    assert doc["claims"][0]["status"] == "pass"
    assert "ansatz-counts: pass" in err


def test_repro_failing_claim_exits_one(capsys):
    code, out, _ = run(capsys, "repro", "mokhov-plp")
    assert code == 1
    assert json.loads(out)["claims"][0]["status"] == "fail"


@pytest.mark.parametrize("argv", [
    ["eval", "--bracket", "nope", "--f", "p", "--g", "q"],
    ["eval", "--bracket", "p1", "--f", "p +", "--g", "q"],
    ["count", "--degree", "4"],
    ["dims", "--p", "-1", "--dmax", "3"],
    ["repro", "no-such-claim"],
    ["verify", "mokhov", "--bracket", "h23-p1"],
    [],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_thread_setting_is_validated(capsys, monkeypatch):
    monkeypatch.setenv("PVA_LAB_THREADS", "many")
    assert run(capsys, "repro", "all")[0] == 2


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "pva_lab.cli", "count", "--degree", "3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.strip() == "172"
