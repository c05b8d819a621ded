import json
import subprocess
import sys

import pytest

from dfstab.cli import main, run_command
from dfstab.exactalg import X
from dfstab.ore import OreOp, adjoint, apply
from dfstab.parse import parse_operator, parse_poly, parse_ratfun
from dfstab.ratfun import RatFun
from dfstab.stability import ChainStep, DELTA1, verify_chain_identity, witness_holds


def run(*argv):
    lines: list[str] = []
    code = run_command(list(argv), out=lines.append)
    return code, "\n".join(lines)


def run_json(*argv):
    code, text = run(*argv)
    assert code == 0, text
    return json.loads(text)


# -- examples ------------------------------------------------------------------

def test_chain_airy():
    r = run_json("chain", "--depth", "5", "D^3 - x*D")
    assert r["orders"] == [3] * 6 and r["verified_identity"] is True
    ops = [parse_operator(s["operator"]) for s in r["steps"]]
    assert ops == [parse_operator(f"D^3 - x*D + {i}") for i in range(1, 6)]


def test_sind_example():
    r = run_json("sind", "D^2 + x")
    assert r["sind"] == 1 and r["missing_degrees"] == [0]


def test_stable1_example():
    r = run_json("stable1", "-1/(2*x) - 1/(2*(x+1))")
    assert r["stable"] is False


def test_small_commands():
    assert parse_operator(run_json("adjoint", "D^3 - x*D")["result"]) == OreOp([1, X, 0, -1])
    assert parse_ratfun(run_json("apply", "D", "x^2")["result"]) == RatFun(2 * X)
    assert parse_operator(run_json("mul", "D", "x")["result"]) == OreOp([1, X])
    r = run_json("indicial", "-D^3 + x*D + 1")
    assert (r["point"], r["indicial"], r["shift"]) == ("infinity", "s + 1", 0)
    r = run_json("indicial", "D", "--at", "0")
    assert (r["point"], r["indicial"]) == ("0", "s")


def test_bounds_and_profile_and_katz():
    r = run_json("bounds1", "(3*x^2 - 2*x)/(x^3 - x^2)")
    assert (r["lower"], r["upper"], r["exact"]) == (3, 3, 3)
    r = run_json("profile-invq", "--q", "x^2*(x-1)", "--check")
    assert r["formula"] == r["chain_orders"] == [1, 2, 2, 3, 3, 3] and r["agree"] and r["verified_identity"]
    r = run_json("katz", "--p", "D^2", "--q", "x^3 + 1")
    assert (r["formula"], r["sind"], r["agree"]) == (3, 3, True)


def test_stable1_normal_form():
    r = run_json("stable1", "-2*x/(x^2+1) + 7")
    assert r["stable"] is True
    assert r["normal_form"]["kind"] == "constant" and r["normal_form"]["alpha"] == "7"
    assert parse_poly(r["normal_form"]["h"]) == X**2 + 1
    r = run_json("stable1", "3/(x-2)")
    assert r["normal_form"] == {"kind": "pole", "h": "1", "beta": "3", "c": "2"}
    assert r["stable"] is False


# -- report schema ------------------------------------------------------------------

def test_sind_report_keys():
    r = run_json("sind", "D + 1/x")
    assert {"schema_version", "command", "B", "missing_degrees", "sind", "witnesses", "warnings"} <= set(r)
    assert r["schema_version"] == "1" and r["command"] == "sind"


def test_json_is_deterministic():
    _, a = run("sind", "D^2 + x")
    _, b = run("sind", "D^2 + x")
    assert a == b
    assert list(json.loads(a)) == sorted(json.loads(a))


def test_rationals_render_as_fractions():
    r = run_json("stable1", "(1/2)/(x-3)")
    assert r["normal_form"]["beta"] == "1/2"


def test_witnesses_reparse_and_verify():
    r = run_json("sind", "D + (3*x^2 - 2*x)/(x^3 - x^2)")
    L = parse_operator(r["operator"])
    assert r["witnesses"]
    for i, w in r["witnesses"].items():
        p, y = parse_poly(w["p"]), parse_ratfun(w["y"])
        assert p.degree == int(i)
        assert witness_holds(L, p, y) and apply(adjoint(L), y) == RatFun(p)


def test_chain_certificates_reparse():
    r = run_json("chain", "--depth", "4", "D + 2/x + 1/(x-1)", "--verify")
    assert r["certificates_verified"] is True
    steps = []
    for s in r["steps"]:
        l = parse_ratfun(s["certificate_l"]) if s["case"] == DELTA1 else None
        H = parse_operator(s["certificate_H"]) if s["case"] == DELTA1 else None
        steps.append(ChainStep(parse_operator(s["operator"]), s["case"], l, H))
    assert verify_chain_identity(parse_operator(r["base"]), steps)


def test_text_mode_chain_lines():
    code, text = run("chain", "--depth", "3", "D^3 - x*D", "--text")
    assert code == 0
    lines = [ln for ln in text.splitlines() if ln.startswith("L_")]
    assert len(lines) == 4
    assert lines[0].startswith("L_0: ord=3, case=base")
    for i, ln in enumerate(lines[1:], start=1):
        assert ln.startswith(f"L_{i}: ord=3, case=")
        assert parse_operator(ln.split("op=")[1]) == parse_operator(f"D^3 - x*D + {i}")


# -- exit codes and configuration ------------------------------------------------------

@pytest.mark.parametrize(
    "argv, code",
    [
        (["sind", "D^2 +"], 2),
        (["sind", "D^-1"], 2),
        (["frobnicate"], 2),
        ([], 2),
        (["chain", "--depth", "100", "D"], 2),
        (["chain", "--depth", "3", "--max-depth", "2", "D"], 2),
        (["chain", "D"], 2),
        (["katz", "--p", "D + 1", "--q", "x"], 1),
        (["sind", "0"], 1),
        (["adjoint", "0"], 1),
        (["profile-invq", "--q", "5"], 1),
        (["bounds1", "1/(x-x+1)"], 0),
        (["katz", "--p", "D^2", "--q", "x"], 0),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert run_command(argv, out=lambda s: None) == code
    if code:
        assert "dfstab" in capsys.readouterr().err


def test_parse_error_reports_position(capsys):
    assert run_command(["sind", "D + $"], out=lambda s: None) == 2
    assert "position 4" in capsys.readouterr().err


def test_factor_cap_flag_and_env(monkeypatch):
    # x^4 + x^2 + 1 has no rational root; its block is only factored once the cap reaches 4
    f = "-(4*x^3 + 2*x)/(x^4 + x^2 + 1)"
    low = run_json("stable1", f, "--factor-cap", "0")
    high = run_json("stable1", f, "--factor-cap", "8")
    assert low["stable"] == high["stable"]
    assert low["warnings"] and not high["warnings"]
    monkeypatch.setenv("DFSTAB_FACTOR_CAP", "0")
    assert run_json("stable1", f)["warnings"]
    assert not run_json("stable1", f, "--factor-cap", "8")["warnings"]
    monkeypatch.setenv("DFSTAB_FACTOR_CAP", "many")
    assert run_command(["stable1", f], out=lambda s: None) == 2


def test_main_entry_point(capsys):
    assert main(["mul", "D", "x"]) == 0
    assert json.loads(capsys.readouterr().out)["result"] == "x*D + 1"


def test_module_invocation():
    proc = subprocess.run(
        [sys.executable, "-m", "dfstab", "sind", "D^2 + x"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["sind"] == 1
