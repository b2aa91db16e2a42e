import io
import json
import subprocess
import sys

import jsonschema
import pytest

from diffalg.cli import main
from diffalg.schemas import SCHEMAS


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.mark.parametrize("argv, expected", [
    (["diff", "x^3"], "3x^2 dx"),
    (["diff", "x*y", "-n", "2"], "x d^2y + 2 dx dy + y d^2x"),
    (["diff", "5"], "0"),
    (["diff", "d(x y)"], "x d^2y + 2 dx dy + y d^2x"),
    (["expand", "-d", "y", "-i", "x", "-n", "2"], "d^2y/dx^2 - dy/dx*d^2x/dx^2"),
    (["expand", "-d", "y", "-i", "x", "-n", "2", "--progression", "x"], "d^2y/dx^2"),
    (["expand", "-d", "y", "-i", "x", "-n", "1"], "dy/dx"),
    (["eval", "dy/dx", "--param", "x=t^2,y=t^6", "--at", "1"], "3"),
    (["eval", "dx", "--param", "x=t", "--at", "0"], "1"),
    (["eval", "d^2y/dx^2 - dy/dx * d^2x/dx^2", "--param", "x=t^2,y=t^6", "--at", "1"], "6"),
])
def test_outputs(argv, expected):
    code, out = run(*argv)
    assert code == 0
    assert out.strip() == expected


def test_verify_chain2():
    code, out = run("verify", "chain2", "--y", "x^3", "--x", "t^2")
    assert code == 0
    assert "24t^4" in out and "30t^4" in out
    assert "full-form identity holds: yes" in out


def test_verify_dxdx_and_inverse():
    code, out = run("verify", "dxdx")
    assert code == 0 and "= 0" in out and "not zero" in out
    code, out = run("verify", "inverse", "--y", "x^3")
    assert code == 0 and "-2/(9x^5)" in out


def test_verify_expansion_oracle():
    code, out = run("verify", "expansion-oracle", "-n", "3", "--trials", "100", "--seed", "7",
                    "--style", "json")
    assert code == 0
    assert json.loads(out)["max_rel_err"] <= 1e-9


def test_verification_failure_exit_code():
    code, out = run("verify", "expansion-oracle", "-n", "2", "--trials", "5",
                    "--tolerance", "-1")
    assert code == 1


def test_solve_ode():
    code, out = run("solve-ode", "--f", "y", "--span", "0.3")
    assert code == 0 and "x = -y^3/6 + c1 y + c2" in out
    code, out = run("solve-ode", "--f", "0", "--y0", "0", "--yprime0", "2")
    assert code == 0 and "x = c1 y + c2" in out
    code, out = run("solve-ode", "--f", "q")
    assert code == 2


def test_solve_ode_blowup_exit_code(capsys):
    code, _ = run("solve-ode", "--f", "y", "--y0", "1", "--yprime0", "1", "--x0", "0",
                  "--span", "0.5", "--step", "1e-3")
    assert code == 1
    assert "near x=0.4" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["diff", "x + * y"],
    ["diff", "foo(x)"],
    ["diff", "x", "-n", "0"],
    ["expand", "-d", "y", "-i", "y"],
    ["expand", "-d", "dx", "-i", "x"],
    ["eval", "dz", "--param", "x=t", "--at", "1"],
    ["eval", "dx", "--param", "x=", "--at", "1"],
    ["verify", "nothing"],
    ["bogus"],
])
def test_usage_errors(argv, capsys):
    code, _ = run(*argv)
    assert code == 2
    assert capsys.readouterr().err


def test_parse_error_json(capsys):
    code, _ = run("diff", "x + * y", "--style", "json")
    assert code == 2
    err = json.loads(capsys.readouterr().err)
    jsonschema.validate(err, SCHEMAS["error"])
    assert err["span"] == [4, 5]


def test_singular_eval(capsys):
    code, _ = run("eval", "dy/dx", "--param", "x=t^2,y=t^6", "--at", "0")
    assert code == 1


@pytest.mark.parametrize("schema, argv", [
    ("diff", ["diff", "x^3"]),
    ("expand", ["expand", "-d", "y", "-i", "x", "-n", "3"]),
    ("expand", ["expand", "-d", "y", "-i", "x", "-n", "2", "--progression", "x"]),
    ("verify chain2", ["verify", "chain2"]),
    ("verify inverse", ["verify", "inverse", "--y", "x^2 + x"]),
    ("verify inverse", ["verify", "inverse", "--y", "sin(x)"]),
    ("verify dxdx", ["verify", "dxdx"]),
    ("verify expansion-oracle", ["verify", "expansion-oracle", "-n", "2", "--trials", "20"]),
    ("verify expansion-oracle", ["verify", "expansion-oracle", "-n", "2", "--trials", "3",
                                 "--tolerance", "-1"]),
    ("solve-ode", ["solve-ode", "--f", "y", "--span", "0.3"]),
    ("eval", ["eval", "dy/dx", "--param", "x=t^2,y=t^6", "--at", "1"]),
])
def test_json_schemas(schema, argv):
    code, out = run(*argv, "--style", "json")
    assert code in (0, 1)
    jsonschema.validate(json.loads(out), SCHEMAS[schema])


def test_latex_style():
    code, out = run("expand", "-d", "y", "-i", "x", "-n", "2", "--style", "latex")
    assert code == 0 and r"\frac{\mathrm{d}^{2}y}{\mathrm{d}x^{2}}" in out


def test_env_default_style(monkeypatch):
    monkeypatch.setenv("DIFFALG_STYLE", "json")
    code, out = run("diff", "x^3")
    assert json.loads(out)["result"] == "3x^2 dx"


def test_deterministic():
    a = run("verify", "expansion-oracle", "-n", "4", "--trials", "30", "--style", "json")
    b = run("verify", "expansion-oracle", "-n", "4", "--trials", "30", "--style", "json")
    assert a == b


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "diffalg.cli", "diff", "x^3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "3x^2 dx"
