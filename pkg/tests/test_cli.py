import csv
import io
import json
import math

import pytest

from stieltjes.cli import parse_grid, run
from stieltjes.errors import SuiteFailed, ValidationError
from stieltjes.suites import run_suite, verify_suites

STEP = {"continuous": [{"kind": "identity"}], "jumps": [{"x": 0, "size": 1}], "window": [-5, 5]}
IDENT = {"continuous": [{"kind": "identity"}], "window": [-5, 5]}


def call(*argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def configs(tmp_path):
    (tmp_path / "step.json").write_text(json.dumps(STEP))
    (tmp_path / "id.json").write_text(json.dumps(IDENT))
    return tmp_path


def test_monomial_row(configs):
    code, out, _ = call("monomial", "--derivator", str(configs / "step.json"), "--x0", "0", "--n", "2",
                        "--grid", "0:1:5")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["x", "value", "lower_bound", "upper_bound"]
    row = next(r for r in table if float(r["x"]) == 0.5)
    assert float(row["value"]) == 1.25


def test_exp_row(configs):
    code, out, _ = call("exp", "--derivator", str(configs / "id.json"), "--lambda", "1", "--x0", "0",
                        "--grid", "0:1:2")
    assert code == 0
    row = rows(out)[-1]
    assert float(row["x"]) == 1.0
    assert row["value"].startswith("2.71828182845904")
    assert float(row["value"]) == pytest.approx(math.e, abs=1e-12)


def test_seventeen_digits(configs):
    _, out, _ = call("exp", "--derivator", str(configs / "id.json"), "--lambda", "1", "--grid", "0:1:2")
    assert rows(out)[-1]["value"] == "%.17g" % float(rows(out)[-1]["value"])
    assert len(rows(out)[-1]["value"].replace(".", "")) == 17


def test_series_and_json(configs):
    lit = json.dumps({"center": 0, "coeffs": [1.0, 1.0], "tail": {"kind": "none"}})
    code, out, _ = call("series", "--derivator", str(configs / "step.json"), "--series", lit,
                        "--grid", "-0.5:0.5:3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [d["value"] for d in data] == [0.5, 1.0, 2.5]


def test_solve(configs):
    prob = {"derivator": "step.json", "x0": 0, "m": 1, "lambdas": [1], "initial": [1]}
    (configs / "p.json").write_text(json.dumps(prob))
    code, out, _ = call("solve", "--problem", str(configs / "p.json"), "--grid", "0:1:3")
    assert code == 0
    row = rows(out)[1]
    assert float(row["value"]) == pytest.approx(2 * math.exp(0.5), rel=1e-10)
    assert float(row["residual"]) <= 1e-8


def test_eval_and_out_file(configs, tmp_path):
    target = tmp_path / "o.csv"
    code, out, _ = call("eval", "--derivator", "staircase", "--grid", "0:2:5", "--out", str(target))
    assert code == 0 and out == ""
    table = rows(target.read_text())
    assert [r["class"] for r in table] == ["Jump", "ConstantInterior", "Jump", "ConstantInterior", "Jump"]


def test_verify_decomposition():
    code, out, _ = call("verify", "--suite", "decomposition", "--derivator", "random", "--seed", "7")
    assert code == 0
    assert out.startswith("PASS decomposition: max deviation")


def test_verify_failure_reports_seed():
    code, out, _ = call("verify", "--suite", "gm-convergence", "--seed", "11")
    assert code == 3
    assert "--seed 11" in out and "fixture geometric" in out


def test_seed_env_override(monkeypatch):
    monkeypatch.setenv("STIELTJES_SEED", "5")
    code, out, _ = call("eval", "--derivator", "random", "--seed", "99", "--grid", "-1:1:3")
    monkeypatch.delenv("STIELTJES_SEED")
    code2, out2, _ = call("eval", "--derivator", "random", "--seed", "5", "--grid", "-1:1:3")
    assert code == code2 == 0 and out == out2


def test_deterministic(configs):
    args = ("monomial", "--derivator", "random", "--seed", "3", "--n", "4", "--grid", "-5:5:41")
    assert call(*args)[1] == call(*args)[1]


@pytest.mark.parametrize("argv", [
    ("monomial", "--derivator", "step-plus-identity", "--n", "2", "--grid", "0:1:1"),
    ("monomial", "--derivator", "step-plus-identity", "--n", "2", "--tol", "0"),
    ("monomial", "--derivator", "missing.json", "--n", "2"),
    ("exp", "--derivator", "identity", "--lambda", "0"),
    ("monomial", "--derivator", "identity", "--n", "2", "--grid", "0:9:3"),
    ("bogus",),
])
def test_invalid_input_exit_code(argv):
    code, _, err = call(*argv)
    assert code == 2


def test_error_class_name_printed():
    code, _, err = call("monomial", "--derivator", "identity", "--n", "2", "--grid", "0:9:3")
    assert "OutOfWindow" in err


def test_parse_grid():
    assert parse_grid("-1:1:3") == [-1.0, 0.0, 1.0]
    with pytest.raises(ValidationError):
        parse_grid("1:0:3")


def test_bounds_suite_on_identity():
    from stieltjes.derivator import identity
    rep = run_suite("bounds", derivator=identity(), label="identity")
    assert rep.passed and rep.deviation == 0.0


def test_exp_product_suite_includes_two_jump_check():
    rep = run_suite("exp-product", seed=7, count=2)
    assert rep.passed


def test_strict_verify_raises():
    with pytest.raises(SuiteFailed, match="seed 4"):
        verify_suites(["gm-convergence"], seed=4, strict=True)
