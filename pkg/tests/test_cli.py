import csv
import json
import math
import re
import subprocess
import sys

import pytest

import oracles


def run(*args):
    return subprocess.run([sys.executable, "-m", "thetazeta", *map(str, args)],
                          capture_output=True, text=True, timeout=300)


def run_json(*args):
    p = run(*args, "--json")
    return p.returncode, json.loads(p.stdout)


def result(report, name):
    return next(r for r in report["results"] if r["name"] == name)


def test_eval_theta_square():
    code, rep = run_json("eval", "--fn", "theta", "--alpha", 1, "--x", 0, "--y", 1)
    assert code == 0 and rep["status"] == "pass"
    assert abs(result(rep, "theta")["value"] - oracles.THETA_SQUARE_A1) <= 1e-12


def test_eval_theta_xy_square_is_zero():
    code, rep = run_json("eval", "--fn", "theta-xy", "--alpha", 1, "--x", 0, "--y", 1)
    r = result(rep, "theta-xy")
    assert code == 0 and abs(r["value"]) <= r["err"] + 1e-15


def test_eval_zeta_square():
    code, rep = run_json("eval", "--fn", "zeta", "--s", 2, "--x", 0, "--y", 1)
    assert code == 0
    assert abs(result(rep, "zeta")["value"] - oracles.ZETA_SQUARE[2]) <= 1e-8


def test_eval_human_output_has_ten_digits():
    p = run("eval", "--fn", "theta", "--alpha", 1, "--x", 0, "--y", 1)
    assert p.returncode == 0
    assert "1.180340599" in p.stdout and "1.1803405990" not in p.stdout


def test_eval_theta1d_and_aux():
    code, rep = run_json("eval", "--fn", "theta1d", "--X", 0.5, "--Y", 0)
    assert code == 0 and abs(rep["results"][0]["value"] - oracles.THETA1D_HALF_0) <= 1e-12
    code, rep = run_json("eval", "--fn", "mu", "--X", 0.5)
    assert code == 0 and abs(rep["results"][0]["value"] - oracles.MU_HALF) <= 1e-15


@pytest.mark.parametrize("args", [
    ("eval", "--fn", "theta", "--alpha", 0, "--x", 0, "--y", 1),
    ("eval", "--fn", "theta", "--alpha", 1, "--x", 0, "--y", -1),
    ("eval", "--fn", "zeta", "--s", 0.5, "--x", 0, "--y", 1),
    ("eval", "--fn", "bogus"),
    ("certify", "--claim", "thm1-2", "--alpha", 0),
    ("certify", "--claim", "nope"),
    ("reduce", "--x", 0, "--y", 0),
    ("minimize", "--fn", "theta", "--alpha", -1),
])
def test_input_errors_exit_two(args):
    assert run(*args).returncode == 2


def test_json_round_trips_at_17_digits():
    p = run("eval", "--fn", "theta", "--alpha", 1, "--x", 0.5, "--y", math.sqrt(3) / 2, "--json")
    rep = json.loads(p.stdout)
    v = result(rep, "theta")["value"]
    assert abs(v - oracles.THETA_HEX_A1) <= 1e-12
    printed = re.search(r'"value": ([-0-9.e+]+)', p.stdout).group(1)
    assert float(printed) == v
    assert len(printed.lstrip("-").replace(".", "").split("e")[0].lstrip("0")) <= 17


def test_constants_command():
    code, rep = run_json("constants")
    assert code == 0
    for name, printed in (("c2", 0.0150), ("c6", 0.4435)):
        assert abs(result(rep, name)["value"] - printed) <= 2e-3
    c1 = result(rep, "c1")
    assert abs(c1["value"] - 0.8718277978) <= 1e-9
    assert any("c1" in m for m in rep["messages"])


def test_certify_thm1_1_passes():
    p = run("certify", "--claim", "thm1-1", "--alpha", "1,2", "--grid", 20)
    assert p.returncode == 0, p.stdout


def test_certify_dump_csv(tmp_path):
    path = tmp_path / "samples.csv"
    p = run("certify", "--claim", "thm1-1", "--alpha", "1", "--s", "2", "--grid", 8, "--dump", path)
    assert p.returncode == 0
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x", "y", "value", "err"]
    # one block of 8 x 8 samples per certificate: theta at alpha = 1, zeta at s = 2
    assert len(rows) - 1 == 2 * 64
    assert all(len(r) == 4 for r in rows[1:])


def test_certify_quarter_bound_grid_200(tmp_path):
    path = tmp_path / "q.csv"
    code, rep = run_json("certify", "--claim", "lemma24", "--grid", 200, "--dump", path)
    assert code == 0
    assert rep["results"][0]["value"] <= 0.25
    with open(path) as fh:
        assert sum(1 for _ in fh) - 1 == 200 * 200


def test_certify_violation_exits_one():
    # the epsilon2 ceiling is exceeded at the corner of its range
    code, rep = run_json("certify", "--claim", "lower-bounds", "--alpha", "1", "--grid", 6)
    assert code == 1 and rep["status"] == "fail"


def test_reduce_example():
    code, rep = run_json("reduce", "--x", 1.3, "--y", 1.5)
    assert code == 0
    assert abs(result(rep, "x")["value"] - 0.3) <= 1e-12
    assert result(rep, "y")["value"] == 1.5
    assert result(rep, "word")["value"] == "T-"


@pytest.mark.parametrize("args", [
    ("--fn", "theta", "--alpha", 1, "--start-x", 0.3, "--start-y", 1.1),
    ("--fn", "zeta", "--s", 2, "--start-x", 0.1, "--start-y", 2),
])
def test_minimize_examples(args):
    code, rep = run_json("minimize", *args)
    assert code == 0
    assert abs(result(rep, "x")["value"] - 0.5) <= 1e-6
    assert abs(result(rep, "y")["value"] - math.sqrt(3) / 2) <= 1e-6


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# grid override\ngrid = 5\nalpha = 1\n")
    _, rep = run_json("certify", "--claim", "thm1-2", "--config", cfg)
    assert rep["inputs"]["grid"] == 5 and rep["status"] == "pass"
    _, rep = run_json("certify", "--claim", "thm1-2", "--config", cfg, "--grid", 7)
    assert rep["inputs"]["grid"] == 7


def test_config_unknown_key_is_input_error(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("gird = 5\n")
    assert run("certify", "--claim", "thm1-2", "--config", cfg).returncode == 2


def test_tol_flag_reaches_evaluator():
    common = ("eval", "--fn", "zeta", "--s", 2, "--x", 0.2, "--y", 1.3, "--method", "direct")
    _, loose = run_json(*common)
    _, tight = run_json(*common, "--tol", 1e-10)
    assert tight["inputs"]["tol"] == 1e-10
    assert tight["results"][0]["err"] < loose["results"][0]["err"]
    assert abs(loose["results"][0]["value"] - tight["results"][0]["value"]) <= loose["results"][0]["err"]
