import csv
import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from shadowprice.cli import format_float, main, run, to_json


def call(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_example(capsys):
    code, out, _ = call(["solve", "--mu", "0.08", "--sigma", "0.4", "--lambda", "0.01"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert list(doc) == ["theta", "lambda", "c", "s_bar", "pi_lo", "pi_hi", "shadow_pi_lo",
                         "shadow_pi_hi", "symmetry_residual", "admissibility_margin"]
    assert doc["c"] == pytest.approx(1.3644389074070186, rel=1e-12)
    assert doc["c"] == pytest.approx(1.3635, abs=2e-3)
    assert doc["s_bar"] == pytest.approx(1.8779, abs=5e-3)


def test_solve_degenerate(capsys):
    code, out, _ = call(["solve", "--mu", "0.16", "--sigma", "0.4", "--lambda", "0.01"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["c"] == 0 and doc["s_bar"] == "inf" and doc["pi_lo"] == 1 and doc["pi_hi"] == 1


def test_expand_width(capsys):
    code, out, _ = call(["expand", "--theta", "0.5", "--order", "3"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["powers"] == ["0/3", "1/3", "2/3", "3/3"]
    for got, ref in zip(doc["width"], [0.0, 0.721125, 0.0, 0.1]):
        assert got == pytest.approx(ref, abs=1e-6)


def test_expand_csv(capsys):
    code, out, _ = call(["expand", "--theta", "2", "--order", "4", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 5 and "mid_width" in rows[0]


def test_growth(capsys):
    code, out, _ = call(["growth", "--theta", "0.5", "--sigma", "0.4", "--lambda", "0.01"], capsys)
    doc = json.loads(out)
    assert doc["delta_closed"] == pytest.approx(0.019524858162103178, rel=1e-12)
    assert doc["relative_gap"] < 1e-10


def test_table_sweeps(capsys):
    code, out, _ = call(["table", "--theta", "0.5", "--sweep", "lambda:1e-4:1e-1:5:log",
                         "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 5
    assert float(rows[0]["lambda"]) == pytest.approx(1e-4)
    assert float(rows[-1]["lambda"]) == pytest.approx(0.1)
    code, out, _ = call(["table", "--lambda", "0.01", "--sigma", "0.4",
                         "--sweep", "theta:0.5:1.5:3"], capsys)
    doc = json.loads(out)
    assert [r["theta"] for r in doc["rows"]] == [0.5, 1.0, 1.5]
    assert doc["rows"][1]["s_bar"] == "inf" and doc["rows"][1]["width_asymptotic"] == "nan"


def test_simulate(tmp_path, capsys):
    args = ["simulate", "--theta", "0.5", "--sigma", "0.4", "--lambda", "0.01", "--T", "0.5",
            "--dt", "1e-3", "--paths", "3", "--seed", "2", "--paths-csv", str(tmp_path / "p")]
    code, out, _ = call(args, capsys)
    doc = json.loads(out)
    assert code == 0 and doc["n_paths"] == 3 and doc["seed"] == 2
    assert sorted(x.name for x in (tmp_path / "p").iterdir()) == [
        "path_00000.csv", "path_00001.csv", "path_00002.csv"]


def test_output_is_deterministic(tmp_path):
    args = ["simulate", "--theta", "0.5", "--sigma", "0.4", "--lambda", "0.05", "--T", "1",
            "--paths", "4", "--seed", "9"]
    a, _ = run(args)
    b, _ = run(args)
    assert a == b
    out = tmp_path / "x.json"
    assert main(args + ["--out", str(out)]) == 0
    assert out.read_text() == a


def test_json_roundtrip_17_digits():
    x = 0.1 + 0.2
    assert format_float(x) == "0.30000000000000004"
    assert float(format_float(x)) == x
    doc = json.loads(to_json({"a": x, "b": [1e-300, float("inf"), float("nan")], "n": 3}))
    assert doc == {"a": x, "b": [1e-300, "inf", "nan"], "n": 3}


@settings(max_examples=200)
@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_roundtrip(x):
    assert json.loads(to_json([x]))[0] == x


@pytest.mark.parametrize("args", [
    ["solve", "--theta", "0.5", "--mu", "0.1", "--lambda", "0.01"],
    ["solve", "--theta", "0.5"],
    ["solve", "--lambda", "0.01"],
    ["solve", "--theta", "abc", "--lambda", "0.01"],
    ["solve", "--theta", "0.5", "--lambda", "0.01", "--bogus"],
    ["table", "--theta", "0.5", "--sweep", "mu:0:1:3"],
    ["table", "--theta", "0.5", "--sweep", "lambda:0:1:3:lin"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(args, capsys):
    code, out, err = call(args, capsys)
    assert code == 2 and out == "" and err


@pytest.mark.parametrize("args", [
    ["solve", "--theta", "0.5", "--lambda", "1.5"],
    ["solve", "--mu", "-1", "--sigma", "0.4", "--lambda", "0.1"],
    ["expand", "--theta", "1", "--order", "3"],
    ["solve", "--theta", "0.999", "--lambda", "0.5"],
])
def test_domain_errors_exit_1(args, capsys):
    code, out, err = call(args, capsys)
    assert code == 1 and out == ""
    assert err.count("\n") == 1 and err.startswith("error:")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "shadowprice", "solve", "--theta", "0.3",
                           "--lambda", "0.05"], capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["c"] == pytest.approx(4.4039125971597192, rel=1e-12)
