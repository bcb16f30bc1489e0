from __future__ import annotations

import csv
import importlib
import io
import json
import subprocess
import sys

import pytest

import diophlab
from diophlab import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _report(text):
    lines = [json.loads(line) for line in text.splitlines()]
    rows = [d["row"] for d in lines if "row" in d]
    return rows, lines[-1]["report"]


def test_cf_command(capsys):
    code, out, _ = run(capsys, "exact", "cf", "--x", "8/13")
    assert code == 0
    _, rep = _report(out)
    assert rep["summary"]["cf"] == "[0;1,1,1,1,2]"
    assert rep["summary"]["convergents"][-1] == "8/13"
    assert rep["version"] == diophlab.__version__
    assert rep["config"]["x"] == "8/13"
    assert "wall_time" not in rep


def test_invalid_input_exits_1(capsys):
    # argument errors exit through the parser, library validation errors through main
    for argv in (["exact", "cf", "--x", "3/0"], ["nonsense"]):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv)
        assert exc.value.code == 1
    code, _, _ = run(capsys, "minkowski", "qm", "--x", "3/2")
    assert code == 1
    code, _, _ = run(capsys, "exponents", "jarnik", "--m", "1", "--n", "2", "--omega-hat", "1/5")
    assert code == 1


def test_budget_exits_3(capsys):
    code, _, err = run(capsys, "discrepancy", "exact", "--q", "5000", "--a", "1", "3", "9")
    assert code == 3
    assert "budget" in err


def test_other_library_error_exits_4(capsys):
    code, _, err = run(capsys, "zaremba", "hensley", "--k", "2", "--lo-exp", "8", "--hi-exp", "9")
    assert code == 4
    assert "TooFewPoints" in err


def test_determinism(capsys):
    argv = ["zaremba", "coverage", "--k", "5", "--N", "4096", "--threads", "3"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    _, rep = _report(a)
    assert rep["summary"]["covered"] == 4096
    assert rep["summary"]["exceptions"] == []


def test_timing_flag(capsys):
    _, out, _ = run(capsys, "littlewood", "furstenberg", "--bound", "1000", "--timing")
    _, rep = _report(out)
    assert rep["wall_time"] >= 0
    assert "timing" not in rep["config"]


def test_csv_output(capsys, tmp_path):
    target = tmp_path / "fib.csv"
    code, out, _ = run(capsys, "discrepancy", "fibonacci", "--n-max", "8", "--format", "csv", "--output", str(target))
    assert code == 0 and out == ""
    rows = list(csv.DictReader(io.StringIO(target.read_text())))
    assert [r["q"] for r in rows] == ["2", "3", "5", "8", "13", "21"]
    assert set(rows[0]) == {"n", "q", "D", "D_over_log_q"}


def test_constants_table(capsys):
    _, out, _ = run(capsys, "constants", "table")
    rows, _ = _report(out)
    by_name = {r["name"]: r for r in rows}
    assert by_name["kappa1"]["approx"].startswith("1.38848")
    assert by_name["kappa2"]["approx"].startswith("4.40104")
    assert by_name["schmidt_G_at_2"]["lo"] == by_name["schmidt_G_at_2"]["hi"] == "2"


def test_real_argument_forms():
    for text in ("golden", "sqrt:2", "surd:-1,5,2", "cf:0;1,2", "3/7"):
        assert cli.real(text).enclose(30).width < 1
    with pytest.raises(Exception):
        cli.real("cf:0;")
    with pytest.raises(Exception):
        cli.real("sqrt:x")


@pytest.mark.parametrize("argv", [
    ["exponents", "laurent", "--w", "2", "--w-star", "1/2", "--v", "2", "--v-star", "1/2"],
    ["bestapprox", "records", "--theta", "golden", "--M-max", "100000", "--method", "convergents"],
    ["bestapprox", "records", "--theta", "sqrt:2", "--theta", "sqrt:3", "--M-max", "50"],
    ["bestapprox", "psi-plus", "--theta", "sqrt:2", "--theta", "sqrt:3", "--t-max", "200"],
    ["bestapprox", "cubic", "--bound", "500"],
    ["littlewood", "scan", "--theta", "sqrt:2", "--theta", "sqrt:3", "--N", "1000"],
    ["littlewood", "mixed", "--theta", "sqrt:2", "--primes", "3", "--N", "1000"],
    ["littlewood", "peck", "--N", "1000"],
    ["littlewood", "avoider", "--terms", "20"],
    ["littlewood", "gallagher", "--trials", "3", "--N", "1000", "2000"],
    ["zaremba", "counts", "--k", "2", "--Q", "20"],
    ["zaremba", "hensley", "--k", "3", "--lo-exp", "6", "--hi-exp", "10"],
    ["zaremba", "hyperbola", "--q", "13", "--k", "2", "--T1", "13", "--T2", "13"],
    ["zaremba", "fold-chain", "--steps", "2"],
    ["zaremba", "korobov", "--q", "10"],
    ["discrepancy", "exact", "--q", "64", "--a", "1", "5", "--s", "3"],
    ["discrepancy", "best-a", "--q", "34"],
    ["discrepancy", "subgroup", "--p", "101"],
    ["minkowski", "qm", "--x", "2/5"],
    ["minkowski", "inverse", "--y", "3/8"],
    ["minkowski", "fixed-points", "--resolution", "1/1048576"],
    ["minkowski", "fourier", "--n-max", "5", "--level", "12"],
    ["minkowski", "remainder", "--n-max", "4"],
    ["minkowski", "franel", "--Q", "64", "--Q-min", "16"],
    ["minkowski", "classify", "--x", "cf:0;5", "--t-max", "200"],
    ["minkowski", "g-lambda", "--lam", "1/3", "--x", "2/5"],
    ["minkowski", "semiregular", "--n", "6", "8"],
    ["minkowski", "kappa", "--slope-min", "4", "--slope-max", "5", "--step", "1/2", "--t-max", "1000"],
    ["list"],
])
def test_every_command_runs(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    _, rep = _report(out)
    assert set(rep) == {"config", "version", "warnings", "summary"}


def test_experiment_index_covers_library():
    ops = cli.EXPERIMENT_INDEX
    listed = [r["operation"] for r in cli.list_experiments()]
    assert len(listed) == len(set(listed)) == len(ops)
    modules = [importlib.import_module(f"diophlab.{m}") for m in ("exact", "exponents", "bestapprox", "littlewood",
                                               "zaremba", "discrepancy", "minkowski")]
    commands = {f"{g} {n}" for g, n in cli.COMMANDS}
    for op, (topic, command) in ops.items():
        assert any(hasattr(m, op) for m in modules), op
        assert command == "python API" or command in commands, command
        assert "§" not in topic


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "diophlab", "minkowski", "qm", "--x", "1/3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout.splitlines()[-1])["report"]["summary"]["value"] == "1/4"
