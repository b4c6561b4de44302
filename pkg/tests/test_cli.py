import json

import pytest
from click.testing import CliRunner

from topt.circuit import parse
from topt.cli import main
from topt.harness import CSV_COLUMNS, fixture_paths

SRC = "qubits 2\nT q0\nH q0\nCNOT q0 q1\nT q1\nH q0\nT q0\n"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def circuit_file(tmp_path):
    p = tmp_path / "c.tc"
    p.write_text(SRC)
    return p


def test_optimize_json(runner, circuit_file, tmp_path):
    out = tmp_path / "o.tc"
    r = runner.invoke(main, ["optimize", str(circuit_file), "--verify", "--out", str(out), "--report", "json"])
    assert r.exit_code == 0, r.output
    rec = json.loads(r.stdout)
    assert rec["verified"] is True and rec["T_before"] == 3 and rec["T_after"] <= 3
    assert parse(out.read_text()).h == rec["h"]


def test_optimize_csv_and_modes(runner, circuit_file):
    for extra in (["--hadamard", "partition"], ["--h-cap", "1"], ["--optimizer", "tool-nf", "--seed", "7"],
                  ["--optimizer", "rm"], ["--no-h-cancel"]):
        r = runner.invoke(main, ["optimize", str(circuit_file), "--verify", "--report", "csv", *extra])
        assert r.exit_code == 0, (extra, r.output)
        assert r.stdout.splitlines()[0] == ",".join(CSV_COLUMNS)


def test_optimize_prints_circuit(runner, circuit_file):
    r = runner.invoke(main, ["optimize", str(circuit_file)])
    assert r.exit_code == 0
    assert parse(r.stdout).n == 2


def test_input_errors(runner, tmp_path):
    assert runner.invoke(main, ["optimize", str(tmp_path / "missing.tc")]).exit_code == 2
    bad = tmp_path / "bad.tc"
    bad.write_text("qubits 1\nFOO q0\n")
    r = runner.invoke(main, ["optimize", str(bad)])
    assert r.exit_code == 2 and "line 2" in r.output
    assert runner.invoke(main, ["optimize", str(bad), "--optimizer", "nope"]).exit_code == 2
    assert runner.invoke(main, ["bench", "random", "--n", "x"]).exit_code == 2
    assert runner.invoke(main, ["bench", "random", "--optimizers", "nope"]).exit_code == 2


def test_verify_command(runner, circuit_file, tmp_path):
    out = tmp_path / "o.tc"
    assert runner.invoke(main, ["optimize", str(circuit_file), "--out", str(out)]).exit_code == 0
    r = runner.invoke(main, ["verify", str(circuit_file), str(out)])
    assert r.exit_code == 0 and json.loads(r.stdout)["equivalent"]
    wrong = tmp_path / "w.tc"
    wrong.write_text("qubits 2\nS q0\n")
    assert runner.invoke(main, ["verify", str(circuit_file), str(wrong)]).exit_code == 1


def test_bench_random(runner, tmp_path):
    csv = tmp_path / "r.csv"
    r = runner.invoke(main, ["bench", "random", "--n", "3,4,5", "--trials", "3", "--optimizers", "todd,re",
                             "--seed", "1", "--csv", str(csv)])
    assert r.exit_code == 0, r.output
    rows = csv.read_text().splitlines()
    assert rows[0] == ",".join(CSV_COLUMNS) and len(rows) == 1 + 3 * 3 * 2
    assert "slope" in r.stderr


def test_bench_fixtures(runner, tmp_path):
    csv = tmp_path / "f.csv"
    r = runner.invoke(main, ["bench", "fixtures", "--optimizer", "todd", "--csv", str(csv)])
    assert r.exit_code == 0, r.output
    assert len(csv.read_text().splitlines()) == 1 + len(fixture_paths())
    assert runner.invoke(main, ["bench", "fixtures", "--dir", str(tmp_path / "none")]).exit_code == 2
