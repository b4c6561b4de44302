import numpy as np
import pytest

from topt.circuit import Circuit, Gate, emit, load
from topt.harness import (
    CSV_COLUMNS, FIXTURE_REFERENCES, BenchmarkRecord, BenchmarkSpec, InsufficientData, compile_circuit,
    fit_scaling, fixture_paths, internal_h_count, random_clifford_t_circuit, random_signature, records_to_csv,
    run_benchmark, scaling_report, verify_equivalence,
)
from topt.preprocess import gadgetize
from topt.simulator import TooLarge


def test_random_signature():
    S = random_signature(3, 1)
    assert len(S.vector()) == 7
    assert random_signature(5, 9) == random_signature(5, 9)
    means = np.mean([random_signature(5, s).vector() for s in range(1000)], axis=0)
    assert ((means > 0.45) & (means < 0.55)).all()


def test_random_circuit():
    assert random_clifford_t_circuit(3, 0, 0, 1).gates == ()
    c = random_clifford_t_circuit(3, 20, 0, 4)
    assert all(f.h == 0 for f in gadgetize(c))
    assert emit(random_clifford_t_circuit(4, 30, 2, 8)) == emit(random_clifford_t_circuit(4, 30, 2, 8))
    assert internal_h_count(random_clifford_t_circuit(4, 30, 3, 2)) == 3


def test_verify_examples():
    c = random_clifford_t_circuit(3, 15, 1, 0)
    assert verify_equivalence(c, c).equivalent
    assert not verify_equivalence(Circuit(1, 0, [Gate("T", (0,))]), Circuit(1, 0, [Gate("S", (0,))])).equivalent
    h = Circuit(1, 0, [Gate("T", (0,)), Gate("H", (0,)), Gate("T", (0,))])
    res = verify_equivalence(h, compile_circuit(h).circuit)
    assert res.equivalent and res.branches == 3 * 2
    with pytest.raises(TooLarge):
        verify_equivalence(Circuit(13), Circuit(13))


def test_fit_scaling():
    ns = [4, 6, 8, 10]
    assert fit_scaling([(n, n**2) for n in ns]).slope == pytest.approx(2.0)
    assert fit_scaling([(n, n**3) for n in ns]).slope == pytest.approx(3.0)
    with pytest.raises(InsufficientData):
        fit_scaling([(4, 16), (6, 36)])


def test_scaling_report_needs_trials():
    recs = [BenchmarkRecord(f"r{n}{t}", n, 0, 1, "re", 1, n * n, 0.0, 0.0, t) for n in (3, 4, 5) for t in range(4)]
    with pytest.raises(InsufficientData):
        scaling_report(recs)
    report = scaling_report(recs, min_trials=4)
    assert report.fits["re"].slope == pytest.approx(2.0)
    assert [p.trials for p in report.points["re"]] == [4, 4, 4]


def test_run_benchmark_empty():
    assert run_benchmark(None) == []
    assert run_benchmark(BenchmarkSpec()) == []


def test_fixture_record():
    path = [p for p in fixture_paths() if p.stem == "mod5_4"]
    (rec,) = run_benchmark(BenchmarkSpec(fixtures=path, optimizers=["todd"]))
    assert rec.T_before == 28 and rec.error is None and rec.verified
    assert rec.h == FIXTURE_REFERENCES["mod5_4"].n_h


def test_fixture_failure_is_captured(tmp_path):
    bad = tmp_path / "bad.tc"
    bad.write_text("qubits 1\nFOO q0\n")
    good = tmp_path / "good.tc"
    good.write_text("qubits 1\nT q0\n")
    recs = run_benchmark(BenchmarkSpec(fixtures=[bad, good], optimizers=["todd"]))
    assert recs[0].error and "ParseError" in recs[0].error
    assert recs[1].error is None and recs[1].T_after == 1


def test_csv_schema_and_reproducibility():
    spec = BenchmarkSpec(ns=[3, 4], trials=3, optimizers=["todd", "tool-f"], seed=42)
    a = records_to_csv(run_benchmark(spec)).splitlines()
    b = records_to_csv(run_benchmark(spec)).splitlines()
    assert a[0] == ",".join(CSV_COLUMNS)
    assert len(a) == 1 + 2 * 3 * 2
    seconds = CSV_COLUMNS.index("seconds")
    strip = lambda rows: [r.split(",")[:seconds] + r.split(",")[seconds + 1:] for r in rows]
    assert strip(a) == strip(b)


def test_fixtures_load():
    for p in fixture_paths():
        c = load(p)
        ref = FIXTURE_REFERENCES[p.stem]
        assert compile_circuit(c).T_before == ref.T_before
        assert internal_h_count(c, cancel_h=True) == ref.n_h
