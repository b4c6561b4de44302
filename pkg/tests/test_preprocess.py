import numpy as np
import pytest
from hypothesis import given, strategies as st

from strategies import weighted_polys
from topt.circuit import Circuit, Gate, t_count
from topt.harness import compile_circuit, random_clifford_t_circuit, verify_equivalence
from topt.phase import UnsupportedGate, WeightedPolynomial
from topt.preprocess import (
    cancel_hadamard_pairs, classify_hadamards, commute_correction, gadgetize, hadamard_partition, partition,
)


def G(kind, *qs):
    return Gate(kind, qs)


def test_gadgetize_single_internal_h():
    c = Circuit(1, 0, [G("T", 0), G("H", 0), G("T", 0)])
    (form,) = gadgetize(c)
    assert form.h == 1 and form.block.num_qubits == 2
    assert t_count(form.block) == 2
    assert len(form.corrections) == 1
    assert all(g.kind not in ("H", "MEASX", "IFX") for g in form.block.gates)
    assert verify_equivalence(c, compile_circuit(c).circuit).equivalent


def test_gadgetize_no_internal_h():
    c = Circuit(2, 0, [G("H", 0), G("T", 0), G("CNOT", 0, 1), G("H", 1)])
    (form,) = gadgetize(c)
    assert form.h == 0 and form.corrections == []
    assert form.block.gates == (G("T", 0), G("CNOT", 0, 1))
    assert form.prefix_h == [0] and form.suffix_h == [1]


def test_h_cap_segments():
    c = Circuit(1, 0, [G("T", 0), G("H", 0), G("T", 0), G("H", 0), G("T", 0), G("H", 0), G("T", 0)])
    forms = gadgetize(c, h_cap=1)
    assert [(f.h, f.N_p) for f in forms] == [(1, 3)] * 3
    assert [f.h for f in gadgetize(c, h_cap=2)] == [2, 1]
    assert [f.h for f in gadgetize(c)] == [3]


def test_classify():
    c = Circuit(1, 0, [G("H", 0), G("T", 0), G("H", 0), G("T", 0), G("H", 0)])
    assert classify_hadamards(c) == ["prefix", "", "internal", "", "suffix"]


def test_cancel_hadamard_pairs():
    c = Circuit(2, 0, [G("T", 0), G("H", 0), G("T", 1), G("H", 0), G("H", 1), G("CNOT", 0, 1), G("H", 1)])
    assert cancel_hadamard_pairs(c).gates == (G("T", 0), G("T", 1), G("H", 1), G("CNOT", 0, 1), G("H", 1))
    assert cancel_hadamard_pairs(Circuit(1, 0, [G("H", 0)] * 3)).gates == (G("H", 0),)


def test_gadgetize_rejects_bad_input():
    with pytest.raises(UnsupportedGate):
        gadgetize(Circuit(1, 1, []))
    with pytest.raises(ValueError):
        gadgetize(Circuit(1, 0, []), h_cap=-1)


def test_partition_examples():
    assert partition(Circuit(1, 0, [G("T", 0), G("H", 0), G("T", 0)])) == [Circuit(1, 0, [G("T", 0)])] * 2
    assert len(partition(Circuit(2, 0, [G("T", 0), G("CNOT", 0, 1)]))) == 1
    assert len(partition(Circuit(2, 0, [G("H", 0), G("T", 1), G("H", 1), G("T", 0)]))) == 2


@given(st.integers(0, 2**32))
def test_partition_concatenation(seed):
    c = random_clifford_t_circuit(4, 14, 3, seed)
    layers, parts = hadamard_partition(c, cancel_h=False)
    assert len(layers) == len(parts) + 1
    out = compile_circuit(c, "re", "partition")
    assert verify_equivalence(c, out.circuit, trials=2, seed=seed).equivalent


def test_commute_correction_examples():
    g = commute_correction(WeightedPolynomial.from_terms(3, c={(0, 1, 2): 1}), 2)
    assert g == WeightedPolynomial.from_terms(3, q={(0, 1): 2})
    assert commute_correction(WeightedPolynomial.zero(3), 1) == WeightedPolynomial.zero(3)
    g = commute_correction(WeightedPolynomial.from_terms(1, l={0: 1}), 0)
    assert g.const == 1 and g.l.tolist() == [6]


@given(weighted_polys(max_n=6), st.data())
def test_commute_correction_exhaustive(f, data):
    j = data.draw(st.integers(0, f.n - 1))
    g = commute_correction(f, j)
    vals = f.evaluate_all()
    flipped = np.arange(2**f.n) ^ (1 << (f.n - 1 - j))  # qubit 0 is the most significant bit
    assert np.array_equal(g.evaluate_all(), (vals[flipped] - vals) % 8)
    assert g.degree() <= 2


@given(st.integers(0, 2**32), st.integers(1, 4))
def test_corrections_are_clifford(seed, nh):
    c = random_clifford_t_circuit(3, 12, nh, seed)
    for form in gadgetize(c, cancel_h=False):
        assert form.h == len(form.corrections)
        for corr in form.corrections:
            assert all(a % 2 == 0 for _, a in corr.phase.terms)
