import numpy as np
import pytest

from topt.circuit import IFX, MEASX, Circuit, Gate
from topt.simulator import (
    MAX_QUBITS, TooLarge, apply_gates, basis_state, fidelity, random_state, simulate_branches,
    surviving_state, unitary_apply,
)

OMEGA = np.exp(1j * np.pi / 4)
PLUS = np.array([1, 1]) / np.sqrt(2)


def test_h_on_zero():
    branches = simulate_branches(Circuit(1, 0, [Gate("H", (0,))]), basis_state([0]))
    assert len(branches) == 1
    assert np.allclose(branches[0].state, PLUS)


def test_t_on_plus():
    out = unitary_apply(Circuit(1, 0, [Gate("T", (0,))]), PLUS)
    assert np.allclose(out, np.array([1, OMEGA]) / np.sqrt(2))


def test_qubit_zero_is_most_significant():
    out = unitary_apply(Circuit(2, 0, [Gate("X", (0,))]), basis_state([0, 0]))
    assert np.allclose(out, basis_state([1, 0]))
    out = unitary_apply(Circuit(2, 0, [Gate("CNOT", (0, 1))]), basis_state([1, 0]))
    assert np.allclose(out, basis_state([1, 1]))


@pytest.mark.parametrize("pair, single", [(("T", "T"), "S"), (("S", "S"), "Z"), (("T", "TDG"), None),
                                          (("S", "SDG"), None), (("H", "H"), None)])
def test_gate_identities(pair, single, rng):
    for _ in range(5):
        psi = random_state(2, rng)
        a = unitary_apply(Circuit(2, 0, [Gate(k, (1,)) for k in pair]), psi)
        b = unitary_apply(Circuit(2, 0, [Gate(single, (1,))] if single else []), psi)
        assert np.allclose(a, b, atol=1e-12)


def test_cs_ccz_cz(rng):
    psi = random_state(3, rng)
    twice = unitary_apply(Circuit(3, 0, [Gate("CS", (0, 2)), Gate("CS", (0, 2))]), psi)
    assert np.allclose(twice, unitary_apply(Circuit(3, 0, [Gate("CZ", (0, 2))]), psi))
    ccz = unitary_apply(Circuit(3, 0, [Gate("CCZ", (0, 1, 2))]), basis_state([1, 1, 1]))
    assert np.allclose(ccz, -basis_state([1, 1, 1]))


def test_norm_preserved(rng):
    kinds = ["H", "X", "Y", "Z", "S", "SDG", "T", "TDG"]
    psi = random_state(4, rng)
    gates = []
    for _ in range(60):
        k = rng.choice(kinds + ["CNOT", "CZ", "CS", "CCZ"])
        ar = {"CNOT": 2, "CZ": 2, "CS": 2, "CCZ": 3}.get(k, 1)
        gates.append(Gate(str(k), tuple(int(q) for q in rng.permutation(4)[:ar])))
    out = apply_gates(psi, gates, 4)
    assert abs(np.linalg.norm(out) - 1) < 1e-12


def test_hadamard_gadget_branches(rng):
    # CZ(q, a) with a in |+>, measure q in X, fix with X on a: a holds H|psi>
    gad = Circuit(1, 1, [Gate("CZ", (0, 1)), Gate(MEASX, (0,), 0), Gate(IFX, (), 0, (Gate("X", (1,)),))])
    for _ in range(5):
        psi = random_state(1, rng)
        want = unitary_apply(Circuit(1, 0, [Gate("H", (0,))]), psi)
        branches = simulate_branches(gad, psi)
        assert [b.outcomes[0] for b in branches] == [0, 1]
        assert abs(sum(b.probability for b in branches) - 1) < 1e-10
        for b in branches:
            assert fidelity(surviving_state(gad, b), want) > 1 - 1e-12


def test_too_large():
    with pytest.raises(TooLarge):
        simulate_branches(Circuit(MAX_QUBITS + 1), basis_state([0] * 2))
