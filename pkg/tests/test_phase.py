from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from strategies import gate_matrices, phase_polys, signatures, weighted_polys
from topt.circuit import Circuit, Gate
from topt.gf2 import BitMatrix
from topt.phase import (
    PhasePolynomial, SignatureTensor3, UnsupportedGate, WeightedPolynomial, all_inputs, chi, eval_phase,
    extract, extract_affine, monomial_index_sets, pp_from_wp, pp_to_A, proper, signature_from_A,
    signature_from_wp, wp_from_A, wp_from_pp, wp_from_signature,
)
from topt.simulator import basis_state, unitary_apply

OMEGA = np.exp(1j * np.pi / 4)


def pp(n, *terms):
    return PhasePolynomial(n, list(terms))


def test_extract_examples():
    p, E = extract(Circuit(1, 0, [Gate("T", (0,))]))
    assert p.terms == [((1,), 1)] and E == BitMatrix.identity(1)
    p, E = extract(Circuit(2, 0, [Gate("CNOT", (0, 1)), Gate("T", (1,))]))
    assert p.terms == [((1, 1), 1)] and E.tolist() == [[1, 0], [1, 1]]
    p, E = extract(Circuit(1, 0, [Gate("S", (0,)), Gate("T", (0,))]))
    assert p.terms == [((1,), 3)] and E == BitMatrix.identity(1)


def test_extract_rejects_hadamard():
    with pytest.raises(UnsupportedGate):
        extract(Circuit(1, 0, [Gate("H", (0,))]))


def _check_against_simulator(c: Circuit):
    ext = extract_affine(c)
    for x in all_inputs(c.n):
        out = unitary_apply(c, basis_state(x))
        y = (ext.E @ x) ^ ext.b
        f = int(ext.pp.evaluate_all()[int("".join(map(str, x)) or "0", 2)])
        assert np.allclose(out, OMEGA**f * basis_state(y), atol=1e-12)


def test_extract_matches_simulator():
    rng = np.random.default_rng(7)
    kinds = ["CNOT", "T", "TDG", "S", "SDG", "Z", "X", "Y", "CZ", "CS", "CCZ"]
    arity = {"CNOT": 2, "CZ": 2, "CS": 2, "CCZ": 3}
    for _ in range(40):
        n = int(rng.integers(3, 5))
        gates = []
        for _ in range(int(rng.integers(0, 15))):
            k = str(rng.choice(kinds))
            gates.append(Gate(k, tuple(int(q) for q in rng.permutation(n)[: arity.get(k, 1)])))
        _check_against_simulator(Circuit(n, 0, gates))


def test_all_inputs_order():
    assert all_inputs(2).tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]


def test_wp_from_pp_examples():
    f = wp_from_pp(pp(1, ((1,), 1)))
    assert f.l.tolist() == [1]
    f = wp_from_pp(pp(2, ((1, 1), 1)))
    assert f.l.tolist() == [1, 1] and f.q[0, 1] == 7
    f = wp_from_pp(pp(3, ((1, 1, 1), 1)))
    assert f.l.tolist() == [1, 1, 1]
    assert [f.q[i, j] for i, j in combinations(range(3), 2)] == [7, 7, 7]
    assert f.c[0, 1, 2] == 1


@given(phase_polys(max_n=7))
def test_wp_from_pp_exhaustive(p):
    assert np.array_equal(wp_from_pp(p).evaluate_all(), p.evaluate_all())


@given(weighted_polys())
def test_pp_from_wp_inverse(f):
    assert np.array_equal(wp_from_pp(pp_from_wp(f)).evaluate_all(), f.evaluate_all())


def test_signature_from_wp_examples():
    S = signature_from_wp(WeightedPolynomial.from_terms(3, c={(0, 1, 2): 1}))
    assert S == SignatureTensor3.from_entries(3, [(0, 1, 2)])
    assert S.dense[2, 0, 1] == 1 and S.dense[0, 0, 1] == 0
    assert signature_from_wp(WeightedPolynomial.from_terms(2, l={0: 2})).is_zero()
    S = signature_from_wp(WeightedPolynomial.from_terms(2, q={(0, 1): 3}))
    assert S.dense[0, 0, 1] == 1 and S.dense[0, 1, 1] == 1 and S.dense[0, 0, 0] == 0


def test_pp_to_A_examples():
    assert pp_to_A(pp(2, ((1, 0), 1))).tolist() == [[1], [0]]
    assert pp_to_A(pp(2, ((1, 0), 3))).tolist() == [[1, 1, 1], [0, 0, 0]]
    A = pp_to_A(pp(2, ((1, 1), 7)))
    assert A.shape == (2, 7) and A.bits.all()


@given(phase_polys(max_n=7))
def test_pp_to_A_phase(p):
    A = pp_to_A(p)
    for x in all_inputs(p.n)[:64]:
        assert (eval_phase(A, x) + p.const) % 8 == p.evaluate_all()[int("".join(map(str, x)), 2)]


def test_proper_examples():
    e1, e2 = [1, 0], [0, 1]
    assert proper(BitMatrix.from_columns([e1, e1, e1], 2)).tolist() == [[1], [0]]
    assert proper(BitMatrix.from_columns([[0, 0], e2], 2)).tolist() == [[0], [1]]
    assert proper(BitMatrix.from_columns([e1, e2, e1, e2], 2)).shape == (2, 0)


@given(gate_matrices())
def test_proper_invariants(A):
    P = proper(A)
    cols = [tuple(c) for c in P.bits.T]
    assert len(set(cols)) == len(cols) and all(any(c) for c in cols)
    assert signature_from_A(P) == signature_from_A(A)


def test_signature_from_A_examples():
    S = signature_from_A(BitMatrix.identity(3))
    assert S == SignatureTensor3.from_entries(3, [(0,), (1,), (2,)])
    S = signature_from_A(BitMatrix([[1], [1], [0]]))
    assert S == SignatureTensor3.from_entries(3, [(0,), (1,), (0, 1)])
    assert signature_from_A(BitMatrix([[1, 1], [1, 1]])).is_zero()


@given(phase_polys())
def test_signature_consistency(p):
    assert signature_from_A(pp_to_A(p)) == signature_from_wp(wp_from_pp(p))


def test_eval_phase_examples():
    assert eval_phase(BitMatrix([[1], [0]]), [1, 0]) == 1
    assert eval_phase(BitMatrix([[1], [1]]), [1, 1]) == 0
    assert eval_phase(BitMatrix([[1, 0, 1], [0, 1, 1]]), [1, 0]) == 2


def test_chi_examples():
    A = BitMatrix.identity(3)
    assert not chi(A, [0, 0, 0]).bits.any()
    assert chi(BitMatrix.identity(2), [1, 1]).shape == (0, 2)
    assert chi(A, [1, 1, 0]).tolist() == [[0, 0, 0]]


@given(gate_matrices(max_n=7), st.data())
def test_chi_shape_and_rows(A, data):
    z = np.array(data.draw(st.lists(st.integers(0, 1), min_size=A.rows, max_size=A.rows)), np.uint8)
    X = chi(A, z)
    n = A.rows
    assert X.shape == (n * (n - 1) * (n - 2) // 6, A.cols)


def test_wp_from_A_examples():
    assert wp_from_A(BitMatrix([[1]])).l.tolist() == [1]
    f = wp_from_A(BitMatrix([[1], [1]]))
    assert f.l.tolist() == [1, 1] and f.q[0, 1] == 7
    assert wp_from_A(BitMatrix.zeros(3, 0)) == WeightedPolynomial.zero(3)


@given(gate_matrices())
def test_wp_from_A_matches_pp(A):
    terms = [(tuple(int(b) for b in col), 1) for col in A.bits.T if col.any()]
    assert np.array_equal(wp_from_A(A).evaluate_all(), wp_from_pp(PhasePolynomial(A.rows, terms)).evaluate_all())


@given(signatures())
def test_signature_roundtrip(S):
    assert signature_from_wp(wp_from_signature(S)) == S
    assert SignatureTensor3.from_vector(S.n, S.vector()) == S


def test_signature_symmetry_enforced():
    t = np.zeros((3, 3, 3), np.uint8)
    t[0, 1, 2] = 1
    with pytest.raises(ValueError):
        SignatureTensor3(3, t)


def test_monomial_count():
    assert len(monomial_index_sets(3)) == 7
    assert len(monomial_index_sets(6)) == 6 + 15 + 20
