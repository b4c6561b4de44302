import pytest
from hypothesis import given, strategies as st

from topt.circuit import (
    GATE_ARITY, IFX, MEASX, Circuit, Gate, ParseError, ccz_gates, emit, expand_multiqubit_phases,
    inverse_gates, parse, parse_qc, t_count, toffoli_gates,
)

UNITARY = sorted(GATE_ARITY)


def test_parse_examples():
    assert parse("qubits 1\nT q0") == Circuit(1, 0, [Gate("T", (0,))])
    c = parse("qubits 2\nCNOT q0 q1\nT q1")
    assert [g.kind for g in c.gates] == ["CNOT", "T"]
    assert c.gates[0].qubits == (0, 1)


@pytest.mark.parametrize("text, line", [
    ("qubits 1\nFOO q0", 2),
    ("qubits 1\nCNOT q0", 2),
    ("qubits 2\nT q2", 2),
    ("qubits 1\n\nT q0\nifx m0 { X q0 }", 4),
])
def test_parse_errors_carry_position(text, line):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.line == line


def test_parse_is_case_insensitive_and_skips_comments():
    c = parse("QUBITS 2  # header\n cx q0 q1 # comment\n\n tdg Q1\n")
    assert [g.kind for g in c.gates] == ["CNOT", "TDG"]


def test_emit_examples():
    assert emit(Circuit(1)).strip() == "qubits 1"
    assert emit(Circuit(1, 0, [Gate("T", (0,))])).strip() == "qubits 1\nT q0"
    c = Circuit(1, 1, [Gate("CNOT", (0, 1)), Gate(MEASX, (0,), 0), Gate(IFX, (), 0, (Gate("X", (1,)), Gate("S", (1,))))])
    text = emit(c)
    assert "measx q0 -> m0" in text and "ifx m0 {" in text
    assert parse(text) == c


def test_multiline_ifx():
    c = parse("qubits 1 ancillas 1\nmeasx q0 -> m3\nifx m3 {\n  X q1\n  S q1\n}\n")
    assert c.gates[1].body == (Gate("X", (1,)), Gate("S", (1,)))


def test_t_count():
    assert t_count(Circuit(1, 0, [Gate("T", (0,)), Gate("TDG", (0,)), Gate("S", (0,))])) == 2
    assert t_count(Circuit(3, 0, [Gate("CCZ", (0, 1, 2))])) == 0
    assert t_count(Circuit(3, 0, ccz_gates(0, 1, 2))) == 7
    assert t_count(expand_multiqubit_phases(Circuit(3, 0, [Gate("CCZ", (0, 1, 2))]))) == 7
    assert t_count(Circuit(2)) == 0
    body = (Gate("T", (1,)),)
    c = Circuit(1, 1, [Gate(MEASX, (0,), 0), Gate(IFX, (), 0, body)])
    assert t_count(c) == 1


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("CNOT", (0, 0))
    with pytest.raises(ValueError):
        Gate("T", (0, 1))
    with pytest.raises(ValueError):
        Circuit(1, 0, [Gate(IFX, (), 0, ())])
    with pytest.raises(ValueError):
        Circuit(1, 0, [Gate(MEASX, (0,), 0), Gate(MEASX, (0,), 0)])


def test_inverse_gates():
    gates = [Gate("T", (0,)), Gate("S", (1,)), Gate("CNOT", (0, 1))]
    inv = inverse_gates(gates)
    assert [g.kind for g in inv] == ["CNOT", "SDG", "TDG"]


def test_parse_qc():
    src = ".v a b c\n.i a b c\n.o c\nBEGIN\ntof a b c\ntof a c\ntof c\nH a\nZ a b\nEND\n"
    c = parse_qc(src)
    assert c.n == 3
    assert t_count(c) == 7
    kinds = [g.kind for g in c.gates]
    assert kinds[-3:] == ["X", "H", "CZ"]
    assert kinds.count("CNOT") >= 1
    assert Circuit(3, 0, toffoli_gates(0, 1, 2)).gates == c.gates[: len(toffoli_gates(0, 1, 2))]


def test_parse_qc_errors():
    with pytest.raises(ParseError):
        parse_qc(".v a b\nBEGIN\ntof a z\nEND\n")
    with pytest.raises(ParseError):
        parse_qc(".v a b c d\nBEGIN\ntof a b c d\nEND\n")


@st.composite
def circuits(draw):
    n = draw(st.integers(1, 4))
    h = draw(st.integers(0, 2))
    N = n + h
    gates = []
    label = 0
    for _ in range(draw(st.integers(0, 12))):
        kinds = [k for k in UNITARY if GATE_ARITY[k] <= N]
        k = draw(st.sampled_from(kinds + [MEASX]))
        if k == MEASX:
            q = draw(st.integers(0, N - 1))
            gates.append(Gate(MEASX, (q,), label))
            body = [Gate("X", (draw(st.integers(0, N - 1)),))]
            gates.append(Gate(IFX, (), label, tuple(body)))
            label += 1
            continue
        qs = draw(st.permutations(range(N)))[: GATE_ARITY[k]]
        gates.append(Gate(k, tuple(qs)))
    return Circuit(n, h, gates)


@given(circuits())
def test_parse_emit_roundtrip(c):
    assert parse(emit(c)) == c
