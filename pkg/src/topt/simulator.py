"""Statevector simulator with X-basis measurement branching.

Qubit ``i`` is axis ``i`` of the ``(2,) * N`` reshaped state, so basis index
bit ``N - 1 - i`` holds qubit ``i``. Ancillas (``q{n}`` and up) are
initialised to ``|+>``. Measurement outcomes are enumerated exhaustively with
the 0 (``|+>``) branch first; nothing is sampled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from topt.circuit import IFX, MEASX, Circuit, Gate

MAX_QUBITS = 14
OMEGA = np.exp(1j * np.pi / 4)

_S2 = 1 / np.sqrt(2)
SINGLE = {
    "H": np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
}
# diagonal gates: phase applied when all operands are 1
PHASES = {
    "Z": -1, "S": 1j, "SDG": -1j, "T": OMEGA, "TDG": np.conj(OMEGA),
    "CZ": -1, "CS": 1j, "CCZ": -1,
}


class TooLarge(ValueError):
    """Register exceeds the simulator's qubit cap."""


@dataclass
class Branch:
    outcomes: dict[int, int]
    state: np.ndarray
    probability: float


def basis_state(bits) -> np.ndarray:
    bits = list(bits)
    psi = np.zeros(2 ** len(bits), dtype=complex)
    psi[int("".join(str(int(b)) for b in bits) or "0", 2)] = 1
    return psi


def random_state(num_qubits: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=2**num_qubits) + 1j * rng.normal(size=2**num_qubits)
    return v / np.linalg.norm(v)


def plus_states(h: int) -> np.ndarray:
    return np.full(2**h, 2 ** (-h / 2), dtype=complex)


def _apply(psi: np.ndarray, g: Gate, N: int) -> np.ndarray:
    sv = psi.reshape((2,) * N)
    if g.kind in PHASES:
        sv = sv.copy()
        idx = [slice(None)] * N
        for q in g.qubits:
            idx[q] = 1
        sv[tuple(idx)] *= PHASES[g.kind]
    elif g.kind == "CNOT":
        c, t = g.qubits
        sv = sv.copy()
        idx = [slice(None)] * N
        idx[c] = 1
        sub = sv[tuple(idx)]
        axis = t - 1 if t > c else t
        sv[tuple(idx)] = np.flip(sub, axis=axis)
    elif g.kind in SINGLE:
        q = g.qubits[0]
        sv = np.moveaxis(np.tensordot(SINGLE[g.kind], sv, axes=([1], [q])), 0, q)
    else:
        raise ValueError(f"cannot apply {g.kind} as a unitary")
    return np.ascontiguousarray(sv).reshape(-1)


def apply_gates(psi: np.ndarray, gates, num_qubits: int) -> np.ndarray:
    for g in gates:
        psi = _apply(psi, g, num_qubits)
    return psi


def _project_x(psi: np.ndarray, q: int, outcome: int, N: int) -> np.ndarray:
    """Apply (I + (-1)^outcome X_q) / 2."""
    flipped = _apply(psi, Gate("X", (q,)), N)
    return (psi + flipped) / 2 if outcome == 0 else (psi - flipped) / 2


def prepare_input(c: Circuit, psi: np.ndarray) -> np.ndarray:
    """Accept a state on the data register (ancillas get ``|+>``) or on all qubits."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size == 2**c.num_qubits:
        return psi.copy()
    if psi.size == 2**c.n:
        return np.kron(psi, plus_states(c.h))
    raise ValueError(f"input has {psi.size} amplitudes; expected 2^{c.n} or 2^{c.num_qubits}")


def simulate_branches(c: Circuit, psi: np.ndarray) -> list[Branch]:
    """All measurement branches of ``c`` applied to ``psi``.

    Branch states are normalised; a branch of probability zero keeps the zero
    vector so that the branch list always has ``2**(#measurements)`` entries.
    """
    N = c.num_qubits
    if N > MAX_QUBITS:
        raise TooLarge(f"{N} qubits exceeds the cap of {MAX_QUBITS}")
    state = prepare_input(c, psi)
    results: list[Branch] = []

    def run(pos: int, vec: np.ndarray, outcomes: dict[int, int]):
        while pos < len(c.gates):
            g = c.gates[pos]
            pos += 1
            if g.kind == MEASX:
                for bit in (0, 1):
                    run(pos, _project_x(vec, g.qubits[0], bit, N), {**outcomes, g.outcome: bit})
                return
            if g.kind == IFX:
                if outcomes[g.outcome]:
                    vec = apply_gates(vec, g.body, N)
            else:
                vec = _apply(vec, g, N)
        norm2 = float(np.vdot(vec, vec).real)
        out = vec / np.sqrt(norm2) if norm2 > 1e-300 else np.zeros_like(vec)
        results.append(Branch(outcomes, out, norm2))

    run(0, state, {})
    return results


def surviving_state(c: Circuit, branch: Branch) -> np.ndarray:
    """Contract every measured qubit with its post-measurement ``|+>``/``|->``.

    The result lives on the unmeasured qubits in ascending index order.
    """
    N = c.num_qubits
    sv = branch.state.reshape((2,) * N)
    measured = {g.qubits[0]: branch.outcomes[g.outcome] for g in c.gates if g.kind == MEASX}
    for q in sorted(measured, reverse=True):
        bra = np.array([_S2, -_S2 if measured[q] else _S2], dtype=complex)
        sv = np.tensordot(sv, bra, axes=([q], [0]))
    return np.ascontiguousarray(sv).reshape(-1)


def unitary_apply(c: Circuit, psi: np.ndarray) -> np.ndarray:
    """Run a unitary (measurement-free) circuit on ``psi``."""
    if not c.is_unitary():
        raise ValueError("circuit contains measurements")
    if c.num_qubits > MAX_QUBITS:
        raise TooLarge(f"{c.num_qubits} qubits exceeds the cap of {MAX_QUBITS}")
    return apply_gates(prepare_input(c, psi), c.gates, c.num_qubits)


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 for normalised vectors; insensitive to global phase."""
    return float(abs(np.vdot(a, b)) ** 2)
