"""Turn optimized gate synthesis matrices back into circuits and assemble the output.

Each distinct column ``v`` with multiplicity ``k`` (mod 8) becomes one phase
gate (T, S, S T, Z, Z T, SDG, TDG for k = 1..7) on the lowest qubit of
supp(v), conjugated by CNOTs from the other support qubits into it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from topt.circuit import IFX, MEASX, Circuit, Gate
from topt.gf2 import BitMatrix, SingularMatrix
from topt.phase import (
    PhasePolynomial,
    WeightedPolynomial,
    extract_affine,
    pp_from_wp,
    pp_to_A,
    proper,
    signature_from_wp,
    wp_from_A,
    wp_from_pp,
)
from topt.preprocess import Correction, GadgetizedForm

PHASE_GATES = {
    1: ["T"], 2: ["S"], 3: ["S", "T"], 4: ["Z"], 5: ["Z", "T"], 6: ["SDG"], 7: ["TDG"],
}


class EmptyColumn(ValueError):
    """Gate synthesis matrix has an all-zero column."""


class ParityMismatch(ValueError):
    """Two weighted polynomials have different signatures."""


def _phase_on_form(support: list[int], k: int) -> list[Gate]:
    k %= 8
    if not k:
        return []
    t = support[0]
    ladder = [Gate("CNOT", (s, t)) for s in support[1:]]
    return ladder + [Gate(name, (t,)) for name in PHASE_GATES[k]] + ladder[::-1]


def circuit_from_terms(n: int, terms) -> list[Gate]:
    """Gates for ``sum a * lambda(x)``; ``terms`` is an iterable of (bit tuple, coefficient)."""
    gates: list[Gate] = []
    for lam, a in terms:
        support = [i for i, b in enumerate(lam) if b]
        if not support:
            raise EmptyColumn("linear form is zero")
        gates += _phase_on_form(support, a)
    return gates


def circuit_from_A(A: BitMatrix) -> Circuit:
    """Diagonal circuit with phase ``|A^T x|``; duplicate columns merge into S-type gates."""
    counts: dict[tuple[int, ...], int] = {}
    for col in A.columns():
        if not col.any():
            raise EmptyColumn("gate synthesis matrix has an all-zero column")
        key = tuple(int(b) for b in col)
        counts[key] = counts.get(key, 0) + 1
    return Circuit(A.rows, 0, circuit_from_terms(A.rows, counts.items()))


def circuit_from_pp(p: PhasePolynomial) -> Circuit:
    """Diagonal circuit for a phase polynomial; the constant (global phase) is dropped."""
    return Circuit(p.n, 0, circuit_from_terms(p.n, p.terms))


def clifford_correction(f_in: WeightedPolynomial, f_out: WeightedPolynomial) -> Circuit:
    """T-free circuit for ``U_{f_in - f_out}``; constants are dropped."""
    if signature_from_wp(f_in) != signature_from_wp(f_out):
        raise ParityMismatch("input and output polynomials have different signatures")
    d = f_in - f_out
    d.const = 0
    c = circuit_from_pp(pp_from_wp(d))
    assert not any(g.kind in ("T", "TDG") for g in c.gates)
    return c


def cnot_network_from_E(E: BitMatrix) -> Circuit:
    """CNOT circuit whose tracked linear map is ``E`` (row w = output form on wire w)."""
    n = E.rows
    if E.rows != E.cols:
        raise ValueError("E must be square")
    M = E.bits.copy()
    ops: list[tuple[int, int]] = []  # (control, target): row_target ^= row_control

    def add(c: int, t: int):
        M[t] ^= M[c]
        ops.append((c, t))

    for j in range(n):
        if not M[j, j]:
            rows = [r for r in range(j + 1, n) if M[r, j]]
            if not rows:
                raise SingularMatrix("E is not invertible")
            add(rows[0], j)
        for i in range(n):
            if i != j and M[i, j]:
                add(j, i)
    return Circuit(n, 0, [Gate("CNOT", (c, t)) for c, t in reversed(ops)])


# block synthesis and assembly


@dataclass
class BlockResult:
    form: GadgetizedForm
    A_in: BitMatrix
    A_out: BitMatrix
    circuit: Circuit  # on n + h local wires, data back on 0..n-1, measured on n..n+h-1


Optimizer = Callable[[WeightedPolynomial, BitMatrix], BitMatrix]


def _output_permutation(form: GadgetizedForm) -> list[int]:
    """``P[wire] = new index``: data to 0..n-1 in logical order, measured wires after."""
    N = form.n + form.h
    P = [-1] * N
    for q, w in enumerate(form.layout):
        P[w] = q
    for k, corr in enumerate(form.corrections):
        P[corr.measured] = form.n + k
    assert sorted(P) == list(range(N))
    return P


def synthesize_block(form: GadgetizedForm, optimizer: Optimizer, first_label: int = 0) -> BlockResult:
    """Optimize one block and emit its circuit with measurements and classically controlled corrections."""
    N = form.n + form.h
    ext = extract_affine(form.block)
    f_in = wp_from_pp(ext.pp)
    A_in = pp_to_A(ext.pp)
    A_out = proper(optimizer(f_in, A_in))
    f_out = wp_from_A(A_out)
    P = _output_permutation(form)
    Pm = np.zeros((N, N), np.uint8)
    for w, t in enumerate(P):
        Pm[t, w] = 1
    E2 = BitMatrix((Pm.astype(np.int64) @ ext.E.bits.astype(np.int64)) % 2, N, N)
    b2 = np.zeros(N, np.uint8)
    for w in range(N):
        b2[P[w]] = ext.b[w]
    gates: list[Gate] = []
    gates += circuit_from_A(A_out).gates
    gates += clifford_correction(f_in, f_out).gates
    gates += cnot_network_from_E(E2).gates
    gates += [Gate("X", (w,)) for w in range(N) if b2[w]]
    for k, corr in enumerate(form.corrections):
        label = first_label + k
        gates.append(Gate(MEASX, (P[corr.measured],), outcome=label))
        gates.append(Gate(IFX, (), outcome=label, body=tuple(_correction_body(corr, P))))
    return BlockResult(form, A_in, A_out, Circuit(form.n, form.h, gates))


def _correction_body(corr: Correction, P: list[int]) -> list[Gate]:
    N = len(P)
    terms = []
    for lam, a in corr.phase.terms:
        v = [0] * N
        for w, bit in enumerate(lam):
            if bit:
                v[P[w]] = 1
        terms.append((tuple(v), a))
    body = circuit_from_terms(N, terms)
    body += [Gate("X", (P[w],)) for w in range(N) if corr.x_mask[w]]
    return body


def assemble(forms: list[GadgetizedForm], optimizer: Optimizer) -> tuple[Circuit, list[BlockResult]]:
    """Synthesize every block and join them on a shared register.

    Block ``j`` gets its own ancillas; local wire ``n + i`` maps to global
    ``n + offset_j + i``. H layers recorded on the forms are emitted around
    the blocks.
    """
    if not forms:
        raise ValueError("nothing to assemble")
    n = forms[0].n
    total_h = sum(f.h for f in forms)
    gates: list[Gate] = []
    results: list[BlockResult] = []
    offset = 0
    label = 0
    for form in forms:
        gates += [Gate("H", (q,)) for q in form.prefix_h]
        res = synthesize_block(form, optimizer, first_label=label)
        results.append(res)
        mapping = [q if q < n else q + offset for q in range(n + form.h)]
        gates += [g.remap(mapping) for g in res.circuit.gates]
        gates += [Gate("H", (q,)) for q in form.suffix_h]
        offset += form.h
        label += form.h
    return Circuit(n, total_h, gates), results
