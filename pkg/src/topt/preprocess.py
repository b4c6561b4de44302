"""Isolate the non-Clifford content of a circuit into diagonal CNOT+T blocks.

Hadamards that sit before every other gate on their wire (prefix) or after
every other gate on it (suffix) stay outside. Each remaining (internal) H on
logical qubit ``q``, currently held by physical wire ``p``, is replaced by a
gadget: a fresh ``|+>`` ancilla ``a``, ``CZ(p, a)`` written as
``S p; S a; CNOT p a; SDG a; CNOT p a``, and an X-basis measurement of ``p``
whose outcome ``m`` calls for ``X^m`` on ``a``. From then on ``a`` holds
``q`` (a relabeling, no SWAP).

The ``X^m`` is pushed to the end of the block: with ``W`` the part of the
block after the gadget, ``W X_a W^dag`` is a Pauli X string times a diagonal
Clifford, stored as a :class:`Correction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from topt.circuit import CLIFFORD_T, IFX, MEASX, Circuit, Gate
from topt.gf2 import BitMatrix, invert
from topt.phase import (
    PhasePolynomial,
    UnsupportedGate,
    WeightedPolynomial,
    extract_affine,
    pp_from_wp,
    wp_from_pp,
)


@dataclass
class Correction:
    """``ifx m { U_phase ; X^x_mask }`` on the block's output wires."""

    measured: int  # physical wire measured in the X basis
    x_mask: np.ndarray
    phase: PhasePolynomial  # even coefficients only; constant is global phase


@dataclass
class GadgetizedForm:
    n: int
    h: int
    block: Circuit  # on n + h wires; CNOT, X, Y and diagonal gates only
    corrections: list[Correction] = field(default_factory=list)
    layout: list[int] = field(default_factory=list)  # logical data qubit -> output wire
    prefix_h: list[int] = field(default_factory=list)
    suffix_h: list[int] = field(default_factory=list)
    N_p: int = 1

    @property
    def E(self) -> BitMatrix:
        return extract_affine(self.block).E

    @property
    def measured(self) -> list[int]:
        return [c.measured for c in self.corrections]


def commute_correction(f: WeightedPolynomial, j: int) -> WeightedPolynomial:
    """``g(x) = f(x + e_j) - f(x)`` (mod 8), which has degree at most 2."""
    n = f.n
    L = np.zeros(n, np.int64)
    Q = np.zeros((n, n), np.int64)
    const = int(f.l[j])
    L[j] -= 2 * f.l[j]
    for i in range(n):
        if i == j:
            continue
        a, b = min(i, j), max(i, j)
        qij = int(f.q[a, b])
        L[i] += 2 * qij
        Q[a, b] -= 2 * qij
    for (a, b, c), v in f.cubic_terms():
        if j in (a, b, c):
            i, k = [t for t in (a, b, c) if t != j]
            Q[i, k] += 2 * v
    return WeightedPolynomial(n, L, Q, None, const)


def conjugated_x(W: Circuit, wire: int) -> tuple[np.ndarray, PhasePolynomial]:
    """``W X_wire W^dag = X^mask U_h`` with ``U_h`` applied first.

    ``W`` maps ``|x> -> w^f(x) |E x + b>``; then ``mask = E e_wire`` and
    ``h(y) = g(E^-1 (y + b))`` with ``g = commute_correction(f, wire)``.
    """
    ext = extract_affine(W)
    N = W.num_qubits
    E = ext.E
    Einv_T = invert(E).bits.T.astype(np.int64)
    g = commute_correction(wp_from_pp(ext.pp), wire)
    gp = pp_from_wp(g)
    const = gp.const
    terms = []
    for lam, a in gp.terms:
        u = (Einv_T @ np.asarray(lam, np.int64)) & 1
        if int(u @ ext.b.astype(np.int64)) & 1:
            const += a
            a = -a
        terms.append((tuple(int(v) for v in u), a))
    mask = E.bits[:, wire].copy()
    return mask, PhasePolynomial(N, terms, const)


# classification


def _check_input(c: Circuit):
    if c.h or not c.is_unitary():
        raise UnsupportedGate("input must be a unitary circuit without ancillas")
    for g in c.gates:
        if g.kind not in CLIFFORD_T:
            raise UnsupportedGate(f"{g.kind} is not a Clifford+T gate")


def classify_hadamards(c: Circuit) -> list[str]:
    """Per gate: ``'prefix'``, ``'suffix'``, ``'internal'`` for H; ``''`` otherwise."""
    first = {}
    last = {}
    for i, g in enumerate(c.gates):
        if g.kind != "H":
            for q in g.qubits:
                first.setdefault(q, i)
                last[q] = i
    out = []
    for i, g in enumerate(c.gates):
        if g.kind != "H":
            out.append("")
            continue
        q = g.qubits[0]
        if q not in first or i < first[q]:
            out.append("prefix")
        elif i > last[q]:
            out.append("suffix")
        else:
            out.append("internal")
    return out


def _cancel_pairs(wires: list[int]) -> list[int]:
    odd: dict[int, int] = {}
    for w in wires:
        odd[w] = odd.get(w, 0) ^ 1
    return [w for w in dict.fromkeys(wires) if odd[w]]


def cancel_hadamard_pairs(c: Circuit) -> Circuit:
    """Drop pairs of H on the same wire with no other gate on that wire in between."""
    kept: list[Gate | None] = []
    last_h: dict[int, int] = {}  # wire -> index in kept of an H still open on it
    for g in c.gates:
        if g.kind == "H":
            q = g.qubits[0]
            if q in last_h:
                kept[last_h.pop(q)] = None
                continue
            last_h[q] = len(kept)
            kept.append(g)
            continue
        for q in g.qubits:
            last_h.pop(q, None)
        if g.kind == IFX:
            for b in g.body:
                for q in b.qubits:
                    last_h.pop(q, None)
        kept.append(g)
    return Circuit(c.n, c.h, [g for g in kept if g is not None])


# gadgetization


def _gadgetize_segment(n: int, gates: list[tuple[Gate, bool]]) -> GadgetizedForm:
    """One block for a gate run; ``True`` marks an H to gadgetize."""
    h = sum(1 for _, gad in gates if gad)
    phys = list(range(n))
    block: list[Gate] = []
    gadgets: list[tuple[int, int, int]] = []  # (measured wire, ancilla, index into block after CZ)
    for g, gad in gates:
        if gad:
            q = g.qubits[0]
            p = phys[q]
            a = n + len(gadgets)
            block += [
                Gate("S", (p,)), Gate("S", (a,)),
                Gate("CNOT", (p, a)), Gate("SDG", (a,)), Gate("CNOT", (p, a)),
            ]
            gadgets.append((p, a, len(block)))
            phys[q] = a
        else:
            block.append(g.remap(phys))
    N = n + h
    corrections = []
    for p, a, start in gadgets:
        mask, phase = conjugated_x(Circuit(N, 0, block[start:]), a)
        corrections.append(Correction(p, mask, phase))
    return GadgetizedForm(n, h, Circuit(n, h, block), corrections, phys)


def gadgetize(c: Circuit, h_cap: int | None = None, cancel_h: bool = True) -> list[GadgetizedForm]:
    """Hadamard-gadgetize ``c``; with ``h_cap`` the internal H's are split into runs of at most ``h_cap``.

    A run closes when it holds ``h_cap`` gadgets and another internal H
    arrives; that H opens the next run. ``h_cap == 0`` means partition mode.
    Adjacent H pairs are removed first unless ``cancel_h`` is false.
    """
    _check_input(c)
    if h_cap is not None and h_cap < 0:
        raise ValueError("h_cap must be non-negative")
    if h_cap == 0:
        return partition_forms(c, cancel_h)
    if cancel_h:
        c = cancel_hadamard_pairs(c)
    kinds = classify_hadamards(c)
    prefix = [g.qubits[0] for g, k in zip(c.gates, kinds) if k == "prefix"]
    suffix = [g.qubits[0] for g, k in zip(c.gates, kinds) if k == "suffix"]
    segments: list[list[tuple[Gate, bool]]] = [[]]
    count = 0
    for g, k in zip(c.gates, kinds):
        if k in ("prefix", "suffix"):
            continue
        if k == "internal":
            if h_cap is not None and count == h_cap:
                segments.append([])
                count = 0
            count += 1
        segments[-1].append((g, k == "internal"))
    forms = [_gadgetize_segment(c.n, seg) for seg in segments]
    forms[0].prefix_h = _cancel_pairs(prefix)
    forms[-1].suffix_h = _cancel_pairs(suffix)
    for f in forms:
        f.N_p = len(forms)
    return forms


# partitioning


def hadamard_partition(c: Circuit, cancel_h: bool = True) -> tuple[list[list[int]], list[Circuit]]:
    """Greedy H-bounded partition: ``layers[i]`` precedes ``parts[i]``; ``layers[-1]`` ends the circuit.

    An H on a wire untouched by the current partition joins the preceding H
    layer (it commutes with everything in between); otherwise the partition
    closes and the H opens a new layer.
    """
    _check_input(c)
    if cancel_h:
        c = cancel_hadamard_pairs(c)
    layers: list[list[int]] = [[]]
    parts: list[list[Gate]] = [[]]
    touched: set[int] = set()
    for g in c.gates:
        if g.kind == "H":
            q = g.qubits[0]
            if q in touched:
                layers.append([])
                parts.append([])
                touched = set()
            layers[-1].append(q)
        else:
            parts[-1].append(g)
            touched.update(g.qubits)
    if not parts[-1] and len(parts) > 1:
        parts.pop()
        tail = layers.pop()
        layers[-1].extend(tail)
    layers = [_cancel_pairs(layer) for layer in layers]
    if len(layers) == len(parts):
        layers.append([])
    return layers, [Circuit(c.n, 0, p) for p in parts]


def partition(c: Circuit) -> list[Circuit]:
    """H-free partitions of ``c`` (see :func:`hadamard_partition` for the H layers)."""
    return hadamard_partition(c)[1]


def partition_forms(c: Circuit, cancel_h: bool = True) -> list[GadgetizedForm]:
    layers, parts = hadamard_partition(c, cancel_h)
    forms = []
    for i, p in enumerate(parts):
        f = GadgetizedForm(c.n, 0, p, [], list(range(c.n)), prefix_h=layers[i])
        forms.append(f)
    forms[-1].suffix_h = layers[-1]
    for f in forms:
        f.N_p = len(forms)
    return forms
