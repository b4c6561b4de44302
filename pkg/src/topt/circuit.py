"""Circuit data model, text format, and the ``.qc`` benchmark importer.

Native format (gate names are case-insensitive, ``#`` starts a comment)::

    qubits 3 ancillas 1
    H q0
    CNOT q0 q1
    measx q1 -> m0
    ifx m0 { X q3; S q2 }

Qubits ``q0 .. q{n-1}`` form the data register; ``q{n} .. q{n+h-1}`` are
ancillas that start in ``|+>``. ``CNOT qc qt`` has control ``qc``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

GATE_ARITY = {
    "H": 1, "X": 1, "Y": 1, "Z": 1, "S": 1, "SDG": 1, "T": 1, "TDG": 1,
    "CZ": 2, "CS": 2, "CNOT": 2, "CCZ": 3,
}
DIAGONAL = frozenset({"Z", "S", "SDG", "T", "TDG", "CZ", "CS", "CCZ"})
CLIFFORD_T = frozenset(GATE_ARITY)
MEASX = "MEASX"
IFX = "IFX"

_ALIASES = {"CX": "CNOT", "SD": "SDG", "S*": "SDG", "SDAG": "SDG", "TD": "TDG", "T*": "TDG", "TDAG": "TDG"}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...] = ()
    outcome: int | None = None
    body: tuple["Gate", ...] = ()

    def __post_init__(self):
        if self.kind in GATE_ARITY:
            if len(self.qubits) != GATE_ARITY[self.kind]:
                raise ValueError(f"{self.kind} takes {GATE_ARITY[self.kind]} qubit(s), got {len(self.qubits)}")
        elif self.kind == MEASX:
            if len(self.qubits) != 1 or self.outcome is None:
                raise ValueError("MEASX needs one qubit and an outcome label")
        elif self.kind == IFX:
            if self.qubits or self.outcome is None:
                raise ValueError("IFX needs an outcome label and no direct operands")
            if any(g.kind in (MEASX, IFX) for g in self.body):
                raise ValueError("classically controlled blocks may only hold unitary gates")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated operand in {self.kind} {self.qubits}")

    def remap(self, mapping) -> "Gate":
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.outcome,
                    tuple(g.remap(mapping) for g in self.body))


@dataclass(frozen=True)
class Circuit:
    n: int
    h: int = 0
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        total = self.n + self.h
        seen: set[int] = set()
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < total:
                    raise ValueError(f"qubit {q} out of range for {total} qubits")
            if g.kind == MEASX:
                if g.outcome in seen:
                    raise ValueError(f"outcome m{g.outcome} produced twice")
                seen.add(g.outcome)
            elif g.kind == IFX:
                if g.outcome not in seen:
                    raise ValueError(f"ifx on m{g.outcome} before it is measured")
                for inner in g.body:
                    for q in inner.qubits:
                        if not 0 <= q < total:
                            raise ValueError(f"qubit {q} out of range for {total} qubits")

    @property
    def num_qubits(self) -> int:
        return self.n + self.h

    def __len__(self) -> int:
        return len(self.gates)

    def measured_qubits(self) -> list[int]:
        return [g.qubits[0] for g in self.gates if g.kind == MEASX]

    def is_unitary(self) -> bool:
        return all(g.kind not in (MEASX, IFX) for g in self.gates)

    def then(self, other: "Circuit") -> "Circuit":
        if (self.n, self.h) != (other.n, other.h):
            raise ValueError("register mismatch")
        return Circuit(self.n, self.h, self.gates + other.gates)


def t_count(c: Circuit) -> int:
    """Number of T and T-dagger gates, including those inside classically controlled blocks."""
    total = 0
    for g in c.gates:
        if g.kind in ("T", "TDG"):
            total += 1
        elif g.kind == IFX:
            total += sum(1 for inner in g.body if inner.kind in ("T", "TDG"))
    return total


def inverse_gates(gates) -> list[Gate]:
    """Adjoint of a unitary gate list."""
    dag = {"S": "SDG", "SDG": "S", "T": "TDG", "TDG": "T"}
    out = []
    for g in reversed(list(gates)):
        if g.kind == "CS":
            raise ValueError("CS adjoint is not in the gate set; lower it first")
        out.append(Gate(dag.get(g.kind, g.kind), g.qubits))
    return out


def toffoli_gates(a: int, b: int, c: int) -> list[Gate]:
    """Standard 7-T Toffoli with controls ``a``, ``b`` and target ``c``."""
    G = Gate
    return [
        G("H", (c,)),
        G("CNOT", (b, c)), G("TDG", (c,)), G("CNOT", (a, c)), G("T", (c,)),
        G("CNOT", (b, c)), G("TDG", (c,)), G("CNOT", (a, c)),
        G("T", (b,)), G("T", (c,)), G("H", (c,)),
        G("CNOT", (a, b)), G("T", (a,)), G("TDG", (b,)), G("CNOT", (a, b)),
    ]


def ccz_gates(a: int, b: int, c: int) -> list[Gate]:
    """CCZ as seven T/T-dagger gates conjugated by CNOTs."""
    G = Gate
    return [
        G("T", (a,)), G("T", (b,)), G("T", (c,)),
        G("CNOT", (a, b)), G("TDG", (b,)), G("CNOT", (a, b)),
        G("CNOT", (a, c)), G("TDG", (c,)), G("CNOT", (a, c)),
        G("CNOT", (b, c)), G("TDG", (c,)), G("CNOT", (b, c)),
        G("CNOT", (a, b)), G("CNOT", (b, c)), G("T", (c,)), G("CNOT", (b, c)), G("CNOT", (a, b)),
    ]


def cs_gates(a: int, b: int) -> list[Gate]:
    G = Gate
    return [G("T", (a,)), G("T", (b,)), G("CNOT", (a, b)), G("TDG", (b,)), G("CNOT", (a, b))]


def expand_multiqubit_phases(c: Circuit) -> Circuit:
    """Replace CS and CCZ by explicit CNOT+T sequences."""
    out: list[Gate] = []
    for g in c.gates:
        if g.kind == "CCZ":
            out.extend(ccz_gates(*g.qubits))
        elif g.kind == "CS":
            out.extend(cs_gates(*g.qubits))
        else:
            out.append(g)
    return Circuit(c.n, c.h, out)


# text format

_QUBIT = re.compile(r"q(\d+)$", re.IGNORECASE)
_LABEL = re.compile(r"m(\d+)$", re.IGNORECASE)


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def _parse_qubit(tok: str, lineno: int, col: int, total: int) -> int:
    m = _QUBIT.match(tok)
    if not m:
        raise ParseError(f"expected qubit like q0, got {tok!r}", lineno, col)
    q = int(m.group(1))
    if q >= total:
        raise ParseError(f"undeclared qubit {tok}", lineno, col)
    return q


def _parse_gate(text: str, lineno: int, offset: int, total: int) -> Gate:
    toks = [(m.group(0), m.start() + offset + 1) for m in re.finditer(r"\S+", text)]
    name, col = toks[0]
    kind = _ALIASES.get(name.upper(), name.upper())
    if kind not in GATE_ARITY:
        raise ParseError(f"unknown gate {name!r}", lineno, col)
    args = toks[1:]
    if len(args) != GATE_ARITY[kind]:
        raise ParseError(f"{kind} takes {GATE_ARITY[kind]} qubit(s), got {len(args)}", lineno, col)
    qubits = tuple(_parse_qubit(t, lineno, c, total) for t, c in args)
    if len(set(qubits)) != len(qubits):
        raise ParseError(f"repeated operand in {kind}", lineno, col)
    return Gate(kind, qubits)


def parse(text: str) -> Circuit:
    """Parse the native circuit format."""
    lines = text.splitlines()
    n = h = None
    gates: list[Gate] = []
    measured: set[int] = set()
    i = 0
    while i < len(lines):
        lineno = i + 1
        raw = _strip_comment(lines[i])
        i += 1
        if not raw.strip():
            continue
        stripped = raw.strip()
        col0 = raw.index(stripped[0]) + 1
        head = stripped.split()[0].lower()
        if n is None:
            m = re.fullmatch(r"qubits\s+(\d+)(?:\s+ancillas\s+(\d+))?", stripped, re.IGNORECASE)
            if not m:
                raise ParseError("expected header 'qubits <n> [ancillas <h>]'", lineno, col0)
            n, h = int(m.group(1)), int(m.group(2) or 0)
            continue
        total = n + h
        if head == "measx":
            m = re.fullmatch(r"measx\s+(\S+)\s*->\s*(\S+)", stripped, re.IGNORECASE)
            if not m:
                raise ParseError("expected 'measx q<i> -> m<t>'", lineno, col0)
            q = _parse_qubit(m.group(1), lineno, col0 + m.start(1), total)
            lab = _LABEL.match(m.group(2))
            if not lab:
                raise ParseError(f"bad outcome label {m.group(2)!r}", lineno, col0 + m.start(2))
            t = int(lab.group(1))
            if t in measured:
                raise ParseError(f"outcome m{t} produced twice", lineno, col0 + m.start(2))
            measured.add(t)
            gates.append(Gate(MEASX, (q,), outcome=t))
            continue
        if head == "ifx":
            m = re.match(r"ifx\s+(\S+)\s*\{", stripped, re.IGNORECASE)
            if not m:
                raise ParseError("expected 'ifx m<t> { ... }'", lineno, col0)
            lab = _LABEL.match(m.group(1))
            if not lab:
                raise ParseError(f"bad outcome label {m.group(1)!r}", lineno, col0 + m.start(1))
            t = int(lab.group(1))
            if t not in measured:
                raise ParseError(f"ifx on m{t} before it is measured", lineno, col0 + m.start(1))
            body_text = stripped[m.end():]
            body_parts: list[tuple[str, int, int]] = []
            start_line = lineno
            offset = col0 - 1 + m.end()
            while "}" not in body_text:
                body_parts.append((body_text, lineno, offset))
                if i >= len(lines):
                    raise ParseError("unterminated ifx block", start_line, col0)
                body_text = _strip_comment(lines[i])
                lineno = i + 1
                offset = 0
                i += 1
            before, _, after = body_text.partition("}")
            if after.strip():
                raise ParseError("unexpected text after '}'", lineno, offset + len(before) + 2)
            body_parts.append((before, lineno, offset))
            body: list[Gate] = []
            for part, ln, off in body_parts:
                pos = 0
                for piece in part.split(";"):
                    if piece.strip():
                        lead = len(piece) - len(piece.lstrip())
                        if piece.strip().split()[0].lower() in ("measx", "ifx"):
                            raise ParseError("nested measurement or ifx", ln, off + pos + lead + 1)
                        body.append(_parse_gate(piece, ln, off + pos, total))
                    pos += len(piece) + 1
            gates.append(Gate(IFX, (), outcome=t, body=tuple(body)))
            continue
        gates.append(_parse_gate(raw, lineno, 0, total))
    if n is None:
        raise ParseError("missing 'qubits' header", 1, 1)
    return Circuit(n, h, gates)


def _emit_gate(g: Gate) -> str:
    return " ".join([g.kind] + [f"q{q}" for q in g.qubits])


def emit(c: Circuit) -> str:
    """Serialize to the native format; ``parse(emit(c)) == c``."""
    header = f"qubits {c.n}" + (f" ancillas {c.h}" if c.h else "")
    lines = [header]
    for g in c.gates:
        if g.kind == MEASX:
            lines.append(f"measx q{g.qubits[0]} -> m{g.outcome}")
        elif g.kind == IFX:
            lines.append(f"ifx m{g.outcome} {{ " + "; ".join(_emit_gate(x) for x in g.body) + " }")
        else:
            lines.append(_emit_gate(g))
    return "\n".join(lines)


# .qc benchmark importer

_QC_SINGLE = {
    "H": "H", "X": "X", "Y": "Y", "Z": "Z", "S": "S", "P": "S", "S*": "SDG", "P*": "SDG",
    "SDG": "SDG", "T": "T", "T*": "TDG", "TDG": "TDG",
}


def parse_qc(text: str) -> Circuit:
    """Import a ``.qc`` benchmark file (``.v``/``.i``/``BEGIN``/``END``).

    ``tof`` with two controls is expanded into the standard 7-T decomposition;
    with one control it is a CNOT and with none an X. ``Z`` on three or two
    qubits is read as CCZ or CZ.
    """
    names: dict[str, int] = {}
    gates: list[Gate] = []
    in_body = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]
        if head.startswith("."):
            if head.lower() == ".v":
                for tok in toks[1:]:
                    for name in tok.split(","):
                        if name and name not in names:
                            names[name] = len(names)
            continue
        if head.upper() == "BEGIN":
            in_body = True
            continue
        if head.upper() == "END":
            in_body = False
            continue
        if not in_body:
            raise ParseError(f"gate outside BEGIN/END: {head!r}", lineno, 1)
        args = []
        for t in toks[1:]:
            for name in t.split(","):
                if not name:
                    continue
                if name not in names:
                    raise ParseError(f"undeclared qubit {name!r}", lineno, raw.find(name) + 1)
                args.append(names[name])
        op = head.lower()
        if op in ("tof", "cnot", "cx"):
            if op != "tof" and len(args) != 2:
                raise ParseError(f"{head} takes 2 qubits", lineno, 1)
            if len(args) == 1:
                gates.append(Gate("X", (args[0],)))
            elif len(args) == 2:
                gates.append(Gate("CNOT", tuple(args)))
            elif len(args) == 3:
                gates.extend(toffoli_gates(*args))
            else:
                raise ParseError(f"tof with {len(args) - 1} controls is not supported", lineno, 1)
            continue
        kind = _QC_SINGLE.get(head.upper())
        if kind == "Z" and len(args) in (2, 3):
            gates.append(Gate("CZ" if len(args) == 2 else "CCZ", tuple(args)))
            continue
        if kind is None:
            raise ParseError(f"unknown gate {head!r}", lineno, 1)
        if len(args) != 1:
            raise ParseError(f"{head} takes 1 qubit, got {len(args)}", lineno, 1)
        gates.append(Gate(kind, (args[0],)))
    return Circuit(len(names), 0, gates)


def load(path) -> Circuit:
    """Read a circuit file, choosing the importer by extension."""
    from pathlib import Path

    p = Path(path)
    text = p.read_text()
    return parse_qc(text) if p.suffix.lower() == ".qc" else parse(text)
