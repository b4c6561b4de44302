"""Algebraic representations of diagonal CNOT+T unitaries.

A diagonal unitary acts as ``|x> -> w^f(x) |x>`` with ``w = exp(i pi/4)``.
``f`` is held either as a phase polynomial (sum of ``a_k * lambda_k(x)`` over
linear forms) or as a weighted polynomial
``const + sum l x + 2 sum q xx + 4 sum c xxx`` (mod 8). Both carry an explicit
Z8 constant so global phase stays exact for simulator comparisons.

Bit-vector ``x`` indexes follow the simulator: qubit ``i`` is bit ``n-1-i`` of
a basis index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from topt.circuit import Circuit, DIAGONAL
from topt.gf2 import BitMatrix


class UnsupportedGate(ValueError):
    """Gate outside the set a conversion accepts."""


# helpers


def _triples(n: int):
    return combinations(range(n), 3)


def all_inputs(n: int) -> np.ndarray:
    """Every ``x`` in Z2^n as rows, in basis-index order."""
    idx = np.arange(2**n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.int64)


# weighted polynomials


@dataclass(eq=False)
class WeightedPolynomial:
    n: int
    l: np.ndarray = None
    q: np.ndarray = None  # n x n, entries with i < j used
    c: np.ndarray = None  # n x n x n, entries with i < j < k used
    const: int = 0

    def __post_init__(self):
        n = self.n
        self.l = np.zeros(n, np.int64) if self.l is None else np.asarray(self.l, np.int64) % 8
        self.q = np.zeros((n, n), np.int64) if self.q is None else np.triu(np.asarray(self.q, np.int64), 1) % 8
        if self.c is None:
            self.c = np.zeros((n, n, n), np.int64)
        else:
            c = np.asarray(self.c, np.int64) % 8
            mask = np.zeros((n, n, n), bool)
            for t in _triples(n):
                mask[t] = True
            self.c = np.where(mask, c, 0)
        self.const = int(self.const) % 8

    @classmethod
    def zero(cls, n: int) -> "WeightedPolynomial":
        return cls(n)

    @classmethod
    def from_terms(cls, n: int, l=None, q=None, c=None, const: int = 0) -> "WeightedPolynomial":
        """Build from sparse dicts: ``l={i: a}``, ``q={(i, j): a}``, ``c={(i, j, k): a}``."""
        L = np.zeros(n, np.int64)
        Q = np.zeros((n, n), np.int64)
        C = np.zeros((n, n, n), np.int64)
        for i, a in (l or {}).items():
            L[i] += a
        for key, a in (q or {}).items():
            i, j = sorted(key)
            if i == j:
                raise ValueError("quadratic term needs two distinct indices")
            Q[i, j] += a
        for key, a in (c or {}).items():
            i, j, k = sorted(key)
            if len({i, j, k}) < 3:
                raise ValueError("cubic term needs three distinct indices")
            C[i, j, k] += a
        return cls(n, L, Q, C, const)

    def copy(self) -> "WeightedPolynomial":
        return WeightedPolynomial(self.n, self.l.copy(), self.q.copy(), self.c.copy(), self.const)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedPolynomial):
            return NotImplemented
        return (
            self.n == other.n and self.const == other.const
            and np.array_equal(self.l, other.l) and np.array_equal(self.q, other.q)
            and np.array_equal(self.c, other.c)
        )

    def __add__(self, other: "WeightedPolynomial") -> "WeightedPolynomial":
        self._check(other)
        return WeightedPolynomial(self.n, self.l + other.l, self.q + other.q, self.c + other.c, self.const + other.const)

    def __neg__(self) -> "WeightedPolynomial":
        return WeightedPolynomial(self.n, -self.l, -self.q, -self.c, -self.const)

    def __sub__(self, other: "WeightedPolynomial") -> "WeightedPolynomial":
        return self + (-other)

    def _check(self, other):
        if self.n != other.n:
            raise ValueError(f"variable counts differ: {self.n} vs {other.n}")

    def evaluate(self, x) -> int:
        x = np.asarray(x, np.int64)
        val = self.const + int(self.l @ x) + 2 * int(x @ self.q @ x)
        val += 4 * int(np.einsum("ijk,i,j,k->", self.c, x, x, x))
        return val % 8

    def evaluate_all(self) -> np.ndarray:
        X = all_inputs(self.n)
        val = self.const + X @ self.l + 2 * np.einsum("xi,ij,xj->x", X, self.q, X)
        if self.n >= 3:
            val = val + 4 * np.einsum("xi,xj,xk,ijk->x", X, X, X, self.c)
        return val % 8

    def degree(self) -> int:
        """Highest degree with a nonzero effective contribution (q mod 4, c mod 2)."""
        if np.any(self.c % 2):
            return 3
        if np.any(self.q % 4):
            return 2
        if np.any(self.l):
            return 1
        return 0

    def is_clifford(self) -> bool:
        """True when every effective coefficient is even (T-free)."""
        return not np.any(self.l % 2) and not np.any(self.q % 2) and not np.any(self.c % 2)

    def quadratic_terms(self):
        return [((i, j), int(self.q[i, j])) for i, j in combinations(range(self.n), 2) if self.q[i, j]]

    def cubic_terms(self):
        return [(t, int(self.c[t])) for t in _triples(self.n) if self.c[t]]

    def __repr__(self) -> str:
        parts = [f"{int(a)}*x{i}" for i, a in enumerate(self.l) if a]
        parts += [f"2*{a}*x{i}x{j}" for (i, j), a in self.quadratic_terms()]
        parts += [f"4*{a}*x{i}x{j}x{k}" for (i, j, k), a in self.cubic_terms()]
        if self.const:
            parts.insert(0, str(self.const))
        return f"WeightedPolynomial(n={self.n}: " + (" + ".join(parts) or "0") + ")"


# phase polynomials


@dataclass
class PhasePolynomial:
    n: int
    terms: list[tuple[tuple[int, ...], int]] = field(default_factory=list)
    const: int = 0

    def __post_init__(self):
        merged: dict[tuple[int, ...], int] = {}
        order: list[tuple[int, ...]] = []
        for lam, a in self.terms:
            lam = tuple(int(b) & 1 for b in lam)
            if len(lam) != self.n:
                raise ValueError(f"linear form has length {len(lam)}, expected {self.n}")
            if not any(lam):
                raise ValueError("linear forms must be nonzero")
            if lam not in merged:
                order.append(lam)
                merged[lam] = 0
            merged[lam] = (merged[lam] + int(a)) % 8
        self.terms = [(lam, merged[lam]) for lam in order if merged[lam]]
        self.const = int(self.const) % 8

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.terms)

    def evaluate_all(self) -> np.ndarray:
        X = all_inputs(self.n)
        val = np.full(len(X), self.const, np.int64)
        for lam, a in self.terms:
            val += a * ((X @ np.asarray(lam, np.int64)) & 1)
        return val % 8


def wp_from_pp(p: PhasePolynomial) -> WeightedPolynomial:
    n = p.n
    L = np.zeros(n, np.int64)
    Q = np.zeros((n, n), np.int64)
    C = np.zeros((n, n, n), np.int64)
    for lam, a in p.terms:
        V = [i for i, b in enumerate(lam) if b]
        for i in V:
            L[i] += a
        for i, j in combinations(V, 2):
            Q[i, j] -= a
        for t in combinations(V, 3):
            C[t] += a
    return WeightedPolynomial(n, L, Q, C, p.const)


def _unit(n: int, *idx: int) -> tuple[int, ...]:
    v = [0] * n
    for i in idx:
        v[i] ^= 1
    return tuple(v)


def pp_from_wp(f: WeightedPolynomial) -> PhasePolynomial:
    """Expand with ``2ab = a + b - a^b`` so every monomial becomes linear forms."""
    n = f.n
    terms = [(_unit(n, i), int(a)) for i, a in enumerate(f.l) if a]
    for (i, j), a in f.quadratic_terms():
        terms += [(_unit(n, i), a), (_unit(n, j), a), (_unit(n, i, j), -a)]
    for (i, j, k), a in f.cubic_terms():
        terms += [(_unit(n, i), a), (_unit(n, j), a), (_unit(n, k), a)]
        terms += [(_unit(n, i, j), -a), (_unit(n, i, k), -a), (_unit(n, j, k), -a)]
        terms += [(_unit(n, i, j, k), a)]
    return PhasePolynomial(n, terms, f.const)


def pp_to_A(p: PhasePolynomial) -> BitMatrix:
    """``a`` copies of each linear form ``lambda`` with coefficient ``a``."""
    cols = [lam for lam, a in p.terms for _ in range(a)]
    return BitMatrix.from_columns(cols, p.n)


def proper(A: BitMatrix) -> BitMatrix:
    """Drop zero columns and cancel repeated pairs; survivors keep first-seen order."""
    counts: dict[bytes, int] = {}
    first: dict[bytes, np.ndarray] = {}
    for col in A.columns():
        if not col.any():
            continue
        key = col.tobytes()
        counts[key] = counts.get(key, 0) + 1
        first.setdefault(key, col)
    keep = [first[k] for k, v in counts.items() if v % 2]
    return BitMatrix.from_columns(keep, A.rows)


def eval_phase(A: BitMatrix, x) -> int:
    x = np.asarray(x, np.int64)
    if x.shape[0] != A.rows:
        raise ValueError(f"x has length {x.shape[0]}, A has {A.rows} rows")
    return int(np.count_nonzero((A.bits.T.astype(np.int64) @ x) & 1)) % 8


def wp_from_A(A: BitMatrix) -> WeightedPolynomial:
    """Weighted polynomial of one unit-coefficient term per column."""
    n = A.rows
    M = A.bits.astype(np.int64)
    L = M.sum(axis=1)
    Q = -(M @ M.T)
    C = np.einsum("aj,bj,cj->abc", M, M, M) if n >= 3 else np.zeros((n, n, n), np.int64)
    return WeightedPolynomial(n, L, Q, C)


# signature tensors


def monomial_index_sets(n: int) -> list[tuple[int, ...]]:
    """Independent signature entries: singletons, pairs, triples (each lexicographic)."""
    return [(i,) for i in range(n)] + list(combinations(range(n), 2)) + list(combinations(range(n), 3))


class SignatureTensor3:
    """Symmetric order-3 tensor over GF(2), stored densely."""

    __slots__ = ("n", "_t")

    def __init__(self, n: int, dense: np.ndarray | None = None):
        self.n = n
        t = np.zeros((n, n, n), np.uint8) if dense is None else (np.asarray(dense, np.int64) & 1).astype(np.uint8)
        if t.shape != (n, n, n):
            raise ValueError(f"dense tensor must be {n}x{n}x{n}")
        for perm in ((0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
            if not np.array_equal(t, t.transpose(perm)):
                raise ValueError("tensor is not symmetric")
        if n:
            i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
            if not np.array_equal(t[i, i, j], t[i, j, j]):
                raise ValueError("S_aab must equal S_abb")
        t.flags.writeable = False
        self._t = t

    @classmethod
    def from_entries(cls, n: int, ones) -> "SignatureTensor3":
        """Tensor that is 1 exactly on the listed index sets (all permutations).

        Each set is ``(a,)``, ``(a, b)`` (meaning S_aab = S_abb) or ``(a, b, c)``.
        """
        t = np.zeros((n, n, n), np.uint8)
        for key in ones:
            key = tuple(sorted(set(key)))
            if len(key) == 1:
                (a,) = key
                t[a, a, a] ^= 1
            elif len(key) == 2:
                a, b = key
                for idx in {(a, a, b), (a, b, a), (b, a, a), (a, b, b), (b, a, b), (b, b, a)}:
                    t[idx] ^= 1
            elif len(key) == 3:
                for idx in {(a, b, c) for a in key for b in key for c in key if len({a, b, c}) == 3}:
                    t[idx] ^= 1
            else:
                raise ValueError(f"bad index set {key}")
        return cls(n, t)

    @classmethod
    def from_vector(cls, n: int, bits) -> "SignatureTensor3":
        sets = monomial_index_sets(n)
        bits = list(bits)
        if len(bits) != len(sets):
            raise ValueError(f"expected {len(sets)} entries, got {len(bits)}")
        return cls.from_entries(n, [s for s, b in zip(sets, bits) if b & 1])

    @classmethod
    def zero(cls, n: int) -> "SignatureTensor3":
        return cls(n)

    @property
    def dense(self) -> np.ndarray:
        return self._t

    def __getitem__(self, idx) -> int:
        return int(self._t[idx])

    def vector(self) -> np.ndarray:
        """Independent entries in :func:`monomial_index_sets` order."""
        out = []
        for s in monomial_index_sets(self.n):
            if len(s) == 1:
                out.append(self._t[s[0], s[0], s[0]])
            elif len(s) == 2:
                out.append(self._t[s[0], s[0], s[1]])
            else:
                out.append(self._t[s])
        return np.array(out, np.uint8)

    def entries(self) -> list[tuple[int, ...]]:
        return [s for s, b in zip(monomial_index_sets(self.n), self.vector()) if b]

    def support(self) -> list[int]:
        """Variables that appear in some nonzero entry."""
        return [i for i in range(self.n) if self._t[i].any()]

    def is_zero(self) -> bool:
        return not self._t.any()

    def restrict(self, idx) -> "SignatureTensor3":
        idx = list(idx)
        return SignatureTensor3(len(idx), self._t[np.ix_(idx, idx, idx)])

    def __xor__(self, other: "SignatureTensor3") -> "SignatureTensor3":
        return SignatureTensor3(self.n, self._t ^ other._t)

    __add__ = __xor__

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignatureTensor3):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._t, other._t))

    def __hash__(self):
        return hash((self.n, self._t.tobytes()))

    def __repr__(self) -> str:
        return f"SignatureTensor3(n={self.n}, ones={self.entries()})"


class SignatureMatrix2:
    """Symmetric GF(2) matrix, the order-2 problem instance."""

    __slots__ = ("n", "bits")

    def __init__(self, data):
        arr = (np.asarray(data, np.int64) & 1).astype(np.uint8)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("signature matrix must be square")
        if not np.array_equal(arr, arr.T):
            raise ValueError("signature matrix must be symmetric")
        arr.flags.writeable = False
        self.n = arr.shape[0]
        self.bits = arr

    def as_bitmatrix(self) -> BitMatrix:
        return BitMatrix(self.bits, self.n, self.n)

    def __eq__(self, other) -> bool:
        return isinstance(other, SignatureMatrix2) and np.array_equal(self.bits, other.bits)

    def __repr__(self) -> str:
        return f"SignatureMatrix2({self.bits.tolist()})"


def signature_from_wp(f: WeightedPolynomial) -> SignatureTensor3:
    ones = [(i,) for i in range(f.n) if f.l[i] % 2]
    ones += [ij for ij, a in f.quadratic_terms() if a % 2]
    ones += [t for t, a in f.cubic_terms() if a % 2]
    return SignatureTensor3.from_entries(f.n, ones)


def signature_from_A(A: BitMatrix) -> SignatureTensor3:
    M = A.bits.astype(np.int64)
    return SignatureTensor3(A.rows, np.einsum("aj,bj,cj->abc", M, M, M) & 1)


def wp_from_signature(S: SignatureTensor3) -> WeightedPolynomial:
    """Canonical representative: coefficients equal the parities themselves."""
    n = S.n
    t = S.dense.astype(np.int64)
    L = np.array([t[i, i, i] for i in range(n)], np.int64)
    Q = np.array([[t[i, i, j] if i < j else 0 for j in range(n)] for i in range(n)], np.int64).reshape(n, n)
    C = np.zeros((n, n, n), np.int64)
    for tr in _triples(n):
        C[tr] = t[tr]
    return WeightedPolynomial(n, L, Q, C)


def chi(A: BitMatrix, z) -> BitMatrix:
    """Rows ``z_a (r_b & r_c) ^ z_b (r_c & r_a) ^ z_c (r_a & r_b)`` for triples a<b<c."""
    z = np.asarray(z, np.uint8) & 1
    if z.shape[0] != A.rows:
        raise ValueError(f"z has length {z.shape[0]}, A has {A.rows} rows")
    R = A.bits
    rows = []
    for a, b, c in _triples(A.rows):
        rows.append((z[a] & R[b] & R[c]) ^ (z[b] & R[c] & R[a]) ^ (z[c] & R[a] & R[b]))
    if not rows:
        return BitMatrix.zeros(0, A.cols)
    return BitMatrix(np.array(rows, np.uint8), cols=A.cols)


# circuit extraction


@dataclass
class AffineExtraction:
    """``|x> -> w^f(x) |E x + b>`` with ``f`` given by ``pp`` (constant included)."""

    pp: PhasePolynomial
    E: BitMatrix
    b: np.ndarray


_SINGLE_PHASE = {"T": 1, "S": 2, "Z": 4, "SDG": 6, "TDG": 7}


def extract_affine(c: Circuit) -> AffineExtraction:
    """Track CNOT, X, Y and diagonal gates as affine forms of the input bits."""
    N = c.num_qubits
    forms = [1 << (N - 1 - i) for i in range(N)]  # bit N-1-j encodes x_j
    flips = [0] * N
    terms: list[tuple[int, int]] = []
    const = 0

    def add(form: int, flip: int, a: int):
        nonlocal const
        if flip:
            const += a
            a = -a
        if form:
            terms.append((form, a))
        # a zero form only contributes the constant

    def add_product(wires, a_lin: int):
        # a_lin * prod(bits) for 2 or 3 wires via inclusion-exclusion over xor forms
        k = len(wires)
        for r in range(1, k + 1):
            sign = 1 if r % 2 else -1
            for sub in combinations(wires, r):
                f = 0
                fl = 0
                for w in sub:
                    f ^= forms[w]
                    fl ^= flips[w]
                add(f, fl, sign * a_lin)

    for g in c.gates:
        k = g.kind
        if k in _SINGLE_PHASE:
            w = g.qubits[0]
            add(forms[w], flips[w], _SINGLE_PHASE[k])
        elif k == "CNOT":
            ctl, tgt = g.qubits
            forms[tgt] ^= forms[ctl]
            flips[tgt] ^= flips[ctl]
        elif k == "X":
            flips[g.qubits[0]] ^= 1
        elif k == "Y":
            w = g.qubits[0]
            const += 2
            add(forms[w], flips[w], 4)
            flips[w] ^= 1
        elif k == "CZ":
            add_product(g.qubits, 2)  # 4xy = 2(x + y - x^y)
        elif k == "CS":
            add_product(g.qubits, 1)  # 2xy = x + y - x^y
        elif k == "CCZ":
            add_product(g.qubits, 1)  # 4xyz = x+y+z - pairs + triple
        else:
            raise UnsupportedGate(f"{k} is not a diagonal/linear gate")

    def bits_of(v: int) -> tuple[int, ...]:
        return tuple((v >> (N - 1 - j)) & 1 for j in range(N))

    pp = PhasePolynomial(N, [(bits_of(f), a) for f, a in terms], const)
    E = BitMatrix(np.array([bits_of(f) for f in forms], np.uint8).reshape(N, N), N, N)
    return AffineExtraction(pp, E, np.array(flips, np.uint8))


def extract(c: Circuit) -> tuple[PhasePolynomial, BitMatrix]:
    """Phase polynomial and linear map of a CNOT + diagonal circuit: ``U = U_E U_f``."""
    for g in c.gates:
        if g.kind not in DIAGONAL and g.kind != "CNOT":
            raise UnsupportedGate(f"{g.kind} is not allowed in a CNOT+T block")
    ext = extract_affine(c)
    return ext.pp, ext.E
