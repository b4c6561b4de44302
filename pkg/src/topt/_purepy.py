"""Pure-Python reference kernels.

Same contracts as the compiled ``_ckernels`` module. Rows arrive as packed
``uint64`` arrays (bit ``j`` of a row lives in word ``j // 64`` at position
``j % 64``) and are converted to Python ints, which make decent bitsets.
"""

from __future__ import annotations

import numpy as np


def _to_ints(rows: np.ndarray) -> list[int]:
    out = []
    for r in rows:
        v = 0
        for k, w in enumerate(r.tolist()):
            v |= int(w) << (64 * k)
        out.append(v)
    return out


def _to_words(values: list[int], nwords: int) -> np.ndarray:
    out = np.zeros((len(values), nwords), dtype=np.uint64)
    mask = (1 << 64) - 1
    for i, v in enumerate(values):
        for k in range(nwords):
            out[i, k] = (v >> (64 * k)) & mask
    return out


def _lowbit(v: int) -> int:
    return (v & -v).bit_length() - 1


def _insert(basis: list[int], pivots: list[int], row: int, ops: list[int] | None = None) -> bool:
    """Add ``row`` to a fully reduced basis; keeps every pivot column clean."""
    n_ops = 0
    for r, p in zip(basis, pivots):
        if (row >> p) & 1:
            row ^= r
            n_ops += 1
    if not row:
        if ops is not None:
            ops[0] += n_ops
        return False
    p = _lowbit(row)
    for i, r in enumerate(basis):
        if (r >> p) & 1:
            basis[i] = r ^ row
            n_ops += 1
    if ops is not None:
        ops[0] += n_ops
    basis.append(row)
    pivots.append(p)
    return True


def rref(rows: np.ndarray, ncols: int) -> tuple[np.ndarray, np.ndarray]:
    ints = _to_ints(rows)
    basis: list[int] = []
    pivots: list[int] = []
    for r in ints:
        _insert(basis, pivots, r)
    order = sorted(range(len(pivots)), key=pivots.__getitem__)
    nwords = rows.shape[1] if rows.ndim == 2 and rows.shape[1] else max(1, (ncols + 63) // 64)
    return (
        _to_words([basis[i] for i in order], nwords),
        np.array([pivots[i] for i in order], dtype=np.int64),
    )


def todd_scan(rows: np.ndarray, ncols: int):
    """First (a, b, y) in lexicographic pair order, or None.

    Returns ``(hit, pairs_scanned, row_ops)``.
    """
    n = rows.shape[0]
    m = ncols
    if n == 0 or m < 2:
        return None, 0, 0
    r = _to_ints(rows)
    ops = [0]
    pairs = 0
    base: list[int] = []
    base_piv: list[int] = []
    for v in r:
        _insert(base, base_piv, v, ops)
    prods = {}
    for b in range(n):
        for c in range(b + 1, n):
            prods[b, c] = r[b] & r[c]
    triples = [
        (a, b, c) for a in range(n) for b in range(a + 1, n) for c in range(b + 1, n)
    ]
    for a in range(m):
        for b in range(a + 1, m):
            pairs += 1
            z = [((v >> a) ^ (v >> b)) & 1 for v in r]
            basis = list(base)
            pivots = list(base_piv)
            full = len(basis) == m
            if not full:
                for al, be, ga in triples:
                    if not (z[al] or z[be] or z[ga]):
                        continue
                    row = 0
                    if z[al]:
                        row ^= prods[be, ga]
                    if z[be]:
                        row ^= prods[al, ga]
                    if z[ga]:
                        row ^= prods[al, be]
                    if row and _insert(basis, pivots, row, ops) and len(basis) == m:
                        full = True
                        break
            if full:
                continue
            pivrow = {p: i for i, p in enumerate(pivots)}
            for f in range(m):
                if f in pivrow:
                    continue
                ya = 1 if a == f else (basis[pivrow[a]] >> f) & 1 if a in pivrow else 0
                yb = 1 if b == f else (basis[pivrow[b]] >> f) & 1 if b in pivrow else 0
                if ya != yb:
                    y = np.zeros(m, dtype=np.uint8)
                    y[f] = 1
                    for i, p in enumerate(pivots):
                        y[p] = (basis[i] >> f) & 1
                    return (a, b, y), pairs, ops[0]
    return None, pairs, ops[0]


def coset_min(y0: int, gens: np.ndarray) -> tuple[int, int]:
    """Minimum weight over ``y0 + span(gens)``; ties go to the lowest index."""
    words = np.array([int(y0)], dtype=np.uint64)
    for g in np.asarray(gens, dtype=np.uint64):
        words = np.concatenate([words, words ^ g])
    weights = np.bitwise_count(words)
    idx = int(np.argmin(weights))
    return int(weights[idx]), idx
