"""Exact factoring of symmetric GF(2) matrices: ``A A^T = S`` with rank(S) + delta(S) columns."""

from __future__ import annotations

import numpy as np

from topt.gf2 import BitMatrix, nullspace, rank
from topt.phase import SignatureMatrix2


def minimal_size(S: SignatureMatrix2) -> int:
    """rank(S) + 1 if the diagonal is all zero, else rank(S)."""
    delta = 0 if S.bits.diagonal().any() else 1
    return rank(S.as_bitmatrix()) + delta


def initial_factor(S: SignatureMatrix2) -> np.ndarray:
    """One column ``e_i + e_j`` per off-diagonal 1, then ``e_i`` where the diagonal still disagrees."""
    n = S.n
    cols = []
    diag = np.zeros(n, np.uint8)
    for i in range(n):
        for j in range(i + 1, n):
            if S.bits[i, j]:
                v = np.zeros(n, np.uint8)
                v[i] = v[j] = 1
                cols.append(v)
                diag[i] ^= 1
                diag[j] ^= 1
    for i in range(n):
        if diag[i] != S.bits[i, i]:
            v = np.zeros(n, np.uint8)
            v[i] = 1
            cols.append(v)
    if not cols:
        return np.zeros((n, 0), np.uint8)
    return np.array(cols, np.uint8).T.copy()


def _reducing_vector(A: np.ndarray) -> np.ndarray | None:
    """First canonical null vector of A that is neither zero nor all-ones."""
    m = A.shape[1]
    N = nullspace(BitMatrix(A, A.shape[0], m)).bits
    for k in range(N.shape[1]):
        y = N[:, k]
        if 0 < int(y.sum()) < m:
            return y.copy()
    if N.shape[1] >= 2:
        return N[:, 0] ^ N[:, 1]  # two independent vectors cannot both be all-ones
    return None


def _pad_all_ones(A: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    """When the all-ones vector is the only null vector and m is even, pad a zero column.

    ``(1, ..., 1, 0)`` is then a null vector of even weight below the new column count.
    """
    m = A.shape[1]
    if m % 2 or (A.sum(axis=1) % 2).any():
        return None
    A = np.hstack([A, np.zeros((A.shape[0], 1), np.uint8)])
    y = np.ones(m + 1, np.uint8)
    y[m] = 0
    return A, y


def lempel_factor(S) -> BitMatrix:
    """Minimal factor of a symmetric matrix; the zero matrix gets the empty factor."""
    if not isinstance(S, SignatureMatrix2):
        S = SignatureMatrix2(S.bits if isinstance(S, BitMatrix) else S)
    n = S.n
    if not S.bits.any():
        return BitMatrix.zeros(n, 0)
    target = minimal_size(S)
    A = initial_factor(S)
    while A.shape[1] > target:
        y = _reducing_vector(A)
        if y is None:
            padded = _pad_all_ones(A)
            if padded is None:  # pragma: no cover - excluded by Lempel's theorem
                raise RuntimeError("no reducing vector although the factor is not minimal")
            A, y = padded
        if y.sum() % 2:
            A = np.hstack([A, np.zeros((n, 1), np.uint8)])
            y = np.append(y, 1).astype(np.uint8)
        a = int(np.flatnonzero(y)[0])
        b = int(np.flatnonzero(y == 0)[0])
        z = A[:, a] ^ A[:, b]
        A = A ^ np.outer(z, y).astype(np.uint8)
        keep = [j for j in range(A.shape[1]) if j not in (a, b)]
        A = A[:, keep]
    return BitMatrix(A, n, A.shape[1])
