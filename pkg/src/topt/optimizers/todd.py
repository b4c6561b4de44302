"""Duplicate-then-destroy reduction of a gate synthesis matrix.

Each round looks for a column pair (a, b) and a null vector y of
``[A; chi(A, z)]`` with ``y_a != y_b`` (``z = col_a + col_b``). Then
``A + z y^T`` has the same signature and columns a and b coincide, so
``proper`` removes them. Pairs are scanned lexicographically and null
vectors in canonical order, so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from topt import kernels
from topt.gf2 import BitMatrix
from topt.phase import proper


@dataclass
class ToddStep:
    iteration: int
    a: int
    b: int
    cols_before: int
    cols_after: int
    pairs_scanned: int
    row_ops: int
    A: BitMatrix


@dataclass
class ToddStats:
    iterations: int = 0
    pairs_scanned: int = 0
    row_ops: int = 0
    bit_ops: int = 0  # row operations weighted by row width, plus chi construction


def todd(
    A: BitMatrix,
    hook: Callable[[ToddStep], None] | None = None,
    backend: str | None = None,
    stats: ToddStats | None = None,
) -> BitMatrix:
    A = proper(A)
    n = A.rows
    it = 0
    n3 = n * (n - 1) * (n - 2) // 6
    while True:
        hit, pairs, ops = kernels.todd_scan(A.bits, backend)
        if stats is not None:
            stats.pairs_scanned += pairs
            stats.row_ops += ops
            stats.bit_ops += ops * A.cols + pairs * (n + n3 * A.cols)
        if hit is None:
            break
        a, b, y = hit
        bits = A.bits
        z = bits[:, a] ^ bits[:, b]
        if int(y.sum()) % 2:
            bits = np.hstack([bits, np.zeros((n, 1), np.uint8)])
            y = np.append(y, 1).astype(np.uint8)
        before = A.cols
        A = proper(BitMatrix(bits ^ np.outer(z, y).astype(np.uint8), n, bits.shape[1]))
        it += 1
        if stats is not None:
            stats.iterations = it
        if hook is not None:
            hook(ToddStep(it, a, b, before, A.cols, pairs, ops, A))
    return A
