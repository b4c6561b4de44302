"""Dense linear algebra over GF(2).

:class:`BitMatrix` is an immutable-by-convention wrapper around a 0/1
``uint8`` array. Vectors are plain 1-D 0/1 numpy arrays. Elimination is done
on packed 64-bit rows by :mod:`topt.kernels`.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from topt import kernels


class SingularMatrix(ValueError):
    """Raised when inverting a matrix that is not full rank."""


def as_bitvec(v: Iterable[int] | np.ndarray) -> np.ndarray:
    return np.asarray(list(v) if not isinstance(v, np.ndarray) else v, dtype=np.uint8) & 1


def weight(v: np.ndarray) -> int:
    """Hamming weight."""
    return int(np.count_nonzero(v))


class BitMatrix:
    __slots__ = ("_bits",)

    def __init__(self, data, rows: int | None = None, cols: int | None = None):
        arr = np.array(data, dtype=np.uint8)
        if arr.size == 0:
            r0, c0 = arr.shape if arr.ndim == 2 else (0, 0)
            arr = arr.reshape(rows if rows is not None else r0, cols if cols is not None else c0)
        if arr.ndim != 2:
            raise ValueError(f"BitMatrix needs 2-D data, got shape {arr.shape}")
        self._bits = arr & 1
        self._bits.flags.writeable = False

    # construction
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "BitMatrix":
        if len(columns) == 0:
            return cls.zeros(rows, 0)
        arr = np.array([np.asarray(c, dtype=np.uint8) for c in columns], dtype=np.uint8).T
        if arr.shape[0] != rows:
            raise ValueError(f"columns have length {arr.shape[0]}, expected {rows}")
        return cls(arr)

    # shape and access
    @property
    def rows(self) -> int:
        return self._bits.shape[0]

    @property
    def cols(self) -> int:
        return self._bits.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._bits.shape

    @property
    def bits(self) -> np.ndarray:
        """Read-only view of the underlying 0/1 array."""
        return self._bits

    def __getitem__(self, idx):
        if isinstance(idx, tuple) and len(idx) == 2 and all(isinstance(i, (int, np.integer)) for i in idx):
            i, j = idx
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"index ({i}, {j}) out of range for {self.rows}x{self.cols}")
            return int(self._bits[i, j])
        raise TypeError("BitMatrix indices must be a pair of ints; use .bits for slicing")

    def column(self, j: int) -> np.ndarray:
        if not 0 <= j < self.cols:
            raise IndexError(f"column {j} out of range")
        return self._bits[:, j].copy()

    def row(self, i: int) -> np.ndarray:
        if not 0 <= i < self.rows:
            raise IndexError(f"row {i} out of range")
        return self._bits[i].copy()

    def columns(self) -> list[np.ndarray]:
        return [self._bits[:, j].copy() for j in range(self.cols)]

    # algebra
    @property
    def T(self) -> "BitMatrix":
        return BitMatrix(self._bits.T.copy())

    def __matmul__(self, other):
        if isinstance(other, BitMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            prod = self._bits.astype(np.int64) @ other._bits.astype(np.int64)
            return BitMatrix(prod & 1)
        vec = np.asarray(other, dtype=np.int64)
        if vec.shape[0] != self.cols:
            raise ValueError(f"shape mismatch {self.shape} @ {vec.shape}")
        return ((self._bits.astype(np.int64) @ vec) & 1).astype(np.uint8)

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return BitMatrix(self._bits ^ other._bits)

    __xor__ = __add__

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._bits, other._bits))

    def __hash__(self):
        return hash((self.shape, self._bits.tobytes()))

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        return BitMatrix(np.hstack([self._bits, other._bits]).reshape(self.rows, self.cols + other.cols))

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        return BitMatrix(np.vstack([self._bits, other._bits]).reshape(self.rows + other.rows, self.cols))

    def tolist(self) -> list[list[int]]:
        return self._bits.tolist()

    def __repr__(self) -> str:
        return f"BitMatrix({self.tolist()})"


def rref(M: BitMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Nonzero rows of the reduced row-echelon form and their pivot columns."""
    if M.rows == 0 or M.cols == 0:
        return np.zeros((0, M.cols), dtype=np.uint8), np.zeros(0, dtype=np.int64)
    return kernels.rref(M.bits)


def rank(M: BitMatrix) -> int:
    return len(rref(M)[1])


def nullspace(M: BitMatrix) -> BitMatrix:
    """Canonical basis of the right null space, one column per free variable.

    Built from the reduced row-echelon form; basis vector ``k`` has a 1 at the
    ``k``-th free column (ascending) and is zero on the other free columns.
    """
    reduced, pivots = rref(M)
    free = [j for j in range(M.cols) if j not in set(pivots.tolist())]
    N = np.zeros((M.cols, len(free)), dtype=np.uint8)
    for k, f in enumerate(free):
        N[f, k] = 1
        for r, p in enumerate(pivots):
            N[p, k] = reduced[r, f]
    return BitMatrix(N, rows=M.cols, cols=len(free))


def invert(M: BitMatrix) -> BitMatrix:
    if M.rows != M.cols:
        raise ValueError(f"cannot invert non-square {M.rows}x{M.cols} matrix")
    n = M.rows
    aug = np.hstack([M.bits, np.eye(n, dtype=np.uint8)])
    reduced, pivots = kernels.rref(aug) if n else (aug, np.zeros(0, dtype=np.int64))
    if len(pivots) < n or (n and pivots[n - 1] >= n):
        raise SingularMatrix(f"matrix has rank {int(np.sum(pivots < n))} < {n}")
    return BitMatrix(reduced[:n, n:].copy(), rows=n, cols=n)


def solve(M: BitMatrix, rhs: np.ndarray) -> np.ndarray | None:
    """One solution ``y`` of ``M y = rhs`` (free variables set to 0), or None."""
    rhs = as_bitvec(rhs)
    aug = np.hstack([M.bits, rhs.reshape(-1, 1)])
    reduced, pivots = kernels.rref(aug) if aug.size else (aug, np.zeros(0, dtype=np.int64))
    if len(pivots) and pivots[-1] == M.cols:
        return None
    y = np.zeros(M.cols, dtype=np.uint8)
    for r, p in enumerate(pivots):
        y[p] = reduced[r, M.cols]
    return y
