"""Kernel backend selection.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``TOPT_PURE_PYTHON`` is set to a non-empty value, the
pure-Python implementations in :mod:`topt._purepy` are used. Both backends
honour identical contracts, so results never depend on which one is active.
"""

from __future__ import annotations

import os

import numpy as np

from topt import _purepy

_compiled = None
if not os.environ.get("TOPT_PURE_PYTHON"):
    try:
        from topt import _ckernels as _compiled
    except ImportError:  # pragma: no cover - depends on the build
        _compiled = None

backend = _compiled if _compiled is not None else _purepy
BACKEND_NAME = "compiled" if _compiled is not None else "python"


def compiled_available() -> bool:
    return _compiled is not None


def get_backend(name: str | None = None):
    """Return a kernel module by name (``"compiled"``, ``"python"``) or the active one."""
    if name is None:
        return backend
    if name == "python":
        return _purepy
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix into little-endian ``uint64`` words, one row per matrix row."""
    bits = np.asarray(bits, dtype=np.uint8)
    rows, cols = bits.shape
    nwords = max(1, (cols + 63) // 64)
    padded = np.zeros((rows, nwords * 64), dtype=np.uint8)
    padded[:, :cols] = bits & 1
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64, copy=False).reshape(rows, nwords)


def unpack_rows(words: np.ndarray, cols: int) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype="<u8")
    if words.shape[0] == 0:
        return np.zeros((0, cols), dtype=np.uint8)
    as_bytes = words.view(np.uint8).reshape(words.shape[0], -1)
    return np.unpackbits(as_bytes, axis=1, bitorder="little")[:, :cols].copy()


def rref(bits: np.ndarray, backend_name: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row-echelon form of a 0/1 matrix: ``(nonzero rows, pivot columns)``."""
    bits = np.asarray(bits, dtype=np.uint8)
    cols = bits.shape[1]
    reduced, pivots = get_backend(backend_name).rref(pack_rows(bits), cols)
    return unpack_rows(reduced, cols), np.asarray(pivots, dtype=np.int64)


def todd_scan(bits: np.ndarray, backend_name: str | None = None):
    bits = np.asarray(bits, dtype=np.uint8)
    return get_backend(backend_name).todd_scan(pack_rows(bits), bits.shape[1])


def coset_min(y0: int, gens, backend_name: str | None = None) -> tuple[int, int]:
    return get_backend(backend_name).coset_min(int(y0), np.asarray(gens, dtype=np.uint64))
