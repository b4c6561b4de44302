"""Optimal factoring by minimum-weight coset search (punctured Reed-Muller decoding).

Column ``v`` of the code matrix M (v = 1 .. 2^n - 1, bit ``i`` of v is
variable ``i``) has a 1 in row T exactly when T is a subset of supp(v), for
every index set T with 1 <= |T| <= 3. Any y with ``M y = s(S)`` is a factor;
the best one is the lightest member of ``y0 + null(M)``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from topt import kernels
from topt.gf2 import BitMatrix, nullspace, solve
from topt.phase import SignatureTensor3, monomial_index_sets

DEFAULT_RM_LIMIT = 6


class TooLarge(ValueError):
    """Instance exceeds the brute-force size limit."""


@lru_cache(maxsize=None)
def code_matrix(n: int) -> BitMatrix:
    sets = monomial_index_sets(n)
    M = np.zeros((len(sets), 2**n - 1), np.uint8)
    for j, v in enumerate(range(1, 2**n)):
        for r, T in enumerate(sets):
            if all((v >> i) & 1 for i in T):
                M[r, j] = 1
    return BitMatrix(M, len(sets), 2**n - 1)


@lru_cache(maxsize=None)
def _null_gens(n: int) -> np.ndarray:
    N = nullspace(code_matrix(n)).bits
    return np.array([_pack(N[:, k]) for k in range(N.shape[1])], np.uint64)


def search_dimension(n: int) -> int:
    """Dimension of null(M): the coset has 2**search_dimension(n) members."""
    return len(_null_gens(n))


def _pack(bits: np.ndarray) -> int:
    return sum(1 << j for j, b in enumerate(bits) if b)


def rm_decode(S: SignatureTensor3, rm_limit: int = DEFAULT_RM_LIMIT, backend: str | None = None) -> BitMatrix:
    """Factor of S with the provably minimum number of columns."""
    n = S.n
    if n > rm_limit:
        raise TooLarge(f"n={n} exceeds rm_limit={rm_limit}")
    if n > 6:
        raise TooLarge("the coset search packs candidates into 64-bit words (n <= 6)")
    if S.is_zero():
        return BitMatrix.zeros(n, 0)
    M = code_matrix(n)
    y0 = solve(M, S.vector())
    if y0 is None:  # pragma: no cover - M has full row rank
        raise ValueError("signature is not in the column space")
    gens = _null_gens(n)
    _, idx = kernels.coset_min(_pack(y0), gens, backend)
    y = _pack(y0)
    for k in range(len(gens)):
        if (idx >> k) & 1:
            y ^= int(gens[k])
    cols = [[(v >> i) & 1 for i in range(n)] for j, v in enumerate(range(1, 2**n)) if (y >> j) & 1]
    return BitMatrix.from_columns(cols, n)
