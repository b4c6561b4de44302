"""Order lowering: peel one control variable per round and factor its quadratic target exactly.

Works on parities only. For control ``c`` the target matrix is
``S~[b, g] = S[c, b, g]`` over the other variables; with a minimal factor
``A~`` the round emits ``e_c`` (when ``m~ + S[c, c, c]`` is odd) and every
``a~_j + e_c``. Without feedback the columns of ``A~`` are emitted too;
with feedback their contribution stays in the residual signature.
"""

from __future__ import annotations

import random
from typing import Callable

import numpy as np

from topt.gf2 import BitMatrix
from topt.optimizers.lempel import lempel_factor
from topt.optimizers.rm import DEFAULT_RM_LIMIT, rm_decode
from topt.phase import SignatureMatrix2, SignatureTensor3, WeightedPolynomial, signature_from_A, signature_from_wp

Selector = Callable[[list[int], random.Random], int]


def random_selector(candidates: list[int], rng: random.Random) -> int:
    return candidates[rng.randrange(len(candidates))]


def tool_round(S: SignatureTensor3, c: int, feedback: bool) -> np.ndarray:
    """Columns emitted when peeling control ``c``."""
    n = S.n
    others = [i for i in range(n) if i != c]
    target = SignatureMatrix2(S.dense[c][np.ix_(others, others)])
    At = lempel_factor(target).bits
    mt = At.shape[1]
    full = np.zeros((n, mt), np.uint8)
    full[others, :] = At
    cols = []
    if (mt + S[c, c, c]) % 2:
        e = np.zeros(n, np.uint8)
        e[c] = 1
        cols.append(e)
    for j in range(mt):
        v = full[:, j].copy()
        v[c] ^= 1
        cols.append(v)
    if not feedback:
        cols.extend(full[:, j].copy() for j in range(mt))
    return np.array(cols, np.uint8).T.reshape(n, len(cols))


def _embed(A: BitMatrix, idx: list[int], n: int) -> np.ndarray:
    out = np.zeros((n, A.cols), np.uint8)
    out[idx, :] = A.bits
    return out


def tool(
    f: WeightedPolynomial | SignatureTensor3,
    feedback: bool = True,
    seed: int = 0,
    rm_limit: int = DEFAULT_RM_LIMIT,
    selector: Selector = random_selector,
) -> BitMatrix:
    """Factor of ``f``'s signature; hands over to RM once at most ``rm_limit`` variables remain."""
    S = f if isinstance(f, SignatureTensor3) else signature_from_wp(f)
    n = S.n
    rng = random.Random(seed)
    out: list[np.ndarray] = []
    while not S.is_zero():
        active = S.support()
        if len(active) <= rm_limit:
            out.append(_embed(rm_decode(S.restrict(active), rm_limit), active, n))
            break
        c = selector(active, rng)
        cols = tool_round(S, c, feedback)
        out.append(cols)
        S = S ^ signature_from_A(BitMatrix(cols, n, cols.shape[1]))
    if not out:
        return BitMatrix.zeros(n, 0)
    A = np.hstack(out)
    return BitMatrix(A, n, A.shape[1])
