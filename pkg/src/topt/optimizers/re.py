"""Recursive expansion: rewrite every monomial with ``2ab = a + b - a^b``."""

from __future__ import annotations

from topt.gf2 import BitMatrix
from topt.phase import WeightedPolynomial, pp_from_wp, pp_to_A


def re_expand(f: WeightedPolynomial) -> BitMatrix:
    """Gate synthesis matrix with ``|A^T x| = f(x) - const`` (mod 8) for every x.

    Multiplicities are kept; take :func:`topt.phase.proper` for the T count.
    """
    return pp_to_A(pp_from_wp(f))
