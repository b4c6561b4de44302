"""Dispatch a signature tensor to one of the optimizers."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from topt.gf2 import BitMatrix
from topt.optimizers.re import re_expand
from topt.optimizers.rm import DEFAULT_RM_LIMIT, rm_decode
from topt.optimizers.todd import todd
from topt.optimizers.tool import tool
from topt.phase import SignatureTensor3, proper, wp_from_signature


class OptimizerKind(enum.Enum):
    RE = "re"
    TOOL_F = "tool-f"
    TOOL_NF = "tool-nf"
    TODD = "todd"
    RM = "rm"

    @classmethod
    def parse(cls, name: str) -> "OptimizerKind":
        key = name.strip().lower().replace("_", "-")
        for k in cls:
            if k.value == key:
                return k
        raise ValueError(f"unknown optimizer {name!r}; choose from {', '.join(k.value for k in cls)}")


@dataclass(frozen=True)
class OptimizerChoice:
    kind: OptimizerKind
    seed: int = 0
    rm_limit: int = DEFAULT_RM_LIMIT

    def __post_init__(self):
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", OptimizerKind.parse(self.kind))
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


def run_pipeline(S: SignatureTensor3, choice: OptimizerChoice | str) -> BitMatrix:
    """Proper gate synthesis matrix whose signature equals ``S``."""
    if isinstance(choice, str):
        choice = OptimizerChoice(OptimizerKind.parse(choice))
    k = choice.kind
    if S.is_zero():
        return BitMatrix.zeros(S.n, 0)
    if k is OptimizerKind.RE:
        return proper(re_expand(wp_from_signature(S)))
    if k is OptimizerKind.TODD:
        return todd(proper(re_expand(wp_from_signature(S))))
    if k is OptimizerKind.RM:
        return rm_decode(S, choice.rm_limit)
    return proper(tool(S, feedback=k is OptimizerKind.TOOL_F, seed=choice.seed, rm_limit=choice.rm_limit))
