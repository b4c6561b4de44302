"""T-count optimizers operating on signature tensors and gate synthesis matrices."""

from topt.optimizers.lempel import lempel_factor, minimal_size
from topt.optimizers.pipeline import OptimizerChoice, OptimizerKind, run_pipeline
from topt.optimizers.re import re_expand
from topt.optimizers.rm import TooLarge, rm_decode
from topt.optimizers.todd import ToddStats, ToddStep, todd
from topt.optimizers.tool import tool

__all__ = [
    "OptimizerChoice", "OptimizerKind", "ToddStats", "ToddStep", "TooLarge",
    "lempel_factor", "minimal_size", "re_expand", "rm_decode", "run_pipeline", "todd", "tool",
]
