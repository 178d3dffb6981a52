"""
Green's operators of the normally hyperbolic operators on the grid: explicit
leapfrog sweeps, a dense-matrix oracle and causal-support diagnostics.
"""

from .evolver import WaveOperator, Direction, LevelOperator
from .operators import (
    GreensKind, GreensRequest, greens_apply, greens_oracle, causal_cone,
    SupportExtent, support_extent, sourced_solution, pauli_jordan,
)

__all__ = [
    "WaveOperator", "Direction", "LevelOperator",
    "GreensKind", "GreensRequest", "greens_apply", "greens_oracle", "causal_cone",
    "SupportExtent", "support_extent", "sourced_solution", "pauli_jordan",
]
