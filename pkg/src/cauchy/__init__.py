"""
Cauchy data, the constraint map, evolution of the Lichnerowicz equation and
the existence pipeline for the linearized Einstein equation.
"""

from .data import (
    CauchyData, ConstraintValue, pack_symmetric, unpack_symmetric,
    normal_derivative, coordinate_rate, extract_data, data_extension, constraint,
)
from .solver import (
    evolve, LinearizedSolution, solve_linearized, solve_linearized_detailed,
    project_constraints, de_donder_propagation, constraint_residual, uniqueness_gap,
)

__all__ = [
    "CauchyData", "ConstraintValue", "pack_symmetric", "unpack_symmetric",
    "normal_derivative", "coordinate_rate", "extract_data", "data_extension", "constraint",
    "evolve", "LinearizedSolution", "solve_linearized", "solve_linearized_detailed",
    "project_constraints", "de_donder_propagation", "constraint_residual", "uniqueness_gap",
]
