"""
Differential operators on perturbations: linearized Einstein tensor,
Lichnerowicz operator, wave operators, conjugate momenta and the Lagrangian
coefficient tensors.
"""

from .coefficients import (
    CoefficientTensors, t_tensor, s_tensor, s_contraction, momentum_from_coefficients,
)
from .operators import (
    linearized_einstein, linearized_einstein_general, riemann_action, lichnerowicz,
    vector_wave, scalar_wave, de_donder_vector, conjugate_momentum, dee_operator,
    euler_lagrange_residual,
)
from .residuals import (
    truncation_floor, solution_tolerance, de_donder_residual, field_equation_residual,
    trace_residual,
)

__all__ = [
    "CoefficientTensors", "t_tensor", "s_tensor", "s_contraction", "momentum_from_coefficients",
    "linearized_einstein", "linearized_einstein_general", "riemann_action", "lichnerowicz",
    "vector_wave", "scalar_wave", "de_donder_vector", "conjugate_momentum", "dee_operator",
    "euler_lagrange_residual",
    "truncation_floor", "solution_tolerance", "de_donder_residual", "field_equation_residual",
    "trace_residual",
]
