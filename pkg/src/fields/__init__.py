"""
Grid-sampled tensor fields with covariant calculus, trace reversal, Lie
derivatives of the metric and spacetime pairings.
"""

from .tensors import (
    COMPONENT_ORDER, COMPONENT_LABELS, SupportWindow, TensorField, ScalarField,
    VecField, CovecField, SymField2, as_tensor, symmetric_part, support_of,
    require_interior_support,
)
from .calculus import (
    d_t, d_x, d_xx, partial_derivative, connection_action,
    covariant_derivative, second_covariant_derivative,
    lower_index, raise_index, raise_all, as_covector, as_vector,
    trace, metric_field, trace_reverse, divergence, box,
    lie_derivative_metric, spacetime_pairing,
)
from .synthesis import (
    FieldRank, Polarization, BumpRecipe, PlaneWaveRecipe, RandomRecipe,
    synthesize_field, bump_profile,
)

__all__ = [
    "COMPONENT_ORDER", "COMPONENT_LABELS", "SupportWindow", "TensorField", "ScalarField",
    "VecField", "CovecField", "SymField2", "as_tensor", "symmetric_part", "support_of",
    "require_interior_support",
    "d_t", "d_x", "d_xx", "partial_derivative", "connection_action",
    "covariant_derivative", "second_covariant_derivative",
    "lower_index", "raise_index", "raise_all", "as_covector", "as_vector",
    "trace", "metric_field", "trace_reverse", "divergence", "box",
    "lie_derivative_metric", "spacetime_pairing",
    "FieldRank", "Polarization", "BumpRecipe", "PlaneWaveRecipe", "RandomRecipe",
    "synthesize_field", "bump_profile",
]
