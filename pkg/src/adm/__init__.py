"""
ADM description of slice data: constraints, the linearized constraint map and
its adjoint, the U map, the ADM symplectic product and pure-gauge data.
"""

from .geometry import SPATIAL_DIM, SliceGeometry, slice_geometry
from .state import ADMState, ADMPerturbation, slice_background, constraints
from .linearized import (
    ConstraintForm, constraint_violation, linearized_constraints, constraint_difference_quotient,
    adjoint_dphi, adjoint_total, domain_inner, codomain_inner, u_map, u_inverse,
    adm_symplectic, symplectic_inner_identity, pure_gauge_data, project_kernel,
)
from .spacetime import synchronous_slice_data, spacetime_gauge_vector

__all__ = [
    "SPATIAL_DIM", "SliceGeometry", "slice_geometry",
    "ADMState", "ADMPerturbation", "slice_background", "constraints",
    "ConstraintForm", "constraint_violation", "linearized_constraints",
    "constraint_difference_quotient", "adjoint_dphi", "adjoint_total", "domain_inner",
    "codomain_inner", "u_map", "u_inverse", "adm_symplectic", "symplectic_inner_identity",
    "pure_gauge_data", "project_kernel",
    "synchronous_slice_data", "spacetime_gauge_vector",
]
