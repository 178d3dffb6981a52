"""
Pre-symplectic structure, gauge-invariant observables, the Pauli-Jordan
pairing and Poisson brackets of smeared linearized fields.
"""

from .structure import (
    presymplectic, symplectic_current, current_divergence, current_divergence_expected,
    constraint_pairing_identity, presymplectic_magnitude,
)
from .smearing import (
    MIN_WINDOW_LAYERS, null_test_tensor, time_window, bianchi_test_tensor,
    time_slice_test_tensor,
)
from .observables import (
    DivergenceClass, Observable, make_observable, observable_eval,
    pauli_jordan_pairing, pauli_jordan_expansion, BracketResult, propagated_solution,
    poisson_bracket, field_generation_identity, ProbeResult, separating_probe,
)

__all__ = [
    "presymplectic", "symplectic_current", "current_divergence", "current_divergence_expected",
    "constraint_pairing_identity", "presymplectic_magnitude",
    "MIN_WINDOW_LAYERS", "null_test_tensor", "time_window", "bianchi_test_tensor",
    "time_slice_test_tensor",
    "DivergenceClass", "Observable", "make_observable", "observable_eval",
    "pauli_jordan_pairing", "pauli_jordan_expansion", "BracketResult", "propagated_solution",
    "poisson_bracket", "field_generation_identity", "ProbeResult", "separating_probe",
]
