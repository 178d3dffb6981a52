"""
Gauge transformations: de Donder, transverse-traceless (Lambda != 0) with the
Lambda = 0 obstruction functional, and synchronous gauge.
"""

from .transforms import (
    GaugeResult, gauge_shift,
    de_donder_gauge_vector, to_de_donder,
    tt_gauge_vector, tt_slice_constraints, to_transverse_traceless, tt_obstruction,
    synchronous_gauge_vector, synchronous_residual, to_synchronous,
)

__all__ = [
    "GaugeResult", "gauge_shift",
    "de_donder_gauge_vector", "to_de_donder",
    "tt_gauge_vector", "tt_slice_constraints", "to_transverse_traceless", "tt_obstruction",
    "synchronous_gauge_vector", "synchronous_residual", "to_synchronous",
]
