"""
Quantum *-algebra of smeared linearized fields: normal-ordered words of
generators, adjoints, commutators, null certification and the time-slice
reduction of test tensors.
"""

from .elements import (
    Word, UNIT, label_key, GeneratorLabel, AlgebraElement, NullReport, CCRAlgebra,
    generator, product, adjoint, commutator, is_null,
)
from .reduction import time_slice_reduce

__all__ = [
    "Word", "UNIT", "label_key", "GeneratorLabel", "AlgebraElement", "NullReport", "CCRAlgebra",
    "generator", "product", "adjoint", "commutator", "is_null",
    "time_slice_reduce",
]
