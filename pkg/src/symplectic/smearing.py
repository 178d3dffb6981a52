"""
Smearing (test) tensors for observables.

Divergence-free test tensors come from the linearized Bianchi identity: 2L(k)
for a compactly supported k, or the commutator of L with a smoothstep in time
applied to a solution.
"""

from typing import Tuple

import numpy as np

from src.background.spacetime import Background
from src.fields.calculus import trace_reverse
from src.fields.tensors import SymField2, require_interior_support, support_of
from src.greens.operators import pauli_jordan
from src.linop.operators import linearized_einstein
from src.utils.common import smoothstep
from src.utils.errors import GeometryError

MIN_WINDOW_LAYERS = 6


def _declare_support(f: SymField2) -> SymField2:
    window = support_of(f, 0.0)
    return f.with_support(window) if window is not None else f


def null_test_tensor(bg: Background, k: SymField2) -> SymField2:
    """2L(k): observables smeared with it vanish on every solution."""
    require_interior_support(k, layers=4, name="null test tensor potential")
    return _declare_support(2.0 * linearized_einstein(bg, k))


def time_window(bg: Background, window: Tuple[int, int]) -> np.ndarray:
    """
    Smoothstep chi+ rising strictly inside the layers (j_lo, j_hi): 0 up to
    layer j_lo + 1, 1 from layer j_hi - 1.
    """
    j_lo, j_hi = window
    nt = bg.grid.nt
    if j_hi - j_lo + 1 < MIN_WINDOW_LAYERS:
        raise GeometryError(
            f"time window {window} is thinner than {MIN_WINDOW_LAYERS} layers",
            window=list(window),
        )
    if j_lo < 4 or j_hi > nt - 5:
        raise GeometryError(f"time window {window} leaves the grid interior", window=list(window))
    t = bg.grid.t
    return smoothstep(t, t[j_lo + 1], t[j_hi - 1])


def bianchi_test_tensor(bg: Background, solution: SymField2, window: Tuple[int, int]) -> SymField2:
    """
    2L(chi+ phi) - 2 chi+ L(phi) for a solution phi, supported in the window
    layers [j_lo, j_hi].

    The first term alone is divergence-free; subtracting chi+ L(phi) removes
    the discrete residual of phi away from the window.
    """
    chi = time_window(bg, window)
    cut = SymField2(bg.grid, solution.components * chi[None, :, None])
    f = 2.0 * linearized_einstein(bg, cut) - 2.0 * SymField2(
        bg.grid, linearized_einstein(bg, solution).components * chi[None, :, None])
    return _declare_support(f)


def time_slice_test_tensor(bg: Background, f: SymField2, window: Tuple[int, int]) -> SymField2:
    """
    Test tensor supported near the window whose observable agrees with that
    of f on solutions: the Bianchi tensor of E f_bar.
    """
    f_bar, _ = trace_reverse(bg, f)
    return bianchi_test_tensor(bg, pauli_jordan(bg, f_bar), window)
