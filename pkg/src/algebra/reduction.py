"""
Time-slice reduction: replace a test tensor by one supported in a thin slab
around a Cauchy surface with the same generator in the quotient algebra.
"""

from typing import Tuple

from src.background.spacetime import Background
from src.fields.tensors import RankTwo, SymField2, support_of, symmetric_part
from src.symplectic.observables import DivergenceClass, make_observable
from src.symplectic.smearing import time_slice_test_tensor
from src.utils.config import get_tolerances
from src.utils.errors import ContractError, SupportError
from src.utils.logging_config import get_logger

logger = get_logger(__name__)


def time_slice_reduce(bg: Background, f: RankTwo, window: Tuple[int, int]) -> SymField2:
    """
    f~ = 2L(chi+ E f_bar) - 2 chi+ L(E f_bar), supported in the window layers.

    The window must have at least six layers and leave four layers to each
    temporal boundary.
    """
    observable = make_observable(bg, f)
    if observable.divergence_class is DivergenceClass.UNRESTRICTED:
        raise ContractError(
            "time-slice reduction needs a divergence-free symmetric part",
            measured=observable.divergence_norm,
            tolerance=get_tolerances().divergence_ratio * observable.gradient_norm,
        )
    reduced = time_slice_test_tensor(bg, symmetric_part(f), window)
    extent = support_of(reduced, get_tolerances().support_threshold)
    if extent is not None and (extent.t_lo < window[0] or extent.t_hi > window[1]):
        raise SupportError(
            f"reduced test tensor spills outside window {window}",
            window=list(window), support=[extent.t_lo, extent.t_hi],
        )
    logger.debug(f"⏱️ Reduced test tensor to layers {window}")
    return reduced
