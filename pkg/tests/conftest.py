"""
Shared fixtures: small backgrounds for exactness checks, convergence-sized
backgrounds for order studies, and the observed-order helper.
"""

import math
from typing import Callable

import numpy as np
import pytest

from src.background import Background, BackgroundKind, BackgroundSpec, Grid, build_background
from src.utils.common import observed_order

MINKOWSKI = BackgroundSpec(BackgroundKind.MINKOWSKI_TORUS)
DE_SITTER = BackgroundSpec(BackgroundKind.DE_SITTER_FLAT_CHART, H=1.0)


def make_background(kind: str, nt: int, nx: int, t0: float = None, t1: float = None) -> Background:
    if kind == "minkowski":
        grid = Grid(nt=nt, nx=nx, t0=0.0 if t0 is None else t0, t1=2.0 if t1 is None else t1)
        return build_background(MINKOWSKI, grid)
    grid = Grid(nt=nt, nx=nx, t0=-3.0 if t0 is None else t0, t1=-1.0 if t1 is None else t1)
    return build_background(DE_SITTER, grid)


@pytest.fixture
def minkowski_small() -> Background:
    return make_background("minkowski", nt=17, nx=8)


@pytest.fixture
def desitter_small() -> Background:
    return make_background("desitter", nt=17, nx=8, t0=-2.2, t1=-0.2)


@pytest.fixture
def minkowski() -> Background:
    return make_background("minkowski", nt=65, nx=32)


@pytest.fixture
def desitter() -> Background:
    return make_background("desitter", nt=65, nx=32)


@pytest.fixture(params=["minkowski", "desitter"])
def chart(request) -> Background:
    """Convergence-sized background of each chart."""
    return make_background(request.param, nt=65, nx=32)


def order_of(error: Callable[[Background], float], bg: Background) -> float:
    """Observed order of ``error`` between ``bg`` and its doubled grid."""
    coarse = error(bg)
    fine = error(bg.refined())
    assert math.isfinite(coarse) and math.isfinite(fine)
    return observed_order(coarse, fine)


@pytest.fixture
def convergence_order() -> Callable[[Callable[[Background], float], Background], float]:
    return order_of


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)
