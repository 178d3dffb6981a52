"""
lingrav - numerical workbench for linearized gravity on cosmological vacuum
backgrounds.

Minkowski and de Sitter backgrounds on a symmetry-reduced periodic grid,
covariant calculus on perturbations, gauge transformations, Cauchy evolution,
Green's operators, the pre-symplectic structure and its observables, the ADM
constraint geometry, and the quantum *-algebra of smeared fields.
"""

__version__ = "0.1.0"
__author__ = "lingrav developers"

# Core utilities
from .utils.config import Config, ConfigManager, get_tolerances
from .utils.errors import WorkbenchError
from .utils.logging_config import get_logger, setup_logging_from_config

# Geometry
from .background import Grid, BackgroundKind, BackgroundSpec, Background, build_background
from .fields import TensorField, ScalarField, VecField, CovecField, SymField2

# Operators and solvers
from .linop import linearized_einstein, lichnerowicz, conjugate_momentum
from .gauge import to_de_donder, to_transverse_traceless, to_synchronous
from .cauchy import CauchyData, constraint, evolve, solve_linearized
from .greens import WaveOperator, GreensKind, GreensRequest, greens_apply

# Phase space and quantization
from .symplectic import presymplectic, make_observable, observable_eval, poisson_bracket
from .adm import ADMState, ADMPerturbation, linearized_constraints, adm_symplectic
from .algebra import CCRAlgebra, AlgebraElement, generator, commutator, is_null

__all__ = [
    # Core utilities
    "Config", "ConfigManager", "get_tolerances", "WorkbenchError",
    "get_logger", "setup_logging_from_config",

    # Geometry
    "Grid", "BackgroundKind", "BackgroundSpec", "Background", "build_background",
    "TensorField", "ScalarField", "VecField", "CovecField", "SymField2",

    # Operators and solvers
    "linearized_einstein", "lichnerowicz", "conjugate_momentum",
    "to_de_donder", "to_transverse_traceless", "to_synchronous",
    "CauchyData", "constraint", "evolve", "solve_linearized",
    "WaveOperator", "GreensKind", "GreensRequest", "greens_apply",

    # Phase space and quantization
    "presymplectic", "make_observable", "observable_eval", "poisson_bracket",
    "ADMState", "ADMPerturbation", "linearized_constraints", "adm_symplectic",
    "CCRAlgebra", "AlgebraElement", "generator", "commutator", "is_null",
]
