"""Finite groupoids, their unitary duals, and Tannaka duality checks."""
from .duality import (DualityReport, TannakaElement, compose, inverse, reconstruct, tannaka_of_x,
                      verify_duality)
from .errors import (ConfigError, DecompositionError, ScaleError, ShapeError, SpecError, SplitError,
                     TannakaError)
from .fourier import convolve, fourier, inverse_fourier
from .groupoid import FiniteGroup, FiniteGroupoid, build, bundle, components, group, haar, pair, product, union, validate
from .irreps import group_irreps
from .natural import NaturalTransformation, extend, involution, is_hermitian, is_monoidal, t_of_x
from .reps import Dual, GroupoidRep, decompose, intertwiners, unitary_dual

__all__ = [
    "DualityReport",
    "TannakaElement",
    "compose",
    "inverse",
    "reconstruct",
    "tannaka_of_x",
    "verify_duality",
    "ConfigError",
    "DecompositionError",
    "ScaleError",
    "ShapeError",
    "SpecError",
    "SplitError",
    "TannakaError",
    "convolve",
    "fourier",
    "inverse_fourier",
    "FiniteGroup",
    "FiniteGroupoid",
    "build",
    "bundle",
    "components",
    "group",
    "haar",
    "pair",
    "product",
    "union",
    "validate",
    "group_irreps",
    "NaturalTransformation",
    "extend",
    "involution",
    "is_hermitian",
    "is_monoidal",
    "t_of_x",
    "Dual",
    "GroupoidRep",
    "decompose",
    "intertwiners",
    "unitary_dual",
]

__version__ = "0.1.0"
