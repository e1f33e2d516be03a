"""Exact computations with square-zero extensions of finite-dimensional algebras."""

from .exactla import GF, QQ, field_from_descriptor
from .algebra import Algebra, Bimodule, LeftModule, make_algebra, validate_algebra
from .hochschild import Cochain, cohomology, differential
from .extensions import (
    ExtensionAlgebra,
    build_extension,
    choose_section,
    equiv,
    exan_basis,
    extract_cocycle,
    is_cocycle,
)

__all__ = [
    "GF",
    "QQ",
    "field_from_descriptor",
    "Algebra",
    "Bimodule",
    "LeftModule",
    "make_algebra",
    "validate_algebra",
    "Cochain",
    "cohomology",
    "differential",
    "ExtensionAlgebra",
    "build_extension",
    "choose_section",
    "equiv",
    "exan_basis",
    "extract_cocycle",
    "is_cocycle",
]

__version__ = "0.1.0"
